import itertools
import math
from fractions import Fraction as Fr

import pytest
from hypothesis import given, settings, strategies as st

from uwc.errors import OutOfReach, PreconditionUnmet
from uwc.quantizer import (
    Interval,
    PlantParams,
    QuantizerState,
    advance,
    as_rational,
    cell_index,
    divergence_bound_separated,
    divergence_bound_unconditional,
    initial_state,
    interval_length,
    midpoint_closed_form,
    quantizer_step,
    reach,
    separated_gap,
    sigma,
    sup_interval_length,
    trajectory,
)

P = PlantParams(2, 1, 3)


def test_worked_step():
    step = quantizer_step(initial_state(P), Fr(3, 10))
    assert step.reach == Interval(Fr(-1, 2), Fr(1, 2))
    assert step.m == 3
    assert step.next.I == Interval(Fr(1, 6), Fr(1, 2))


def test_out_of_reach():
    with pytest.raises(OutOfReach):
        quantizer_step(initial_state(P), 1)


def test_prediction_lands_in_its_cell():
    state = QuantizerState(0, Interval(Fr(1, 6), Fr(1, 2)), P)
    x = P.lam * state.I.midpoint
    step = quantizer_step(state, x)
    assert x in step.next.I


def test_ties():
    R = Interval(0, 3)
    assert cell_index(R, 3, 1) == 1
    assert cell_index(R, 3, 1, tie="upper") == 2
    assert cell_index(R, 3, 0) == 1 and cell_index(R, 3, 3) == 3
    assert cell_index(Interval(0, 0), 3, 0) == 1


def test_params_validation():
    for bad in [(1, 1, 2), (2, 0, 2), (2, 1, 1)]:
        with pytest.raises(ValueError):
            PlantParams(*bad)
    assert as_rational(0.3) == Fr(3, 10)


def test_interval_length_examples():
    assert interval_length(2, P, 0) == Fr(5, 9)
    assert interval_length(0, P, Fr(7, 3)) == Fr(7, 3)
    assert interval_length(4, PlantParams(2, 1, 2), 0) == 2
    lengths = [I.length for I in trajectory(PlantParams(2, 1, 2), Interval.point(0), [1, 2, 2, 1])]
    assert lengths[-1] == 2


def test_sup_interval_length_examples():
    assert sup_interval_length(P, 0) == 1
    assert sup_interval_length(PlantParams(2, 1, 2), 0) == math.inf
    assert sup_interval_length(P, 100) == 100


def test_midpoint_examples():
    assert midpoint_closed_form([3], P, Interval.point(0)) == Fr(1, 3)
    assert midpoint_closed_form([2] * 7, P, Interval.point(0)) == 0
    assert midpoint_closed_form([], P, Interval(1, 2)) == Fr(3, 2)
    assert midpoint_closed_form([], P, Interval(1, 2), xhat0=5) == 5


def test_sigma_equal_branch():
    assert sigma(3, PlantParams(2, 1, 2)) == 4
    assert sigma(2, P) == 1 + Fr(2, 3) + Fr(4, 9)


def test_divergence_separated_examples():
    assert divergence_bound_separated(P, 2, 0, 0) == Fr(1, 2)
    assert divergence_bound_separated(P, 3, 0, 0) == 1
    assert divergence_bound_separated(P, 2, 0, Fr(1, 4)) == Fr(3, 4)
    with pytest.raises(ValueError):
        divergence_bound_separated(P, 4, 0, 0)


def test_separated_limit_at_t30():
    upper = [3] * 30
    lower = [2] * 30
    gap = (midpoint_closed_form(upper, P, Interval.point(0))
           - midpoint_closed_form(lower, P, Interval.point(0))) / P.lam**30
    assert gap == separated_gap(P, 2, 0, 30)
    assert abs(gap - Fr(1, 2)) < Fr(1, 10**6)


def test_divergence_unconditional_examples():
    assert divergence_bound_unconditional(PlantParams(2, 1, 2), 0, 2) == 1
    with pytest.raises(PreconditionUnmet):
        divergence_bound_unconditional(PlantParams(2, 1, 2), 0, 1)
    tiny = PlantParams(2, Fr(1, 10**9), 2)
    assert 2 - divergence_bound_unconditional(tiny, 0, 2) < Fr(1, 10**8)


def test_unconditional_bound_by_adversarial_search():
    """Two estimators started 2 apart; any index pairs keep the scaled gap above 1."""
    params = PlantParams(2, 1, 2)
    bound = divergence_bound_unconditional(params, 0, 2)
    starts = [Interval.point(2), Interval.point(0)]
    for t in range(1, 9):
        worst = None
        for seq in itertools.product((1, 2), repeat=t):
            for seq2 in itertools.product((1, 2), repeat=t):
                a = midpoint_closed_form(seq, params, starts[0])
                b = midpoint_closed_form(seq2, params, starts[1])
                v = abs(a - b) / params.lam**t
                worst = v if worst is None else min(worst, v)
        assert worst >= bound
        if t > 5:
            break


rationals = st.fractions(min_value=-5, max_value=5, max_denominator=12)
lams = st.sampled_from([Fr(3, 2), Fr(2), Fr(3), Fr(5, 4)])


@settings(max_examples=80, deadline=None)
@given(lams, st.integers(2, 5), st.sampled_from([Fr(1), Fr(1, 2), Fr(3)]),
       st.lists(st.integers(1, 5), max_size=12), rationals, st.fractions(0, 3, max_denominator=6))
def test_closed_forms_match_recursion(lam, M, omega, raw, center, length):
    params = PlantParams(lam, omega, M)
    seq = [min(m, M) for m in raw]
    I0 = Interval.centered(center, length)
    path = trajectory(params, I0, seq)
    assert path[-1].length == interval_length(len(seq), params, length)
    assert path[-1].midpoint == midpoint_closed_form(seq, params, I0)


@settings(max_examples=60, deadline=None)
@given(lams, st.integers(2, 4), st.lists(st.fractions(-1, 1, max_denominator=8), min_size=1, max_size=15))
def test_step_contains_state_and_length(lam, M, ws):
    params = PlantParams(lam, 2, M)
    state = initial_state(params)
    x = Fr(0)
    for w in ws:
        x = lam * x + w
        step = quantizer_step(state, x)
        assert x in step.next.I
        assert step.next.I.length == interval_length(step.next.t, params, 0)
        assert step.next.I == advance(state, step.m).I
        assert step.reach == reach(state.I, params)
        state = step.next
