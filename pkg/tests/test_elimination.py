import itertools
import math

import pytest
from hypothesis import given, settings

from uwc.catalog import (
    cascade_channel,
    no_singleton_channel,
    pinned_a1_channel,
    superactivation_channel,
    transparent_eavesdropper_channel,
)
from uwc.channel import Code, wiretap_code_profile
from uwc.elimination import count_secure_words, eliminate, injective_secrecy_capacity
from uwc.errors import NotInjective
from uwc.search import SearchBudget, max_wiretap_code

from conftest import wiretap_channels


def test_cascade_trace():
    trace = eliminate(cascade_channel(), 1)
    assert trace.S == 3
    assert [s.removed for s in trace.steps] == [(("a1",),), (("a2",),), (("a3",),)]
    assert trace.steps[0].generators == {("a1",): (("c1",),)}
    assert trace.steps[1].generators == {("a2",): (("c2",),)}
    assert trace.eliminated == {("a1",), ("a2",), ("a3",)}
    assert trace.survivors == frozenset()


def test_cascade_json():
    data = eliminate(cascade_channel(), 1).to_json()
    assert data["S"] == 3
    assert data["steps"][2]["removed"] == [{"word": ["a3"], "generators": [["c3"]]}]


def test_no_singleton_channel_keeps_everything():
    trace = eliminate(no_singleton_channel(), 1)
    assert trace.S == 0 and trace.eliminated == frozenset()
    assert len(trace.survivors) == 3


def test_pinned_a1_blocklength_two():
    trace = eliminate(pinned_a1_channel(), 2)
    assert trace.eliminated == {("a1", "a1")}


def test_capacity_dichotomy_examples():
    assert injective_secrecy_capacity(cascade_channel()).capacity == 0
    cap = injective_secrecy_capacity(no_singleton_channel())
    assert cap.positive and cap.capacity == pytest.approx(math.log2(3))
    assert wiretap_code_profile(no_singleton_channel(), cap.witness).valid
    assert injective_secrecy_capacity(transparent_eavesdropper_channel()).capacity == 0


def test_secure_word_counts():
    c = count_secure_words(pinned_a1_channel(), 2)
    assert (c.N, c.bound) == (8, 8)
    c = count_secure_words(no_singleton_channel(), 2)
    assert (c.N, c.bound) == (9, 9)
    c = count_secure_words(cascade_channel(), 1)
    assert (c.N, c.bound) == (0, 0)


def test_non_injective_rejected():
    with pytest.raises(NotInjective):
        eliminate(superactivation_channel(), 1)
    with pytest.raises(NotInjective):
        injective_secrecy_capacity(superactivation_channel())


def chains_hold(trace):
    prev_elim, prev_surv = frozenset(), frozenset(trace.words)
    for s in trace.steps:
        assert prev_elim < s.eliminated
        assert s.survivors < prev_surv
        assert s.eliminated | s.survivors == frozenset(trace.words)
        prev_elim, prev_surv = s.eliminated, s.survivors
    assert trace.S <= len(trace.words)


@settings(max_examples=60, deadline=None)
@given(wiretap_channels(max_in=4, max_out=4, injective_main=True))
def test_containment_and_chain(W):
    first = eliminate(W, 1)
    A1 = {w[0] for w in first.eliminated}
    for n in (1, 2, 3):
        trace = eliminate(W, n)
        chains_hold(trace)
        for w in trace.eliminated:
            assert all(a in A1 for a in w)
        c = count_secure_words(W, n)
        assert c.N >= c.bound


@settings(max_examples=60, deadline=None)
@given(wiretap_channels(max_in=4, max_out=4, injective_main=True))
def test_sequential_and_simultaneous_fixed_points_agree(W):
    for n in (1, 2):
        a = eliminate(W, n)
        b = eliminate(W, n, sequential=True)
        assert a.survivors == b.survivors
        assert b.S == len(b.eliminated) >= a.S


@settings(max_examples=60, deadline=None)
@given(wiretap_channels(max_in=4, max_out=4, injective_main=True))
def test_survivors_form_a_wiretap_code(W):
    for n in (1, 2):
        survivors = eliminate(W, n).sorted_survivors()
        if len(survivors) >= 2:
            F = Code(n, tuple(frozenset([w]) for w in survivors))
            assert wiretap_code_profile(W, F).valid


@settings(max_examples=40, deadline=None)
@given(wiretap_channels(max_in=3, max_out=3, injective_main=True))
def test_agrees_with_general_search(W):
    for n in (1, 2):
        N = count_secure_words(W, n).N
        r = max_wiretap_code(W, n, SearchBudget(max_class_size=1))
        if N >= 2:
            assert r is not None and r.M == N
        else:
            assert r is None


@settings(max_examples=40, deadline=None)
@given(wiretap_channels(max_in=4, max_out=4, injective_main=True))
def test_final_hypergraph_has_no_singletons(W):
    trace = eliminate(W, 1)
    alive = trace.survivors
    for a in W.input:
        for c in W.eaves.image(a):
            members = {(x,) for x in W.input if c in W.eaves.image(x)} & alive
            assert len(members) != 1
