"""Adaptive interval quantizer for the scalar plant x(t+1) = lam*x(t) + w(t).

Given the interval I_{t-1} known to contain the state, the reachable set at
time t is lam*I_{t-1} + [-omega/2, omega/2]; it is cut into M equal cells and
the index of the cell holding x(t) is transmitted.  Everything is exact
rational arithmetic so the closed forms can be checked with zero tolerance.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import OutOfReach, PreconditionUnmet


def as_rational(x) -> Fraction:
    """Exact conversion; floats go through their shortest decimal repr."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        return Fraction(repr(x))
    return Fraction(x)


@dataclass(frozen=True)
class Interval:
    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        lo, hi = as_rational(self.lo), as_rational(self.hi)
        if lo > hi:
            raise ValueError(f"empty interval [{lo}, {hi}]")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @classmethod
    def point(cls, x) -> "Interval":
        return cls(x, x)

    @classmethod
    def centered(cls, center, length) -> "Interval":
        center, length = as_rational(center), as_rational(length)
        return cls(center - length / 2, center + length / 2)

    @property
    def length(self) -> Fraction:
        return self.hi - self.lo

    @property
    def midpoint(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def __contains__(self, x) -> bool:
        return self.lo <= x <= self.hi


@dataclass(frozen=True)
class PlantParams:
    lam: Fraction
    omega: Fraction
    M: int

    def __post_init__(self):
        lam, omega = as_rational(self.lam), as_rational(self.omega)
        if lam <= 1:
            raise ValueError("the pole must exceed 1")
        if omega <= 0:
            raise ValueError("the disturbance range must be positive")
        if int(self.M) != self.M or self.M < 2:
            raise ValueError("M must be an integer >= 2")
        object.__setattr__(self, "lam", lam)
        object.__setattr__(self, "omega", omega)
        object.__setattr__(self, "M", int(self.M))


@dataclass(frozen=True)
class QuantizerState:
    t: int
    I: Interval
    params: PlantParams


@dataclass(frozen=True)
class QuantizerStep:
    m: int
    next: QuantizerState
    reach: Interval


def reach(I: Interval, params: PlantParams) -> Interval:
    """[A(t), B(t)]: states reachable one step after I."""
    half = params.omega / 2
    return Interval(params.lam * I.lo - half, params.lam * I.hi + half)


def partition_cell(R: Interval, M: int, m: int) -> Interval:
    """P_m: the m-th of M equal cells of R (1-based)."""
    if not 1 <= m <= M:
        raise ValueError(f"cell index {m} outside 1..{M}")
    width = R.length / M
    return Interval(R.lo + (m - 1) * width, R.lo + m * width)


def cell_index(R: Interval, M: int, x, tie: str = "lower") -> int:
    """Index of the cell of R containing x; shared endpoints go to ``tie``."""
    x = as_rational(x)
    if x not in R:
        raise OutOfReach(x, R.lo, R.hi)
    if R.length == 0:
        return 1
    pos = (x - R.lo) * M / R.length
    k = math.floor(pos)
    if pos == k and 0 < k < M:
        return k if tie == "lower" else k + 1
    return min(max(k + 1, 1), M)


def initial_state(params: PlantParams, I0: Interval | None = None) -> QuantizerState:
    return QuantizerState(0, I0 if I0 is not None else Interval.point(0), params)


def advance(state: QuantizerState, m: int) -> QuantizerState:
    """Next state when the cell index m is known (receiver side)."""
    cell = partition_cell(reach(state.I, state.params), state.params.M, m)
    return QuantizerState(state.t + 1, cell, state.params)


def quantizer_step(state: QuantizerState, x, tie: str = "lower") -> QuantizerStep:
    """Quantize x(t) given I_{t-1}; raises OutOfReach for an impossible state."""
    if tie not in ("lower", "upper"):
        raise ValueError("tie must be 'lower' or 'upper'")
    R = reach(state.I, state.params)
    m = cell_index(R, state.params.M, x, tie)
    cell = partition_cell(R, state.params.M, m)
    return QuantizerStep(m, QuantizerState(state.t + 1, cell, state.params), R)


def trajectory(params: PlantParams, I0: Interval, indices: Sequence[int]) -> list:
    """Intervals I_0, ..., I_t produced by the recursion for an index sequence."""
    state = initial_state(params, I0)
    out = [state.I]
    for m in indices:
        state = advance(state, m)
        out.append(state.I)
    return out


def interval_length(t: int, params: PlantParams, I0_len) -> Fraction:
    """|I_t| (the same for every index sequence)."""
    if t < 0:
        raise ValueError("t must be nonnegative")
    I0_len = as_rational(I0_len)
    lam, omega, M = params.lam, params.omega, params.M
    if lam == M:
        return I0_len + t * omega / M
    fixed = omega / (M - lam)
    return (lam / M) ** t * (I0_len - fixed) + fixed


def sup_interval_length(params: PlantParams, I0_len):
    """sup_t |I_t|: finite exactly when lam < M; ``math.inf`` otherwise."""
    I0_len = as_rational(I0_len)
    if params.lam >= params.M:
        return math.inf
    return max(I0_len, params.omega / (params.M - params.lam))


def sigma(t: int, params: PlantParams) -> Fraction:
    """sum_{i=0}^{t} (lam/M)^i."""
    ratio = params.lam / params.M
    if ratio == 1:
        return Fraction(t + 1)
    return params.M / (params.M - params.lam) * (1 - ratio ** (t + 1))


def midpoint_closed_form(indices: Sequence[int], params: PlantParams, I0: Interval, xhat0=None) -> Fraction:
    """Midpoint of I_t from the index sequence without running the recursion."""
    xhat0 = I0.midpoint if xhat0 is None else as_rational(xhat0)
    lam, omega, M = params.lam, params.omega, params.M
    I0_len = I0.length
    total = Fraction(0)
    for i, m in enumerate(indices):
        weight = omega * sigma(i, params) / lam ** (i + 1) + I0_len / Fraction(M) ** i
        total += weight * (1 - Fraction(2 * m - 1, M))
    return lam ** len(indices) * (xhat0 - total / 2)


def separated_gap(params: PlantParams, L: int, I0_len, t: int) -> Fraction:
    """Guaranteed (xhat(t) - xhat'(t))/lam^t - (xhat(0) - xhat'(0)) after t steps
    whose index gaps are all at least L - 1 (finite-t version of the limit bound)."""
    I0_len = as_rational(I0_len)
    lam, omega, M = params.lam, params.omega, params.M
    total = Fraction(0)
    for i in range(t):
        total += (omega / M) * sigma(i, params) / lam ** (i + 1) + I0_len / Fraction(M) ** (i + 1)
    return (L - 1) * total


def divergence_bound_separated(params: PlantParams, L: int, I0_len, xhat0_gap) -> Fraction:
    """Lower bound on liminf (xhat(t) - xhat'(t))/lam^t when m_t - m'_t >= L - 1."""
    if not 2 <= L <= params.M:
        raise ValueError("need 2 <= L <= M")
    I0_len, xhat0_gap = as_rational(I0_len), as_rational(xhat0_gap)
    return xhat0_gap + Fraction(L - 1, params.M - 1) * (params.omega / (params.lam - 1) + I0_len)


def divergence_threshold(params: PlantParams, I0_len) -> Fraction:
    return params.omega / (params.lam - 1) + as_rational(I0_len)


def divergence_bound_unconditional(params: PlantParams, I0_len, xhat0_gap) -> Fraction:
    """Index-free lower bound on liminf |xhat(t) - xhat'(t)|/lam^t.

    Requires the initial separation to exceed omega/(lam-1) + |I_0| strictly.
    """
    gap = abs(as_rational(xhat0_gap))
    threshold = divergence_threshold(params, I0_len)
    if gap <= threshold:
        raise PreconditionUnmet(f"initial separation {gap} must exceed {threshold}")
    return gap - threshold
