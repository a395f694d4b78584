"""Exact search for zero-error codes and zero-error wiretap codes.

All searches run over the words of A^n in canonical order, with vertex sets
encoded as bitmasks, so results are deterministic.  Plain zero-error codes
reduce to maximum independent sets of the confusability graph; wiretap codes
need a branch-and-bound over families of disjoint codeword classes because a
message may have to be encoded into several codewords.
"""
from __future__ import annotations

import itertools
import math
import os
import time
from dataclasses import dataclass, field, replace
from fractions import Fraction

from .channel import Code, UncertainChannel, WiretapChannel, wiretap_code_profile
from .confusability import (
    DEFAULT_MAX_VERTICES,
    bits,
    confusability_graph,
    eavesdropper_hypergraph,
)
from .errors import BudgetExceeded, NoCodeExists, ParseError


@dataclass(frozen=True)
class SearchBudget:
    """Limits for the exponential searches.

    ``max_class_size=None`` removes the restriction on |F(m)|.  ``max_nodes``
    and ``time_limit`` cut the branch-and-bound short; a cut search reports
    ``exhaustive=False``.
    """

    max_class_size: int | None = 2
    max_words_enumerated: int = DEFAULT_MAX_VERTICES
    time_limit: float | None = None
    max_nodes: int | None = None
    max_label_permutations: int = 40320

    def __post_init__(self):
        if self.max_class_size is not None and self.max_class_size < 1:
            raise ValueError("max_class_size must be at least 1")
        if self.max_words_enumerated < 1:
            raise ValueError("max_words_enumerated must be positive")

    @classmethod
    def from_env(cls, base: "SearchBudget | None" = None, env: str = "UWC_BUDGET") -> "SearchBudget":
        """Override fields from ``UWC_BUDGET="max_class_size=3,time_limit=5"``."""
        budget = base or cls()
        spec = os.environ.get(env)
        if not spec:
            return budget
        return budget.updated(spec)

    def updated(self, spec: str) -> "SearchBudget":
        changes = {}
        for item in filter(None, (s.strip() for s in spec.split(","))):
            key, sep, value = item.partition("=")
            key = key.strip()
            if not sep or key not in {"max_class_size", "max_words_enumerated", "time_limit", "max_nodes"}:
                raise ParseError(f"bad budget entry {item!r}")
            value = value.strip()
            try:
                if value.lower() in ("none", "inf", ""):
                    changes[key] = None
                elif key == "time_limit":
                    changes[key] = float(value)
                else:
                    changes[key] = int(value)
            except ValueError:
                raise ParseError(f"bad budget value {item!r}") from None
        if changes.get("max_words_enumerated", 1) is None:
            raise ParseError("max_words_enumerated cannot be unlimited")
        try:
            return replace(self, **changes)
        except ValueError as exc:
            raise ParseError(str(exc)) from None


@dataclass(frozen=True)
class SearchResult:
    M: int
    code: Code
    exhaustive: bool
    n: int
    L: int | None = None

    @property
    def delta(self) -> Fraction | None:
        if self.L is None:
            return None
        return Fraction(self.L - 1, self.M - 1)


class _Stop(Exception):
    pass


class _Limiter:
    def __init__(self, budget: SearchBudget):
        self.max_nodes = budget.max_nodes
        self.deadline = None if budget.time_limit is None else time.monotonic() + budget.time_limit
        self.nodes = 0

    def tick(self):
        self.nodes += 1
        if self.max_nodes is not None and self.nodes > self.max_nodes:
            raise _Stop
        if self.deadline is not None and self.nodes % 1024 == 0 and time.monotonic() > self.deadline:
            raise _Stop


def _clique_cover_bound(mask: int, closed: list) -> int:
    """Number of cliques in a greedy clique cover of ``mask`` (bounds any independent set)."""
    count = 0
    while mask:
        v = (mask & -mask).bit_length() - 1
        clique = mask & closed[v]
        members = 1 << v
        rest = clique & ~members
        while rest:
            u = (rest & -rest).bit_length() - 1
            members |= 1 << u
            rest &= closed[u]
            rest &= ~members
        mask &= ~members
        count += 1
    return count


def _max_independent_set(closed: list, limiter: _Limiter) -> tuple[list, bool]:
    """Lexicographically least maximum independent set; include-first DFS."""
    best: list = []
    n = len(closed)

    def expand(chosen: list, cand: int):
        nonlocal best
        limiter.tick()
        if not cand:
            if len(chosen) > len(best):
                best = list(chosen)
            return
        if len(chosen) + _clique_cover_bound(cand, closed) <= len(best):
            return
        v = (cand & -cand).bit_length() - 1
        chosen.append(v)
        expand(chosen, cand & ~closed[v])
        chosen.pop()
        expand(chosen, cand & ~(1 << v))

    try:
        expand([], (1 << n) - 1)
        return best, True
    except _Stop:
        greedy, cand = [], (1 << n) - 1
        while cand:
            v = (cand & -cand).bit_length() - 1
            greedy.append(v)
            cand &= ~closed[v]
        return max(best, greedy, key=len), False


def max_zero_error_code(T: UncertainChannel, n: int, budget: SearchBudget | None = None) -> SearchResult:
    """N_T(n) as the independence number of G(T^n), with the lexicographically
    least maximum independent set as singleton-class witness."""
    budget = budget or SearchBudget()
    G = confusability_graph(T, n, budget.max_words_enumerated)
    closed = [G.closed_neighbors(i) for i in range(len(G.vertices))]
    best, complete = _max_independent_set(closed, _Limiter(budget))
    code = Code(n, tuple(frozenset([G.vertices[i]]) for i in best))
    return SearchResult(M=len(best), code=code, exhaustive=complete, n=n)


@dataclass
class _WiretapInstance:
    vertices: tuple
    closed: list
    edge_masks: list = field(repr=False)
    usable: int = 0

    @classmethod
    def build(cls, W: WiretapChannel, n: int, budget: SearchBudget) -> "_WiretapInstance":
        G = confusability_graph(W.main, n, budget.max_words_enumerated)
        H = eavesdropper_hypergraph(W.eaves, n, budget.max_words_enumerated)
        closed = [G.closed_neighbors(i) for i in range(len(G.vertices))]
        edges = list(H.hyperedges.values())
        return cls(G.vertices, closed, edges, _usable_words(len(G.vertices), edges))

    @property
    def usable_count(self) -> int:
        return self.usable.bit_count()

    def cap_free(self, budget: SearchBudget, M: int) -> bool:
        """True when the class-size cap cannot exclude any family of M classes."""
        cap = budget.max_class_size
        return cap is None or cap >= self.usable_count - M + 1

    def hit_sets(self, class_masks: list) -> list | None:
        """Per reachable hyperedge, the classes it meets; None if one meets a single class."""
        seen = set()
        out = []
        for e in self.edge_masks:
            hit = tuple(m for m, cm in enumerate(class_masks) if e & cm)
            if not hit:
                continue
            if len(hit) == 1:
                return None
            if hit not in seen:
                seen.add(hit)
                out.append(hit)
        return out


def _usable_words(V: int, edge_masks: list) -> int:
    """Words that may appear in some secure code.

    A word isolated by an eavesdropper output among the still-usable words
    would leave that output with one generating message, so it is dropped;
    this repeats to a fixed point.
    """
    usable = (1 << V) - 1
    changed = True
    while changed:
        changed = False
        for e in edge_masks:
            r = e & usable
            if r and r & (r - 1) == 0:
                usable &= ~r
                changed = True
    return usable


def _best_labelling(hits: list, M: int, max_perms: int) -> tuple[int, tuple]:
    """Labelling of the classes maximising L = min over outputs of the label spread.

    Returns ``(L, order)`` where ``order[label-1]`` is the class index.  Only
    the identity order is tried when M! exceeds ``max_perms``.
    """
    def spread(label_of):
        return min(max(label_of[c] for c in h) - min(label_of[c] for c in h) + 1 for h in hits)

    if math.factorial(M) > max_perms:
        order = tuple(range(M))
        return spread(list(range(M))), order
    best_L, best_order = 0, None
    for order in itertools.permutations(range(M)):
        label_of = [0] * M
        for label, c in enumerate(order):
            label_of[c] = label
        L = spread(label_of)
        if L > best_L:
            best_L, best_order = L, order
            if L == M:
                break
    return best_L, best_order


def _enumerate_families(inst: _WiretapInstance, M: int, max_class_size: int | None, limiter: _Limiter):
    """Yield unordered families of M classes forming independent systems.

    Classes are generated with increasing minimum vertex; each class holds its
    minimum plus up to ``max_class_size - 1`` larger free vertices.
    """
    V = len(inst.vertices)
    closed = inst.closed
    cap = V if max_class_size is None else max_class_size
    classes: list = []

    def rec(used: int, blocked: int, prev_min: int):
        limiter.tick()
        k = len(classes)
        if k == M:
            yield list(classes)
            return
        free = inst.usable & ~blocked & ~used
        for v in bits(free >> (prev_min + 1) << (prev_min + 1)):
            later = free & ~((1 << (v + 1)) - 1)
            extra = list(bits(later))
            for size in range(0, min(cap - 1, len(extra)) + 1):
                for others in itertools.combinations(extra, size):
                    mask = 1 << v
                    block = closed[v]
                    for u in others:
                        mask |= 1 << u
                        block |= closed[u]
                    remaining = later & ~block & ~mask
                    if M - k - 1 > 0 and _clique_cover_bound(remaining, closed) < M - k - 1:
                        continue
                    classes.append(mask)
                    yield from rec(used | mask, blocked | block, v)
                    classes.pop()

    yield from rec(0, 0, -1)


def _search(inst: _WiretapInstance, n: int, M: int, budget: SearchBudget):
    """(result or None, complete) for one target M on a prepared instance."""
    if M > inst.usable_count:
        return None, True
    limiter = _Limiter(budget)
    best = None  # (L, key)
    complete = True
    try:
        for family in _enumerate_families(inst, M, budget.max_class_size, limiter):
            hits = inst.hit_sets(family)
            if hits is None:
                continue
            L, order = _best_labelling(hits, M, budget.max_label_permutations)
            key = tuple(tuple(bits(family[c])) for c in order)
            if best is None or L > best[0] or (L == best[0] and key < best[1]):
                best = (L, key)
    except _Stop:
        complete = False
    if best is None:
        return None, complete
    L, key = best
    code = Code(n, tuple(frozenset(inst.vertices[i] for i in idx) for idx in key))
    exhaustive = complete and inst.cap_free(budget, M)
    return SearchResult(M=M, code=code, exhaustive=exhaustive, n=n, L=L), complete


def search_wiretap_code(W: WiretapChannel, n: int, M: int, budget: SearchBudget | None = None) -> SearchResult | None:
    """A zero-error wiretap (M, n)-code with the largest L found, or None.

    ``exhaustive`` is True when the whole space was searched and the class-size
    cap could not have excluded any family, so L is provably maximal.
    """
    if M < 2:
        raise ValueError("M must be at least 2")
    budget = budget or SearchBudget()
    result, complete = _search(_WiretapInstance.build(W, n, budget), n, M, budget)
    if result is None and not complete:
        raise BudgetExceeded(f"wiretap search for M={M}, n={n} stopped before finding a code")
    return result


def wiretap_exists_exhaustively(W: WiretapChannel, n: int, M: int, budget: SearchBudget | None = None) -> tuple[bool, bool]:
    """(exists, proven): whether some (M, n) wiretap code exists under the budget."""
    budget = budget or SearchBudget()
    inst = _WiretapInstance.build(W, n, budget)
    result, complete = _search(inst, n, M, budget)
    if result is not None:
        return True, True
    return False, complete and inst.cap_free(budget, M)


def _scan_down(W: WiretapChannel, n: int, budget: SearchBudget):
    """Yield (M, result or None, proven-impossible flag) for M from the top down."""
    upper = max_zero_error_code(W.main, n, budget)
    inst = _WiretapInstance.build(W, n, budget)
    top = min(upper.M if upper.exhaustive else len(inst.vertices), inst.usable_count)
    yield None, None, upper.exhaustive
    for M in range(top, 1, -1):
        result, complete = _search(inst, n, M, budget)
        yield M, result, result is None and complete and inst.cap_free(budget, M)


def max_wiretap_code(W: WiretapChannel, n: int, budget: SearchBudget | None = None) -> SearchResult | None:
    """Largest M admitting a zero-error wiretap (M, n)-code under the budget.

    M is scanned downward from N_{T_B}(n) (no wiretap code can beat the main
    channel).  ``exhaustive`` is True when every larger M was proven impossible.
    """
    budget = budget or SearchBudget()
    proven = True
    for M, result, impossible in _scan_down(W, n, budget):
        if M is None:
            proven = impossible
            continue
        if result is not None:
            return replace(result, exhaustive=proven)
        proven = proven and impossible
    return None


@dataclass(frozen=True)
class DeltaResult:
    delta: Fraction
    M: int
    L: int
    code: Code
    n: int
    exhaustive: bool


def delta_n(W: WiretapChannel, n: int, budget: SearchBudget | None = None) -> DeltaResult:
    """Largest (L-1)/(M-1) over the wiretap codes found at blocklength n.

    Ties go to the smaller M.
    """
    budget = budget or SearchBudget()
    best = None
    exhaustive = True
    for M, result, impossible in _scan_down(W, n, budget):
        if M is None:
            exhaustive = impossible
            continue
        if result is None:
            exhaustive = exhaustive and impossible
            continue
        exhaustive = exhaustive and result.exhaustive
        ratio = Fraction(result.L - 1, M - 1)
        if best is None or ratio >= best.delta:
            best = DeltaResult(ratio, M, result.L, result.code, n, False)
    if best is None:
        raise NoCodeExists(f"no zero-error wiretap code at blocklength {n}")
    return replace(best, exhaustive=exhaustive)


def concat_label(messages, M: int) -> int:
    """Lexicographic label of a message tuple: l(m1, m2) = M(m1 - 1) + m2, recursively."""
    label = messages[0]
    for m in messages[1:]:
        label = M * (label - 1) + m
    return label


def concatenate_relabel(F: Code, k: int) -> Code:
    """k-fold concatenation of F; class l(m1..mk) is F(m1) x ... x F(mk)."""
    if k < 1:
        raise ValueError("k must be positive")
    M = F.M
    classes = [None] * (M**k)
    for ms in itertools.product(range(1, M + 1), repeat=k):
        words = frozenset(
            tuple(itertools.chain.from_iterable(ws))
            for ws in itertools.product(*(F[m] for m in ms))
        )
        classes[concat_label(ms, M) - 1] = words
    return Code(F.blocklength * k, tuple(classes))


def concatenation_L(W: WiretapChannel, F: Code, k: int) -> int:
    """Measured L of the k-fold relabelled concatenation (exhaustive over outputs)."""
    profile = wiretap_code_profile(W, concatenate_relabel(F, k))
    if not profile.valid:
        raise NoCodeExists(f"concatenation is not a wiretap code ({profile.violation})")
    return profile.L


@dataclass(frozen=True)
class CapacityRow:
    n: int
    N: int | None
    rate: float | None
    exhaustive: bool
    code: Code | None = None


@dataclass(frozen=True)
class CapacityTable:
    rows: tuple
    best_rate: float | None

    def as_dict(self) -> dict:
        return {
            "rows": [
                {"n": r.n, "N": r.N, "rate": r.rate, "exhaustive": r.exhaustive}
                for r in self.rows
            ],
            "best_rate": self.best_rate,
        }


def capacity_lower_bound(channel, n_max: int, budget: SearchBudget | None = None) -> CapacityTable:
    """Table of N(n) and log2 N(n) / n for n <= n_max (bits per channel use)."""
    if n_max < 1:
        raise ValueError("n_max must be positive")
    budget = budget or SearchBudget()
    rows = []
    for n in range(1, n_max + 1):
        try:
            if isinstance(channel, WiretapChannel):
                result = max_wiretap_code(channel, n, budget)
            else:
                result = max_zero_error_code(channel, n, budget)
        except BudgetExceeded:
            rows.append(CapacityRow(n, None, None, False))
            continue
        if result is None:
            rows.append(CapacityRow(n, None, None, False))
        else:
            rows.append(CapacityRow(n, result.M, math.log2(result.M) / n, result.exhaustive, result.code))
    rates = [r.rate for r in rows if r.rate is not None]
    return CapacityTable(tuple(rows), max(rates) if rates else None)
