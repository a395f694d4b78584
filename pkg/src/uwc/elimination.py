"""Secrecy capacity of wiretap channels whose main channel is injective.

With a noiseless main channel every codeword can be its own message, so the
question is which words the eavesdropper can never pin down.  Words forming
a one-element hyperedge are removed, the hypergraph is restricted to the
survivors, and this repeats until no singleton hyperedge remains.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .channel import Code, WiretapChannel
from .confusability import DEFAULT_MAX_VERTICES, bits, eavesdropper_hypergraph
from .errors import NotInjective


@dataclass(frozen=True)
class EliminationStep:
    step: int
    removed: tuple          # words removed in this step, canonical order
    generators: dict        # removed word -> eavesdropper words isolating it
    eliminated: frozenset   # A_1(s): all words removed so far
    survivors: frozenset    # A_2(s)


@dataclass(frozen=True)
class EliminationTrace:
    n: int
    words: tuple
    steps: tuple

    @property
    def S(self) -> int:
        return len(self.steps)

    @property
    def eliminated(self) -> frozenset:
        return self.steps[-1].eliminated if self.steps else frozenset()

    @property
    def survivors(self) -> frozenset:
        return frozenset(self.words) - self.eliminated

    def sorted_survivors(self) -> list:
        return [w for w in self.words if w in self.survivors]

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "S": self.S,
            "eliminated_count": len(self.eliminated),
            "survivor_count": len(self.survivors),
            "survivors": [list(w) for w in self.sorted_survivors()],
            "steps": [
                {
                    "step": s.step,
                    "removed": [
                        {"word": list(w), "generators": [list(c) for c in s.generators[w]]}
                        for w in s.removed
                    ],
                }
                for s in self.steps
            ],
        }


def require_injective(W: WiretapChannel) -> None:
    if not W.main.is_injective():
        raise NotInjective("main channel must map inputs to distinct singletons")


def eliminate(W: WiretapChannel, n: int = 1, sequential: bool = False,
              max_vertices: int = DEFAULT_MAX_VERTICES) -> EliminationTrace:
    """Run the elimination to its fixed point.

    By default each step removes all currently isolated words at once.  With
    ``sequential=True`` one word (the first in canonical order) is removed per
    step; the fixed point is the same, the step count generally is not.
    """
    require_injective(W)
    H = eavesdropper_hypergraph(W.eaves, n, max_vertices)
    words = H.vertices
    edges = list(H.hyperedges.items())
    alive = (1 << len(words)) - 1
    eliminated = 0
    steps = []
    while True:
        isolated = {}
        for c, e in edges:
            restricted = e & alive
            if restricted and restricted & (restricted - 1) == 0:
                isolated.setdefault(restricted.bit_length() - 1, []).append(c)
        if not isolated:
            break
        chosen = sorted(isolated)
        if sequential:
            chosen = chosen[:1]
        removed = 0
        for i in chosen:
            removed |= 1 << i
        alive &= ~removed
        eliminated |= removed
        steps.append(
            EliminationStep(
                step=len(steps) + 1,
                removed=tuple(words[i] for i in chosen),
                generators={words[i]: tuple(isolated[i]) for i in chosen},
                eliminated=frozenset(words[i] for i in bits(eliminated)),
                survivors=frozenset(words[i] for i in bits(alive)),
            )
        )
    return EliminationTrace(n, words, tuple(steps))


@dataclass(frozen=True)
class InjectiveCapacity:
    capacity: float
    positive: bool
    witness: Code | None
    eliminated: frozenset


def injective_secrecy_capacity(W: WiretapChannel) -> InjectiveCapacity:
    """Zero-error secrecy capacity in bits: 0 or log2 |A|, decided at blocklength 1."""
    trace = eliminate(W, 1)
    survivors = trace.sorted_survivors()
    if not survivors:
        return InjectiveCapacity(0.0, False, None, trace.eliminated)
    witness = Code(1, tuple(frozenset([w]) for w in survivors))
    return InjectiveCapacity(math.log2(len(W.input)), True, witness, trace.eliminated)


@dataclass(frozen=True)
class SecureWordCount:
    n: int
    N: int
    bound: int


def count_secure_words(W: WiretapChannel, n: int, max_vertices: int = DEFAULT_MAX_VERTICES) -> SecureWordCount:
    """N(n) = |A^n| - |A_1(n)| together with the lower bound |A|^n - |A_1(1)|^n."""
    trace_n = eliminate(W, n, max_vertices=max_vertices)
    trace_1 = trace_n if n == 1 else eliminate(W, 1)
    size = len(W.input)
    N = size**n - len(trace_n.eliminated)
    bound = size**n - len(trace_1.eliminated) ** n
    assert N >= bound, "eliminated words must lie in the n-fold power of the blocklength-1 set"
    return SecureWordCount(n, N, bound)
