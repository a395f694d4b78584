"""Confusability graphs, eavesdropper hypergraphs and their product powers.

Vertex sets are stored as tuples of words in canonical order and vertex
subsets as integer bitmasks (bit ``i`` set means vertex ``i`` belongs to the
subset).  Hyperedges stay keyed by the eavesdropper word that generates them,
so two outputs with the same preimage give two hyperedges.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .channel import Code, ProductChannel, UncertainChannel, Word, as_product
from .errors import BudgetExceeded, UnknownVertex

DEFAULT_MAX_VERTICES = 10**6


def _check_budget(count: int, budget: int, what: str) -> None:
    if count > budget:
        raise BudgetExceeded(f"{what}: {count} exceeds enumeration budget {budget}")


def bits(mask: int):
    """Indices of the set bits of ``mask`` in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


@dataclass(frozen=True)
class ConfusabilityGraph:
    vertices: tuple
    neighbors: tuple = field(repr=False)  # bitmask per vertex, no self loops
    _index: dict = field(default=None, init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        object.__setattr__(self, "_index", {v: i for i, v in enumerate(self.vertices)})

    def index(self, v: Word) -> int:
        try:
            return self._index[tuple(v)]
        except KeyError:
            raise UnknownVertex(f"{v!r} is not a vertex") from None

    def adjacent(self, u: Word, v: Word) -> bool:
        return bool(self.neighbors[self.index(u)] >> self.index(v) & 1)

    @property
    def edges(self) -> frozenset:
        return frozenset(
            (i, j) for i, nb in enumerate(self.neighbors) for j in bits(nb) if i < j
        )

    def closed_neighbors(self, i: int) -> int:
        return self.neighbors[i] | (1 << i)

    def mask(self, words) -> int:
        m = 0
        for w in words:
            m |= 1 << self.index(w)
        return m

    def is_independent_set(self, words) -> bool:
        idx = [self.index(w) for w in words]
        return all(not (self.neighbors[i] >> j & 1) for i in idx for j in idx)

    def to_json(self) -> dict:
        return {
            "vertices": [list(v) for v in self.vertices],
            "edges": sorted([i, j] for i, j in self.edges),
        }

    @classmethod
    def from_edges(cls, vertices, edges) -> "ConfusabilityGraph":
        vertices = tuple(tuple(v) for v in vertices)
        nb = [0] * len(vertices)
        for i, j in edges:
            if i != j:
                nb[i] |= 1 << j
                nb[j] |= 1 << i
        return cls(vertices, tuple(nb))


@dataclass(frozen=True)
class EavesdropperHypergraph:
    vertices: tuple
    hyperedges: dict = field(hash=False)  # generator word -> member bitmask
    _index: dict = field(default=None, init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        object.__setattr__(self, "_index", {v: i for i, v in enumerate(self.vertices)})

    def index(self, v: Word) -> int:
        try:
            return self._index[tuple(v)]
        except KeyError:
            raise UnknownVertex(f"{v!r} is not a vertex") from None

    def members(self, generator: Word) -> frozenset:
        return frozenset(self.vertices[i] for i in bits(self.hyperedges[tuple(generator)]))

    def edge_sets(self) -> dict:
        """Hyperedges as ``{generator: frozenset of words}``."""
        return {c: self.members(c) for c in self.hyperedges}

    def mask(self, words) -> int:
        m = 0
        for w in words:
            m |= 1 << self.index(w)
        return m

    def to_json(self) -> dict:
        return {
            "vertices": [list(v) for v in self.vertices],
            "hyperedges": [
                {"generator": list(c), "members": list(bits(m))}
                for c, m in self.hyperedges.items()
            ],
        }


def _vertex_words(T, n: int, max_vertices: int) -> tuple:
    _check_budget(len(T.input) ** n, max_vertices, "vertex count")
    return tuple(T.input.words(n))


def confusability_graph(T: UncertainChannel, n: int = 1, max_vertices: int = DEFAULT_MAX_VERTICES) -> ConfusabilityGraph:
    """G(T^n): words are adjacent iff their product images share an output word."""
    P = as_product(T, n) if not isinstance(T, ProductChannel) else T
    n = P.blocklength
    vertices = _vertex_words(P.base, n, max_vertices)
    producers = {}
    for i, v in enumerate(vertices):
        for b in P.word_image(v):
            producers[b] = producers.get(b, 0) | (1 << i)
    nb = [0] * len(vertices)
    for group in producers.values():
        for i in bits(group):
            nb[i] |= group
    nb = tuple(m & ~(1 << i) for i, m in enumerate(nb))
    return ConfusabilityGraph(vertices, nb)


def strong_power(G: ConfusabilityGraph, n: int, max_vertices: int = DEFAULT_MAX_VERTICES) -> ConfusabilityGraph:
    """Strong n-fold product: coordinates pairwise equal-or-adjacent, tuples distinct."""
    if n < 1:
        raise ValueError("n must be positive")
    if n == 1:
        return G
    k = len(G.vertices)
    _check_budget(k**n, max_vertices, "vertex count")
    tuples = list(itertools.product(range(k), repeat=n))
    vertices = tuple(tuple(itertools.chain.from_iterable(G.vertices[i] for i in t)) for t in tuples)
    closed = [G.closed_neighbors(i) for i in range(k)]
    nb = []
    for s, t in enumerate(tuples):
        m = 0
        for r, u in enumerate(tuples):
            if r != s and all(closed[a] >> b & 1 for a, b in zip(t, u)):
                m |= 1 << r
        nb.append(m)
    return ConfusabilityGraph(vertices, tuple(nb))


def eavesdropper_hypergraph(T_C: UncertainChannel, n: int = 1, max_vertices: int = DEFAULT_MAX_VERTICES) -> EavesdropperHypergraph:
    """H(T_C^n): one hyperedge e(c) = {a : c in T_C^n(a)} per reachable c."""
    P = as_product(T_C, n) if not isinstance(T_C, ProductChannel) else T_C
    n = P.blocklength
    vertices = _vertex_words(P.base, n, max_vertices)
    _check_budget(len(P.output) ** n, max_vertices, "eavesdropper word count")
    edges = {}
    for i, v in enumerate(vertices):
        for c in P.word_image(v):
            edges[c] = edges.get(c, 0) | (1 << i)
    ordered = {c: edges[c] for c in P.output.sorted_words(edges)}
    return EavesdropperHypergraph(vertices, ordered)


def square_power(H: EavesdropperHypergraph, n: int, max_vertices: int = DEFAULT_MAX_VERTICES) -> EavesdropperHypergraph:
    """n-fold square product: hyperedges are all products e_1 x ... x e_n."""
    if n < 1:
        raise ValueError("n must be positive")
    if n == 1:
        return H
    k = len(H.vertices)
    _check_budget(k**n, max_vertices, "vertex count")
    tuples = list(itertools.product(range(k), repeat=n))
    position = {t: i for i, t in enumerate(tuples)}
    vertices = tuple(tuple(itertools.chain.from_iterable(H.vertices[i] for i in t)) for t in tuples)
    members = {c: list(bits(m)) for c, m in H.hyperedges.items()}
    edges = {}
    for gens in itertools.product(list(H.hyperedges), repeat=n):
        mask = 0
        for t in itertools.product(*(members[c] for c in gens)):
            mask |= 1 << position[t]
        edges[tuple(itertools.chain.from_iterable(gens))] = mask
    return EavesdropperHypergraph(vertices, edges)


def restrict(H: EavesdropperHypergraph, V) -> EavesdropperHypergraph:
    """Subhypergraph on ``V``: edges e & V, empty intersections dropped."""
    keep = set(tuple(v) for v in V)
    for v in keep:
        H.index(v)
    vertices = tuple(v for v in H.vertices if v in keep)
    old = [H.index(v) for v in vertices]
    edges = {}
    for c, m in H.hyperedges.items():
        new = 0
        for j, i in enumerate(old):
            if m >> i & 1:
                new |= 1 << j
        if new:
            edges[c] = new
    return EavesdropperHypergraph(vertices, edges)


def is_independent_system(G: ConfusabilityGraph, F: Code) -> bool:
    """No edge joins codewords of different classes; edges inside a class are fine."""
    masks = [G.mask(c) for c in F.classes]
    blocked = [0] * len(masks)
    for m, mask in enumerate(masks):
        for i in bits(mask):
            blocked[m] |= G.neighbors[i]
    for a in range(len(masks)):
        for b in range(a + 1, len(masks)):
            if blocked[a] & masks[b]:
                return False
    return True
