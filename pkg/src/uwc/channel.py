"""Finite uncertain channels, their n-fold products, codes and code checkers.

An uncertain channel maps every input symbol to a nonempty *set* of possible
outputs; no probabilities are attached.  Words (elements of A^n) are plain
tuples of symbols.  Messages are numbered 1..M and the order of the classes
of a :class:`Code` matters, because the index spread ``L`` of a wiretap code
is measured in message labels.
"""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from typing import Hashable, Iterable, Iterator, Mapping, Sequence

from .errors import (
    BlocklengthMismatch,
    EmptyImage,
    InvalidAlphabet,
    InvalidCode,
    UnknownSymbol,
)

Symbol = Hashable
Word = tuple

TOKEN_RE = re.compile(r"^[A-Za-z0-9_]+$")


@dataclass(frozen=True)
class Alphabet:
    """Ordered set of symbols; insertion order is the canonical order."""

    symbols: tuple
    _index: dict = field(default=None, init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        symbols = tuple(self.symbols)
        if not symbols:
            raise InvalidAlphabet("alphabet must be nonempty")
        index = {}
        for i, s in enumerate(symbols):
            if isinstance(s, str) and not TOKEN_RE.match(s):
                raise InvalidAlphabet(f"invalid symbol token {s!r}")
            if s in index:
                raise InvalidAlphabet(f"duplicate symbol {s!r}")
            index[s] = i
        object.__setattr__(self, "symbols", symbols)
        object.__setattr__(self, "_index", index)

    def __len__(self):
        return len(self.symbols)

    def __iter__(self):
        return iter(self.symbols)

    def __contains__(self, symbol):
        return symbol in self._index

    def index(self, symbol) -> int:
        try:
            return self._index[symbol]
        except KeyError:
            raise UnknownSymbol(f"symbol {symbol!r} not in alphabet") from None

    def word_key(self, word: Word) -> tuple:
        """Sort key putting words in lexicographic (canonical) order."""
        return tuple(self.index(s) for s in word)

    def words(self, n: int) -> Iterator[Word]:
        """All words of length ``n`` in canonical order."""
        return itertools.product(self.symbols, repeat=n)

    def sorted(self, symbols: Iterable) -> list:
        return sorted(symbols, key=self.index)

    def sorted_words(self, words: Iterable[Word]) -> list:
        return sorted(words, key=self.word_key)


def _alphabet(x) -> Alphabet:
    return x if isinstance(x, Alphabet) else Alphabet(tuple(x))


@dataclass(frozen=True)
class UncertainChannel:
    """Set-valued map from an input alphabet to nonempty output subsets."""

    input: Alphabet
    output: Alphabet
    images: Mapping = field(hash=False)

    blocklength = 1

    @property
    def base(self) -> "UncertainChannel":
        return self

    def image(self, a) -> frozenset:
        try:
            return self.images[a]
        except KeyError:
            raise UnknownSymbol(f"input symbol {a!r} not in channel input") from None

    def word_image(self, word: Word) -> frozenset:
        if len(word) != 1:
            raise BlocklengthMismatch(f"word {word!r} has length {len(word)}, expected 1")
        return frozenset((b,) for b in self.image(word[0]))

    def words(self) -> Iterator[Word]:
        return self.input.words(1)

    def is_injective(self) -> bool:
        """True iff every image is a singleton and distinct inputs give distinct outputs."""
        seen = set()
        for a in self.input:
            img = self.images[a]
            if len(img) != 1 or img <= seen:
                return False
            seen |= img
        return True

    def sorted_image(self, a) -> list:
        return self.output.sorted(self.image(a))


def make_channel(input, output, image: Mapping) -> UncertainChannel:
    """Validate and build an uncertain channel.

    ``image`` maps each input symbol to an iterable of output symbols.
    """
    input, output = _alphabet(input), _alphabet(output)
    images = {}
    for a in input:
        if a not in image:
            raise EmptyImage(a)
        img = frozenset(image[a])
        if not img:
            raise EmptyImage(a)
        for b in img:
            if b not in output:
                raise UnknownSymbol(f"image of {a!r} contains {b!r}, which is not an output symbol")
        images[a] = img
    extra = [a for a in image if a not in input]
    if extra:
        raise UnknownSymbol(f"image defined for unknown input symbols {extra!r}")
    return UncertainChannel(input, output, images)


def identity_channel(symbols: Sequence) -> UncertainChannel:
    return make_channel(symbols, symbols, {a: {a} for a in symbols})


def constant_channel(inputs: Sequence, output) -> UncertainChannel:
    return make_channel(inputs, [output], {a: {output} for a in inputs})


@dataclass(frozen=True)
class ProductChannel:
    """The n-fold product channel, evaluated lazily word by word."""

    base: UncertainChannel
    n: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("blocklength must be positive")

    @property
    def blocklength(self) -> int:
        return self.n

    @property
    def input(self) -> Alphabet:
        return self.base.input

    @property
    def output(self) -> Alphabet:
        return self.base.output

    def word_image(self, word: Word) -> frozenset:
        if len(word) != self.n:
            raise BlocklengthMismatch(f"word {word!r} has length {len(word)}, expected {self.n}")
        return frozenset(itertools.product(*(self.base.image(a) for a in word)))

    image = word_image

    def image_size(self, word: Word) -> int:
        size = 1
        for a in word:
            size *= len(self.base.image(a))
        return size

    def words(self) -> Iterator[Word]:
        return self.base.input.words(self.n)

    def materialize(self) -> dict:
        return {w: self.word_image(w) for w in self.words()}


def product(T, n: int):
    """n-fold product of ``T``; ``product(T, 1)`` is ``T`` itself."""
    if n < 1:
        raise ValueError("blocklength must be positive")
    if isinstance(T, ProductChannel):
        return ProductChannel(T.base, T.n * n)
    if n == 1:
        return T
    return ProductChannel(T, n)


def as_product(T, n: int):
    """View ``T`` at blocklength ``n``; explicit products must already match."""
    if isinstance(T, ProductChannel):
        if T.n != n:
            raise BlocklengthMismatch(f"channel has blocklength {T.n}, code has {n}")
        return T
    return product(T, n)


def channel_range(T) -> frozenset:
    """ran(T): all possible outputs (symbols for T, words for products)."""
    if isinstance(T, ProductChannel):
        per = [channel_range(T.base)] * T.n
        return frozenset(itertools.product(*per))
    out = set()
    for a in T.input:
        out |= T.image(a)
    return frozenset(out)


@dataclass(frozen=True)
class WiretapChannel:
    """Main channel to the legitimate receiver plus the eavesdropper channel."""

    main: UncertainChannel
    eaves: UncertainChannel

    def __post_init__(self):
        if self.main.input != self.eaves.input:
            raise InvalidAlphabet("main and eavesdropper channels need a common input alphabet")

    @property
    def input(self) -> Alphabet:
        return self.main.input


def _as_word(w) -> Word:
    if isinstance(w, str):
        return (w,)
    return tuple(w)


@dataclass(frozen=True)
class Code:
    """Ordered family of disjoint nonempty codeword sets F(1), ..., F(M)."""

    blocklength: int
    classes: tuple

    def __post_init__(self):
        classes = tuple(frozenset(_as_word(w) for w in c) for c in self.classes)
        if not classes:
            raise InvalidCode("a code needs at least one message")
        if self.blocklength < 1:
            raise InvalidCode("blocklength must be positive")
        seen = set()
        for m, c in enumerate(classes, start=1):
            if not c:
                raise InvalidCode(f"class {m} is empty")
            for w in c:
                if len(w) != self.blocklength:
                    raise InvalidCode(f"word {w!r} in class {m} has length {len(w)}")
            if c & seen:
                raise InvalidCode(f"class {m} overlaps an earlier class")
            seen |= c
        object.__setattr__(self, "classes", classes)

    @classmethod
    def from_classes(cls, classes: Iterable[Iterable], blocklength: int | None = None) -> "Code":
        classes = [[_as_word(w) for w in c] for c in classes]
        if blocklength is None:
            blocklength = len(classes[0][0]) if classes and classes[0] else 1
        return cls(blocklength, tuple(classes))

    @property
    def M(self) -> int:
        return len(self.classes)

    def __getitem__(self, m: int) -> frozenset:
        """Codeword set of message ``m`` (1-based)."""
        if not 1 <= m <= self.M:
            raise IndexError(m)
        return self.classes[m - 1]

    def words(self) -> frozenset:
        return frozenset().union(*self.classes)

    def sorted_classes(self, alphabet: Alphabet) -> list:
        return [alphabet.sorted_words(c) for c in self.classes]

    def relabel(self, order: Sequence[int]) -> "Code":
        """New code whose message i is the old message ``order[i-1]``."""
        return Code(self.blocklength, tuple(self.classes[m - 1] for m in order))


def _check_words(T, F: Code) -> None:
    alphabet = T.input
    for c in F.classes:
        for w in c:
            for a in w:
                if a not in alphabet:
                    raise UnknownSymbol(f"codeword symbol {a!r} not in channel input")


def compose(F: Code, T) -> UncertainChannel:
    """T o F: channel from messages 1..M with image(m) = union of T(a), a in F(m)."""
    P = as_product(T, F.blocklength)
    _check_words(P, F)
    images = {}
    for m, c in enumerate(F.classes, start=1):
        if isinstance(P, ProductChannel):
            images[m] = frozenset().union(*(P.word_image(w) for w in c))
        else:
            images[m] = frozenset().union(*(P.image(w[0]) for w in c))
    rng = frozenset().union(*images.values())
    if isinstance(P, ProductChannel):
        outputs = P.output.sorted_words(rng)
    else:
        outputs = P.output.sorted(rng)
    return UncertainChannel(Alphabet(tuple(range(1, F.M + 1))), Alphabet(tuple(outputs)), images)


def words_confusable(T: UncertainChannel, u: Word, v: Word) -> bool:
    """Do the product images of two words intersect? (coordinatewise test)"""
    return all(T.image(a) & T.image(b) for a, b in zip(u, v))


def is_zero_error_code(T, F: Code) -> bool:
    """Pairwise disjointness of the composed images T^n(F(m))."""
    P = as_product(T, F.blocklength)
    _check_words(P, F)
    base = P.base
    classes = F.classes
    for i in range(len(classes)):
        for j in range(i + 1, len(classes)):
            for u in classes[i]:
                for v in classes[j]:
                    if words_confusable(base, u, v):
                        return False
    return True


def eaves_word_images(T, F: Code) -> list:
    """Composed eavesdropper images T^n(F(m)) as sets of words, indexed by m-1."""
    P = as_product(T, F.blocklength)
    _check_words(P, F)
    return [frozenset().union(*(P.word_image(w) for w in c)) for c in F.classes]


@dataclass(frozen=True)
class CodeProfile:
    """Outcome of checking a code against a wiretap channel.

    ``violation`` names the first failed condition (``"reliability"`` or
    ``"security"``) and ``detail`` the offending message pair or output word.
    """

    valid: bool
    L: int | None
    delta_map: dict = field(hash=False)
    violation: str | None = None
    detail: object = None


def message_sets(W: WiretapChannel, F: Code) -> dict:
    """Map each reachable eavesdropper word to the messages able to produce it."""
    images = eaves_word_images(W.eaves, F)
    generated = {}
    for m, img in enumerate(images, start=1):
        for c in img:
            generated.setdefault(c, []).append(m)
    return generated


def wiretap_code_profile(W: WiretapChannel, F: Code) -> CodeProfile:
    if not is_zero_error_code(W.main, F):
        P = as_product(W.main, F.blocklength)
        pair = _first_confusable_pair(P.base, F)
        return CodeProfile(False, None, {}, "reliability", pair)
    generated = message_sets(W, F)
    delta = {}
    for c in W.eaves.output.sorted_words(generated):
        ms = generated[c]
        if len(ms) < 2:
            return CodeProfile(False, None, {}, "security", c)
        delta[c] = max(ms) - min(ms) + 1
    return CodeProfile(True, min(delta.values()), delta)


def _first_confusable_pair(T: UncertainChannel, F: Code):
    for i in range(F.M):
        for j in range(i + 1, F.M):
            if any(words_confusable(T, u, v) for u in F.classes[i] for v in F.classes[j]):
                return (i + 1, j + 1)
    return None
