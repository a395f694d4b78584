"""Secure remote estimation of an unstable scalar plant over a wiretap channel.

The sensor samples the plant every n steps, quantizes the sample with the
adaptive interval quantizer of :mod:`uwc.quantizer` (run on the n-sampled
system) and sends the cell index through a block code.  The legitimate
receiver decodes without error and estimates the state by the cell midpoint;
the eavesdropper only learns which messages could have produced its output.

Two constructions are supported:

* single-phase: one zero-error wiretap (M, L, n)-code with M > lam^n for
  every block;
* two-phase: K blocks of a wiretap (M1, L, n1)-code with M1 < lam^n1, which
  plant a growing ambiguity at the eavesdropper, followed by a plain
  zero-error (M2, n2)-code with M2 > lam^n2 that keeps the receiver's error
  bounded while the instability amplifies the eavesdropper's ambiguity.

Timing convention: the message of block k describes x(t_k) and is available
to the receiver at t_k.  Between decoding times the receiver extrapolates
xhat(t_k + j) = lam^j xhat(t_k).
"""
from __future__ import annotations

import csv
import io
import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

from .channel import (
    Code,
    WiretapChannel,
    as_product,
    eaves_word_images,
    is_zero_error_code,
    wiretap_code_profile,
)
from .errors import (
    BudgetExceeded,
    InconsistentOutputs,
    InvalidDisturbance,
    InvalidScheme,
    NoReliableCode,
    NoWiretapCode,
)
from .quantizer import (
    Interval,
    PlantParams,
    QuantizerState,
    advance,
    as_rational,
    interval_length,
    quantizer_step,
    separated_gap,
)
from .search import SearchBudget, max_wiretap_code, max_zero_error_code


def reach_width(lam: Fraction, omega: Fraction, t: int) -> Fraction:
    """Diameter of the set of states reachable from x(0)=0 after t steps."""
    return omega / (lam - 1) * (lam**t - 1)


@dataclass(frozen=True)
class SampledSystem:
    """The plant observed at times 0, n, 2n, ..."""

    n: int
    lam: Fraction
    omega: Fraction

    @property
    def lambda_n(self) -> Fraction:
        return self.lam**self.n

    @property
    def omega_n(self) -> Fraction:
        return reach_width(self.lam, self.omega, self.n)

    def params(self, M: int) -> PlantParams:
        return PlantParams(self.lambda_n, self.omega_n, M)


@dataclass(frozen=True)
class Phase:
    n: int
    code: Code
    L: int | None = None       # index spread; None for the plain phase-2 code
    blocks: int | None = None  # K for the first phase of a two-phase scheme

    @property
    def M(self) -> int:
        return self.code.M

    @property
    def delta(self) -> Fraction | None:
        return None if self.L is None else Fraction(self.L - 1, self.M - 1)


@dataclass(frozen=True)
class TransmissionScheme:
    channel: WiretapChannel
    lam: Fraction
    omega: Fraction
    phase1: Phase
    phase2: Phase | None = None
    epsilon: Fraction = Fraction(0)
    _decoders: dict = field(default=None, init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        object.__setattr__(self, "lam", as_rational(self.lam))
        object.__setattr__(self, "omega", as_rational(self.omega))
        object.__setattr__(self, "epsilon", as_rational(self.epsilon))
        self.validate()
        decoders = {}
        for phase in self.phases:
            table = {}
            P = as_product(self.channel.main, phase.n)
            for m, cls in enumerate(phase.code.classes, start=1):
                for w in cls:
                    for y in P.word_image(w):
                        table[y] = m
            decoders[id(phase)] = table
        object.__setattr__(self, "_decoders", decoders)

    @property
    def kind(self) -> str:
        return "single-phase" if self.phase2 is None else "two-phase"

    @property
    def phases(self) -> tuple:
        return (self.phase1,) if self.phase2 is None else (self.phase1, self.phase2)

    @property
    def K(self) -> int | None:
        return self.phase1.blocks

    @property
    def n_max(self) -> int:
        return max(p.n for p in self.phases)

    @property
    def analytic_limit(self) -> Fraction:
        """omega/(lam-1) * (L-1)/(M-1) for the wiretap phase."""
        return self.omega / (self.lam - 1) * self.phase1.delta

    def validate(self) -> None:
        lam = self.lam
        if lam <= 1 or self.omega <= 0:
            raise InvalidScheme("need lam > 1 and omega > 0")
        p1 = self.phase1
        profile = wiretap_code_profile(self.channel, p1.code)
        if not profile.valid:
            raise InvalidScheme(f"phase-1 code is not a zero-error wiretap code ({profile.violation})")
        if p1.L is None or p1.L != profile.L:
            raise InvalidScheme(f"phase-1 L={p1.L} does not match measured L={profile.L}")
        if self.phase2 is None:
            if p1.blocks is not None:
                raise InvalidScheme("a single-phase scheme has no block limit")
            if not p1.M > lam**p1.n:
                raise InvalidScheme(f"single-phase needs M > lam^n, got M={p1.M}, lam^n={lam ** p1.n}")
        else:
            p2 = self.phase2
            if not 2 <= p1.M < lam**p1.n:
                raise InvalidScheme("two-phase needs 2 <= M1 < lam^n1")
            if p1.blocks is None or p1.blocks < 0:
                raise InvalidScheme("two-phase needs a block count K >= 0")
            if not is_zero_error_code(self.channel.main, p2.code):
                raise InvalidScheme("phase-2 code is not zero-error for the main channel")
            if not p2.M > lam**p2.n:
                raise InvalidScheme("two-phase needs M2 > lam^n2")
        if self.epsilon < 0:
            raise InvalidScheme("epsilon must be nonnegative")

    def phase_for_block(self, k: int) -> Phase:
        """Phase used by block k (1-based)."""
        if self.phase2 is not None and k > self.phase1.blocks:
            return self.phase2
        return self.phase1

    def block_end(self, k: int) -> int:
        """Decoding time t_k."""
        if self.phase2 is None or k <= self.phase1.blocks:
            return k * self.phase1.n
        K = self.phase1.blocks
        return K * self.phase1.n + (k - K) * self.phase2.n

    def sampled(self, phase: Phase) -> SampledSystem:
        return SampledSystem(phase.n, self.lam, self.omega)

    def quantizer_params(self, phase: Phase) -> PlantParams:
        return self.sampled(phase).params(phase.M)

    def decode(self, phase: Phase, main_word) -> int:
        try:
            return self._decoders[id(phase)][tuple(main_word)]
        except KeyError:
            raise InconsistentOutputs(f"main output {main_word!r} is not produced by the code") from None

    def eaves_messages(self, phase: Phase) -> dict:
        """Eavesdropper word -> sorted list of messages that can produce it."""
        images = eaves_word_images(self.channel.eaves, phase.code)
        out = {}
        for m, img in enumerate(images, start=1):
            for c in img:
                out.setdefault(c, []).append(m)
        P = as_product(self.channel.eaves, phase.n)
        return {c: out[c] for c in P.output.sorted_words(out)}


def default_epsilon(lam, omega, delta: Fraction) -> Fraction:
    return omega / (lam - 1) * delta / 100


def single_phase_scheme(W: WiretapChannel, lam, omega, code: Code, epsilon=None) -> TransmissionScheme:
    lam, omega = as_rational(lam), as_rational(omega)
    profile = wiretap_code_profile(W, code)
    if not profile.valid:
        raise InvalidScheme(f"not a zero-error wiretap code ({profile.violation})")
    phase = Phase(code.blocklength, code, profile.L)
    if epsilon is None:
        epsilon = default_epsilon(lam, omega, phase.delta)
    return TransmissionScheme(W, lam, omega, phase, None, epsilon)


def phase1_peak_length(lam: Fraction, omega: Fraction, n1: int, M1: int, K: int) -> Fraction:
    """|P_{m_K,K}| on the n1-sampled system started from I_0 = {0}."""
    return interval_length(K, SampledSystem(n1, lam, omega).params(M1), 0)


def choose_K(lam, omega, n1: int, M1: int, L: int, epsilon, K_max: int = 10_000) -> int:
    """Smallest K for which the phase-1 separation exceeds the index-free threshold.

    Two conditions, both exact:
      (a) the guaranteed scaled separation after K blocks is at least
          omega/(lam-1) * (L-1)/(M1-1) - epsilon;
      (b) lam^(K n1) * (that quantity) > omega/(lam-1) + |P_K|.
    """
    lam, omega, epsilon = as_rational(lam), as_rational(omega), as_rational(epsilon)
    sampled = SampledSystem(n1, lam, omega)
    params = sampled.params(M1)
    target = omega / (lam - 1) * Fraction(L - 1, M1 - 1) - epsilon
    if target <= 0:
        raise InvalidScheme("epsilon too large: the separation target is not positive")
    gap = Fraction(0)
    for K in range(1, K_max + 1):
        i = K - 1
        gap += (L - 1) * (params.omega / params.M) * _sigma(i, params) / params.lam ** (i + 1)
        if gap < target:
            continue
        lhs = sampled.lambda_n**K * target
        rhs = omega / (lam - 1) + interval_length(K, params, 0)
        if lhs > rhs:
            return K
    raise InvalidScheme(f"no block count K <= {K_max} satisfies the separation condition")


def _sigma(i, params):
    from .quantizer import sigma

    return sigma(i, params)


def two_phase_scheme(W: WiretapChannel, lam, omega, code1: Code, code2: Code, K: int | None = None,
                     epsilon=None) -> TransmissionScheme:
    lam, omega = as_rational(lam), as_rational(omega)
    profile = wiretap_code_profile(W, code1)
    if not profile.valid:
        raise InvalidScheme(f"phase-1 code is not a zero-error wiretap code ({profile.violation})")
    delta = Fraction(profile.L - 1, code1.M - 1)
    if epsilon is None:
        epsilon = default_epsilon(lam, omega, delta)
    if K is None:
        K = choose_K(lam, omega, code1.blocklength, code1.M, profile.L, epsilon)
    phase1 = Phase(code1.blocklength, code1, profile.L, K)
    phase2 = Phase(code2.blocklength, code2)
    return TransmissionScheme(W, lam, omega, phase1, phase2, epsilon)


def build_scheme(W: WiretapChannel, lam, omega, epsilon=None, budget: SearchBudget | None = None,
                 n_max: int = 3) -> TransmissionScheme:
    """Search blocklengths 1..n_max for codes and assemble a reliable, secure scheme.

    A wiretap code with M > lam^n gives a single-phase scheme.  Otherwise the
    first wiretap code with M1 < lam^n1 is paired with the first plain
    zero-error code beating lam^n2.
    """
    lam, omega = as_rational(lam), as_rational(omega)
    budget = budget or SearchBudget()
    first_wiretap = None
    for n in range(1, n_max + 1):
        result = max_wiretap_code(W, n, budget)
        if result is None:
            continue
        if result.M > lam**n:
            return single_phase_scheme(W, lam, omega, result.code, epsilon)
        if first_wiretap is None and result.M < lam**n:
            first_wiretap = result
    if first_wiretap is None:
        raise NoWiretapCode(f"no zero-error wiretap code found for blocklengths <= {n_max}")
    for n2 in range(1, n_max + 1):
        plain = max_zero_error_code(W.main, n2, budget)
        if plain.M > lam**n2:
            return two_phase_scheme(W, lam, omega, first_wiretap.code, plain.code, epsilon=epsilon)
    raise NoReliableCode(f"no zero-error code with M > lam^n for blocklengths <= {n_max}")


@dataclass(frozen=True)
class ErrorBounds:
    phase1_peak: Fraction
    phase2_asymptote: Fraction
    decoding_error: Fraction
    kappa: Fraction


def decoding_error_bound(scheme: TransmissionScheme) -> ErrorBounds:
    """Error bounds for midpoint decoding.

    ``decoding_error`` bounds |x(t_k) - xhat(t_k)|; ``kappa`` bounds the error
    at every time, allowing lam^(max n) growth plus the disturbance spread
    between decoding times.
    """
    lam, omega = scheme.lam, scheme.omega
    p1 = scheme.phase1
    if scheme.phase2 is None:
        asymptote = omega / (lam - 1) * (lam**p1.n - 1) / (p1.M - lam**p1.n)
        peak = asymptote
    else:
        p2 = scheme.phase2
        peak = phase1_peak_length(lam, omega, p1.n, p1.M, p1.blocks)
        asymptote = omega / (lam - 1) * (lam**p2.n - 1) / (p2.M - lam**p2.n)
    decoding = max(peak, asymptote) / 2
    n_max = scheme.n_max
    kappa = lam**n_max * decoding + reach_width(lam, omega, n_max) / 2
    return ErrorBounds(peak, asymptote, decoding, kappa)


class DisturbanceSource:
    """Generator of disturbances w(t) in [-omega/2, omega/2].

    Modes: ``scripted`` (explicit values), ``extremal`` (policy ``plus``,
    ``minus`` or ``alternate``), ``adversary`` (push the state away from the
    receiver's current prediction) and ``seeded`` (random rationals on a grid).
    """

    MODES = ("scripted", "extremal", "adversary", "seeded")

    def __init__(self, mode: str, omega, values: Sequence = (), policy: str = "plus",
                 seed: int | None = None, resolution: int = 64):
        if mode not in self.MODES:
            raise InvalidDisturbance(f"unknown disturbance mode {mode!r}")
        self.mode = mode
        self.omega = as_rational(omega)
        self.half = self.omega / 2
        self.values = tuple(as_rational(v) for v in values)
        self.policy = policy
        self.seed = seed
        self.resolution = resolution
        if mode == "scripted":
            for t, w in enumerate(self.values):
                if abs(w) > self.half:
                    raise InvalidDisturbance(f"w({t}) = {w} outside [-{self.half}, {self.half}]")
        if mode == "extremal" and policy not in ("plus", "minus", "alternate"):
            raise InvalidDisturbance(f"unknown extremal policy {policy!r}")
        if mode == "seeded" and seed is None:
            raise InvalidDisturbance("seeded mode needs a seed")

    @classmethod
    def scripted(cls, omega, values):
        return cls("scripted", omega, values=values)

    @classmethod
    def extremal(cls, omega, policy="plus"):
        return cls("extremal", omega, policy=policy)

    @classmethod
    def adversary(cls, omega):
        return cls("adversary", omega)

    @classmethod
    def seeded(cls, omega, seed):
        return cls("seeded", omega, seed=seed)

    def stream(self) -> Callable:
        """Fresh callable ``w(t, x, prediction)``; seeded streams restart from the seed."""
        if self.mode == "scripted":
            values = self.values

            def scripted(t, x, prediction):
                if t >= len(values):
                    raise InvalidDisturbance(f"script has only {len(values)} values, needed w({t})")
                return values[t]

            return scripted
        if self.mode == "extremal":
            half, policy = self.half, self.policy
            if policy == "plus":
                return lambda t, x, p: half
            if policy == "minus":
                return lambda t, x, p: -half
            return lambda t, x, p: half if t % 2 == 0 else -half
        if self.mode == "adversary":
            half, lam_hint = self.half, None
            return lambda t, x, p: half if x >= p else -half
        rng = random.Random(self.seed)
        omega, res = self.omega, self.resolution
        return lambda t, x, p: omega * (Fraction(rng.randint(0, 2 * res), 2 * res) - Fraction(1, 2))


class Selector:
    """Resolves channel and encoder uncertainty by picking one option.

    ``first`` takes the canonical first option, ``seeded`` a random one, and
    ``scripted`` cycles through explicit option indices (used to sweep every
    selection on small instances).
    """

    def __init__(self, mode: str = "first", seed: int | None = None, script: Sequence[int] = ()):
        if mode not in ("first", "last", "seeded", "scripted"):
            raise ValueError(f"unknown selector mode {mode!r}")
        self.mode = mode
        self.seed = seed
        self.script = tuple(script)

    def chooser(self) -> Callable:
        if self.mode == "first":
            return lambda options: options[0]
        if self.mode == "last":
            return lambda options: options[-1]
        if self.mode == "seeded":
            rng = random.Random(self.seed)
            return lambda options: options[rng.randrange(len(options))]
        script = iter(self.script)
        return lambda options: options[next(script, 0) % len(options)]


@dataclass(frozen=True)
class StepRecord:
    t: int
    x: Fraction
    xhat: Fraction
    err: Fraction
    lo: Fraction
    hi: Fraction

    @property
    def diameter(self) -> Fraction:
        return self.hi - self.lo


@dataclass(frozen=True)
class BlockRecord:
    k: int
    t: int
    m: int
    decoded: int
    codeword: tuple
    main_output: tuple
    eaves_output: tuple
    consistent: tuple
    lo: Fraction
    hi: Fraction

    @property
    def diameter(self) -> Fraction:
        return self.hi - self.lo


@dataclass(frozen=True)
class SimulationTrace:
    scheme: TransmissionScheme
    steps: tuple
    blocks: tuple

    @property
    def sup_error(self) -> Fraction:
        return max(s.err for s in self.steps)

    @property
    def decoding_times(self) -> tuple:
        return tuple(b.t for b in self.blocks)

    def decoding_errors(self) -> list:
        return [self.steps[b.t].err for b in self.blocks]

    def eaves_outputs(self) -> list:
        return [b.eaves_output for b in self.blocks]

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["t", "x", "xhat", "err", "lo", "hi", "diameter"])
        for s in self.steps:
            writer.writerow([s.t, s.x, s.xhat, s.err, s.lo, s.hi, s.diameter])
        return buf.getvalue()


def simulate(scheme: TransmissionScheme, source: DisturbanceSource, horizon: int,
             selector: Selector | None = None, tie: str = "lower") -> SimulationTrace:
    """Run plant, coder, receiver and eavesdropper for t = 0..horizon."""
    if horizon < 1:
        raise ValueError("horizon must be at least 1")
    lam, omega = scheme.lam, scheme.omega
    w_of = source.stream()
    pick = (selector or Selector()).chooser()
    main_T, eaves_T = scheme.channel.main, scheme.channel.eaves

    k = 1
    phase = scheme.phase_for_block(1)
    params = scheme.quantizer_params(phase)
    start = Interval.point(0)
    sender = QuantizerState(0, start, params)
    receiver = sender
    eve_lo = eve_hi = sender
    eaves_table = {id(p): scheme.eaves_messages(p) for p in scheme.phases}
    next_t = scheme.block_end(1)

    x = Fraction(0)
    xhat_k, t_k = Fraction(0), 0
    lo_k = hi_k = Fraction(0)
    steps, blocks = [], []
    for t in range(horizon + 1):
        if t == next_t:
            new_phase = scheme.phase_for_block(k)
            if new_phase is not phase:
                phase = new_phase
                params = scheme.quantizer_params(phase)
                sender = QuantizerState(sender.t, sender.I, params)
                receiver = QuantizerState(receiver.t, receiver.I, params)
                eve_lo = QuantizerState(eve_lo.t, eve_lo.I, params)
                eve_hi = QuantizerState(eve_hi.t, eve_hi.I, params)
            step = quantizer_step(sender, x, tie)
            sender = step.next
            m = step.m
            codeword = pick(main_T.input.sorted_words(phase.code[m]))
            main_out = tuple(pick(main_T.output.sorted(main_T.image(a))) for a in codeword)
            eaves_out = tuple(pick(eaves_T.output.sorted(eaves_T.image(a))) for a in codeword)
            decoded = scheme.decode(phase, main_out)
            receiver = advance(receiver, decoded)
            consistent = eaves_table[id(phase)].get(eaves_out)
            if not consistent:
                raise InconsistentOutputs(f"eavesdropper word {eaves_out!r} not produced by the code")
            eve_lo = advance(eve_lo, consistent[0])
            eve_hi = advance(eve_hi, consistent[-1])
            xhat_k, t_k = receiver.I.midpoint, t
            lo_k, hi_k = eve_lo.I.lo, eve_hi.I.hi
            blocks.append(BlockRecord(k, t, m, decoded, codeword, main_out, eaves_out,
                                      tuple(consistent), lo_k, hi_k))
            k += 1
            next_t = scheme.block_end(k)
        j = t - t_k
        xhat = lam**j * xhat_k
        spread = reach_width(lam, omega, j) / 2
        lo, hi = lam**j * lo_k - spread, lam**j * hi_k + spread
        steps.append(StepRecord(t, x, xhat, abs(x - xhat), lo, hi))
        if t < horizon:
            x = lam * x + _checked(w_of(t, x, lam * xhat), source.half, t)
    return SimulationTrace(scheme, tuple(steps), tuple(blocks))


def _checked(w, half, t):
    w = as_rational(w)
    if abs(w) > half:
        raise InvalidDisturbance(f"w({t}) = {w} outside [-{half}, {half}]")
    return w


@dataclass(frozen=True)
class BlockExtent:
    k: int
    t: int
    lo: Fraction
    hi: Fraction

    @property
    def diameter(self) -> Fraction:
        return self.hi - self.lo


@dataclass(frozen=True)
class EavesdropperExtent:
    blocks: tuple
    exhaustive: bool

    @property
    def diameters(self) -> list:
        return [b.diameter for b in self.blocks]


def _consistent_sets(scheme: TransmissionScheme, eaves_outputs: Sequence) -> list:
    sets = []
    tables = {}
    for k, c in enumerate(eaves_outputs, start=1):
        phase = scheme.phase_for_block(k)
        table = tables.setdefault(id(phase), scheme.eaves_messages(phase))
        ms = table.get(tuple(c))
        if not ms:
            raise InconsistentOutputs(f"block {k}: eavesdropper word {tuple(c)!r} is not producible")
        sets.append(ms)
    return sets


def _greedy_extent(scheme: TransmissionScheme, sets: list) -> list:
    phase = scheme.phase_for_block(1)
    params = scheme.quantizer_params(phase)
    lo = hi = QuantizerState(0, Interval.point(0), params)
    out = []
    for k, ms in enumerate(sets, start=1):
        new_phase = scheme.phase_for_block(k)
        if new_phase is not phase:
            phase = new_phase
            params = scheme.quantizer_params(phase)
            lo = QuantizerState(lo.t, lo.I, params)
            hi = QuantizerState(hi.t, hi.I, params)
        lo, hi = advance(lo, ms[0]), advance(hi, ms[-1])
        out.append(BlockExtent(k, scheme.block_end(k), lo.I.lo, hi.I.hi))
    return out


def _exhaustive_extent(scheme: TransmissionScheme, sets: list) -> list:
    K = len(sets)
    los = [None] * K
    his = [None] * K
    params_of = [scheme.quantizer_params(scheme.phase_for_block(k)) for k in range(1, K + 1)]

    def dfs(depth: int, I: Interval):
        if depth == K:
            return
        params = params_of[depth]
        for m in sets[depth]:
            cell = advance(QuantizerState(depth, I, params), m).I
            if los[depth] is None or cell.lo < los[depth]:
                los[depth] = cell.lo
            if his[depth] is None or cell.hi > his[depth]:
                his[depth] = cell.hi
            dfs(depth + 1, cell)

    dfs(0, Interval.point(0))
    return [BlockExtent(k, scheme.block_end(k), los[k - 1], his[k - 1]) for k in range(1, K + 1)]


def eavesdropper_diameter(scheme: TransmissionScheme, eaves_outputs: Sequence, k_max: int | None = None,
                          exhaustive_limit: int = 8) -> EavesdropperExtent:
    """Extremes of the cells I_k over all message sequences consistent with the
    eavesdropper's block outputs.

    The greedy extremes (always the smallest / largest consistent index) are
    always computed; up to ``exhaustive_limit`` blocks every consistent
    sequence is enumerated as well and both must agree.
    """
    outputs = list(eaves_outputs)
    if k_max is not None:
        outputs = outputs[:k_max]
    sets = _consistent_sets(scheme, outputs)
    greedy = _greedy_extent(scheme, sets)
    if len(sets) > exhaustive_limit:
        return EavesdropperExtent(tuple(greedy), False)
    full = _exhaustive_extent(scheme, sets)
    if [(b.lo, b.hi) for b in full] != [(b.lo, b.hi) for b in greedy]:
        raise AssertionError("greedy and exhaustive eavesdropper extremes disagree")
    return EavesdropperExtent(tuple(full), True)


@dataclass(frozen=True)
class SecurityRate:
    measured: Fraction
    analytic: Fraction
    k_max: int
    worst_outputs: tuple
    sequences: int

    @property
    def holds(self) -> bool:
        return self.measured >= self.analytic


def security_bound(scheme: TransmissionScheme) -> Fraction:
    """Guaranteed lower bound on diameter(t)/lam^t from block k0 onwards."""
    lam, omega = scheme.lam, scheme.omega
    limit = scheme.analytic_limit - scheme.epsilon
    if scheme.phase2 is None:
        return limit
    p1 = scheme.phase1
    peak = phase1_peak_length(lam, omega, p1.n, p1.M, p1.blocks)
    return limit - (omega / (lam - 1) + peak) / lam ** (p1.blocks * p1.n)


def security_k0(scheme: TransmissionScheme, k_cap: int = 10_000) -> int:
    """First block from which the measured rate is guaranteed to meet the bound."""
    if scheme.phase2 is not None:
        return max(scheme.phase1.blocks, 1)
    p1 = scheme.phase1
    params = scheme.quantizer_params(p1)
    target = security_bound(scheme)
    for k in range(1, k_cap + 1):
        if separated_gap(params, p1.L, 0, k) >= target:
            return k
    raise InvalidScheme("separation bound not reached")


def block_output_alphabets(scheme: TransmissionScheme, k_max: int) -> list:
    return [list(scheme.eaves_messages(scheme.phase_for_block(k))) for k in range(1, k_max + 1)]


def security_rate(scheme: TransmissionScheme, k_max: int, max_sequences: int = 10**6) -> SecurityRate:
    """min over all eavesdropper output sequences of diameter(k_max)/lam^(t_k_max)."""
    alphabets = block_output_alphabets(scheme, k_max)
    count = 1
    for a in alphabets:
        count *= len(a)
    if count > max_sequences:
        raise BudgetExceeded(f"{count} eavesdropper sequences exceed {max_sequences}")
    scale = scheme.lam ** scheme.block_end(k_max)
    best, worst = None, None
    for outputs in itertools.product(*alphabets):
        sets = _consistent_sets(scheme, outputs)
        extent = _greedy_extent(scheme, sets)[-1]
        rate = extent.diameter / scale
        if best is None or rate < best:
            best, worst = rate, outputs
    return SecurityRate(best, security_bound(scheme), k_max, tuple(worst), count)
