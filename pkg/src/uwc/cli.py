"""Command-line front end.

Every command prints a single JSON report (or a CSV trace for
``simulate --format csv``).  Exit status: 0 success, 1 domain error, 2 bad
input or configuration.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace
from fractions import Fraction
from pathlib import Path

from . import __version__
from .channel import Code, WiretapChannel, wiretap_code_profile
from .channel_io import channel_hash, format_channel, load_channel
from .confusability import confusability_graph, eavesdropper_hypergraph
from .elimination import count_secure_words, eliminate, injective_secrecy_capacity
from .errors import InvalidCode, NoCodeExists, ParseError, UWCError
from .estimation import (
    DisturbanceSource,
    Selector,
    build_scheme,
    decoding_error_bound,
    security_k0,
    security_rate,
    simulate,
)
from .search import (
    SearchBudget,
    capacity_lower_bound,
    concatenate_relabel,
    delta_n,
    max_wiretap_code,
    search_wiretap_code,
)

COMMANDS = ("parse", "capacity", "wiretap", "delta", "eliminate", "concat", "simulate")


def frac(x) -> dict:
    x = Fraction(x)
    return {"num": x.numerator, "den": x.denominator}


def code_json(F: Code, alphabet) -> list:
    return [[",".join(w) for w in alphabet.sorted_words(c)] for c in F.classes]


def parse_code(text: str) -> Code:
    """``"a1|a2 a3|a4"``: classes split by ``|``, words by spaces, symbols by commas."""
    classes = []
    for part in text.split("|"):
        words = [tuple(w.split(",")) for w in part.split()]
        if not words:
            raise ParseError(f"empty class in code {text!r}")
        classes.append(words)
    lengths = {len(w) for c in classes for w in c}
    if len(lengths) != 1:
        raise ParseError("all codewords must have the same length")
    try:
        return Code(lengths.pop(), tuple(classes))
    except UWCError as exc:
        raise ParseError(str(exc)) from exc


def parse_rational(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"not a rational number: {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="uwc", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"uwc {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help_text, n=False, n_max=False):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--channel", required=True, help="channel spec file")
        if n:
            p.add_argument("--n", type=int, default=1, help="blocklength")
        if n_max:
            p.add_argument("--n-max", type=int, default=2, help="largest blocklength")
        p.add_argument("--format", choices=("json", "csv"), default="json")
        budget = p.add_argument_group("search budget (overrides UWC_BUDGET)")
        budget.add_argument("--max-class-size", type=int)
        budget.add_argument("--unbounded-classes", action="store_true", help="no limit on |F(m)|")
        budget.add_argument("--max-words", type=int, dest="max_words_enumerated")
        budget.add_argument("--time-limit", type=float)
        budget.add_argument("--max-nodes", type=int)
        return p

    add("parse", "validate a channel file and print its canonical form")
    add("capacity", "zero-error (wiretap) code sizes for n = 1..n-max", n_max=True)
    p = add("wiretap", "find a zero-error wiretap code", n=True)
    p.add_argument("--M", type=int, help="number of messages (default: largest found)")
    add("delta", "best (L-1)/(M-1) at blocklength n", n=True)
    p = add("eliminate", "elimination trace for an injective main channel", n=True)
    p.add_argument("--sequential", action="store_true", help="remove one word per step")
    p = add("concat", "measure L of the k-fold concatenated code", n=True)
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--code", help='e.g. "a1|a2 a3|a4" (default: largest code found at --n)')
    p = add("simulate", "simulate secure remote estimation", n_max=True)
    p.add_argument("--lambda", dest="lam", default="2", help="plant pole (rational, > 1)")
    p.add_argument("--omega", default="1", help="disturbance range (rational, > 0)")
    p.add_argument("--epsilon", help="security slack (default: 1/100 of the limit)")
    p.add_argument("--horizon", type=int, default=50)
    p.add_argument("--k-max", type=int, default=8, help="blocks used for the security rate")
    p.add_argument("--disturbance", default="extremal:alternate",
                   help="scripted:<file> | extremal:plus|minus|alternate | adversary | seeded:<seed>")
    p.add_argument("--seed", type=int, help="seed for channel output selection")
    return parser


def budget_from(args) -> SearchBudget:
    budget = SearchBudget.from_env()
    overrides = {}
    for key in ("max_class_size", "max_words_enumerated", "time_limit", "max_nodes"):
        value = getattr(args, key)
        if value is not None:
            overrides[key] = value
    if args.unbounded_classes:
        overrides["max_class_size"] = None
    if not overrides:
        return budget
    try:
        return replace(budget, **overrides)
    except ValueError as exc:
        raise ParseError(str(exc)) from None


def config_json(args, budget) -> dict:
    config = {k: v for k, v in sorted(vars(args).items()) if v is not None and v is not False}
    config["budget"] = {
        "max_class_size": budget.max_class_size,
        "max_words_enumerated": budget.max_words_enumerated,
        "time_limit": budget.time_limit,
        "max_nodes": budget.max_nodes,
    }
    return config


def require_wiretap(channel) -> WiretapChannel:
    if not isinstance(channel, WiretapChannel):
        raise ParseError("this command needs a wiretap channel (with output_c:)")
    return channel


def code_report(W, n, F: Code, exhaustive) -> dict:
    profile = wiretap_code_profile(W, F)
    return {
        "n": n,
        "M": F.M,
        "L": profile.L,
        "delta": frac(Fraction(profile.L - 1, F.M - 1)) if profile.valid and F.M > 1 else None,
        "code": code_json(F, W.input),
        "valid": profile.valid,
        "exhaustive": exhaustive,
    }


def cmd_parse(channel, args, budget):
    main = channel.main if isinstance(channel, WiretapChannel) else channel
    report = {
        "kind": "wiretap" if isinstance(channel, WiretapChannel) else "plain",
        "canonical": format_channel(channel),
        "inputs": list(main.input.symbols),
        "main_injective": main.is_injective(),
        "confusability": confusability_graph(main, 1).to_json(),
    }
    if isinstance(channel, WiretapChannel):
        report["eavesdropper_hypergraph"] = eavesdropper_hypergraph(channel.eaves, 1).to_json()
    return report


def cmd_capacity(channel, args, budget):
    table = capacity_lower_bound(channel, args.n_max, budget)
    report = table.as_dict()
    for row, out in zip(table.rows, report["rows"]):
        out["code"] = code_json(row.code, channel.input) if row.code is not None else None
    report["measure"] = "wiretap" if isinstance(channel, WiretapChannel) else "zero-error"
    if isinstance(channel, WiretapChannel) and channel.main.is_injective():
        cap = injective_secrecy_capacity(channel)
        report["injective_capacity"] = cap.capacity
        report["secure_words"] = [
            {"n": c.n, "N": c.N, "bound": c.bound}
            for c in (count_secure_words(channel, n) for n in range(1, args.n_max + 1))
        ]
    return report


def cmd_wiretap(channel, args, budget):
    W = require_wiretap(channel)
    if args.M is None:
        result = max_wiretap_code(W, args.n, budget)
        if result is None:
            raise NoCodeExists(f"no zero-error wiretap code at blocklength {args.n}")
    else:
        result = search_wiretap_code(W, args.n, args.M, budget)
        if result is None:
            raise NoCodeExists(f"no zero-error wiretap ({args.M}, {args.n})-code")
    return code_report(W, args.n, result.code, result.exhaustive)


def cmd_delta(channel, args, budget):
    W = require_wiretap(channel)
    result = delta_n(W, args.n, budget)
    return code_report(W, args.n, result.code, result.exhaustive)


def cmd_eliminate(channel, args, budget):
    W = require_wiretap(channel)
    trace = eliminate(W, args.n, sequential=args.sequential, max_vertices=budget.max_words_enumerated)
    return trace.to_json()


def cmd_concat(channel, args, budget):
    W = require_wiretap(channel)
    if args.k < 1:
        raise ParseError("--k must be positive")
    if args.code:
        F = parse_code(args.code)
    else:
        result = max_wiretap_code(W, args.n, budget)
        if result is None:
            raise NoCodeExists(f"no zero-error wiretap code at blocklength {args.n}")
        F = result.code
    base = wiretap_code_profile(W, F)
    if not base.valid:
        raise InvalidCode(f"code is not a zero-error wiretap code ({base.violation})")
    rows = []
    for k in range(1, args.k + 1):
        Fk = concatenate_relabel(F, k)
        Lk = wiretap_code_profile(W, Fk).L
        bound = 1 + Fraction((base.L - 1) * (F.M**k - 1), F.M - 1)
        rows.append({
            "k": k,
            "M": Fk.M,
            "L": Lk,
            "L_bound": frac(bound),
            "delta": frac(Fraction(Lk - 1, Fk.M - 1)),
        })
    return {"code": code_json(F, W.input), "M": F.M, "L": base.L, "rows": rows}


def disturbance_from(spec: str, omega) -> DisturbanceSource:
    kind, _, arg = spec.partition(":")
    if kind == "scripted":
        path = Path(arg)
        try:
            lines = path.read_text(encoding="utf-8").split()
        except OSError as exc:
            raise ParseError(f"cannot read disturbance script {arg!r}: {exc.strerror}") from None
        return DisturbanceSource.scripted(omega, [parse_rational(v) for v in lines])
    if kind == "extremal":
        if arg not in ("plus", "minus", "alternate"):
            raise ParseError(f"unknown extremal policy {arg!r}")
        return DisturbanceSource.extremal(omega, arg)
    if kind == "adversary" and not arg:
        return DisturbanceSource.adversary(omega)
    if kind == "seeded":
        try:
            return DisturbanceSource.seeded(omega, int(arg))
        except ValueError:
            raise ParseError(f"bad seed {arg!r}") from None
    raise ParseError(f"bad disturbance spec {spec!r}")


def simulation(channel, args, budget):
    W = require_wiretap(channel)
    lam, omega = parse_rational(args.lam), parse_rational(args.omega)
    if lam <= 1 or omega <= 0:
        raise ParseError("need --lambda > 1 and --omega > 0")
    if args.horizon < 1 or args.k_max < 1:
        raise ParseError("--horizon and --k-max must be positive")
    epsilon = parse_rational(args.epsilon) if args.epsilon is not None else None
    source = disturbance_from(args.disturbance, omega)
    scheme = build_scheme(W, lam, omega, epsilon, budget, args.n_max)
    selector = Selector("seeded", seed=args.seed) if args.seed is not None else Selector()
    return scheme, simulate(scheme, source, args.horizon, selector)


def cmd_simulate(channel, args, budget):
    scheme, trace = simulation(channel, args, budget)
    bounds = decoding_error_bound(scheme)
    rate = security_rate(scheme, args.k_max)
    phases = [
        {"n": p.n, "M": p.M, "L": p.L, "blocks": p.blocks, "code": code_json(p.code, channel.input)}
        for p in scheme.phases
    ]
    decoding = trace.decoding_errors()
    return {
        "scheme": {"kind": scheme.kind, "epsilon": frac(scheme.epsilon), "phases": phases},
        "kappa": frac(bounds.kappa),
        "decoding_error_bound": frac(bounds.decoding_error),
        "phase1_peak": frac(bounds.phase1_peak),
        "asymptote": frac(bounds.phase2_asymptote),
        "measured_sup_error": frac(trace.sup_error),
        "measured_decoding_error": frac(max(decoding)) if decoding else None,
        "security": {
            "k_max": rate.k_max,
            "k0": security_k0(scheme),
            "measured_rate": frac(rate.measured),
            "analytic_bound": frac(rate.analytic),
            "holds": rate.holds,
            "sequences": rate.sequences,
        },
        "horizon": args.horizon,
    }


HANDLERS = {
    "parse": cmd_parse,
    "capacity": cmd_capacity,
    "wiretap": cmd_wiretap,
    "delta": cmd_delta,
    "eliminate": cmd_eliminate,
    "concat": cmd_concat,
    "simulate": cmd_simulate,
}


def dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def run(argv=None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        budget = budget_from(args)
        channel = load_channel(args.channel)
        if args.command == "simulate" and args.format == "csv":
            _, trace = simulation(channel, args, budget)
            stdout.write(trace.to_csv())
            return 0
        if args.format == "csv":
            raise ParseError("--format csv is only available for simulate")
        result = HANDLERS[args.command](channel, args, budget)
    except ParseError as exc:
        stdout.write(dump({**exc.to_dict(), "status": 2}))
        return 2
    except UWCError as exc:
        stdout.write(dump({**exc.to_dict(), "status": 1}))
        return 1
    report = {
        "tool": "uwc",
        "version": __version__,
        "command": args.command,
        "channel": args.channel,
        "channel_hash": channel_hash(channel),
        "config": config_json(args, budget),
    }
    report.update(result)
    stdout.write(dump(report))
    return 0


def main(argv=None) -> None:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
