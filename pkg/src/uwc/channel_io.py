"""Text format for channels.

    # comment
    input: a1 a2 a3
    output_b: b1 b2
    output_c: c1 c2          (omitted for a plain channel)
    a1 -> b1 | c1
    a2 -> b1 b2 | c1 c2
    a3 -> b2 | c2

Main images come before ``|`` and eavesdropper images after it.
"""
from __future__ import annotations

import hashlib
from pathlib import Path

from .channel import Alphabet, UncertainChannel, WiretapChannel, make_channel
from .errors import ParseError, UWCError

_HEADERS = ("input", "output_b", "output_c")


def _content_lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line


def parse_channel(text: str) -> UncertainChannel | WiretapChannel:
    """Parse a channel spec; a plain channel results when ``output_c:`` is absent."""
    headers = {}
    rows = []
    for lineno, line in _content_lines(text):
        if "->" in line:
            rows.append((lineno, line))
            continue
        key, sep, rest = line.partition(":")
        key = key.strip()
        if not sep or key not in _HEADERS:
            raise ParseError(f"unrecognised line {line!r}", lineno)
        if rows:
            raise ParseError(f"header {key!r} after transition lines", lineno)
        if key in headers:
            raise ParseError(f"duplicate header {key!r}", lineno)
        headers[key] = (lineno, rest.split())
    for key in ("input", "output_b"):
        if key not in headers:
            raise ParseError(f"missing header {key!r}")
    wiretap = "output_c" in headers
    try:
        A = Alphabet(headers["input"][1])
        B = Alphabet(headers["output_b"][1])
        C = Alphabet(headers["output_c"][1]) if wiretap else None
    except UWCError as exc:
        raise ParseError(str(exc)) from exc

    main, eaves = {}, {}
    for lineno, line in rows:
        lhs, _, rhs = line.partition("->")
        symbol = lhs.strip()
        if symbol not in A.symbols:
            raise ParseError(f"unknown input symbol {symbol!r}", lineno)
        if symbol in main:
            raise ParseError(f"duplicate transition for {symbol!r}", lineno)
        b_part, bar, c_part = rhs.partition("|")
        if wiretap and not bar:
            raise ParseError(f"missing '|' eavesdropper images for {symbol!r}", lineno)
        if not wiretap and bar:
            raise ParseError("eavesdropper images given without an output_c header", lineno)
        main[symbol] = b_part.split()
        if wiretap:
            eaves[symbol] = c_part.split()
    missing = [a for a in A.symbols if a not in main]
    if missing:
        raise ParseError(f"no transition line for {', '.join(missing)}")
    try:
        T_B = make_channel(A.symbols, B.symbols, main)
        if not wiretap:
            return T_B
        return WiretapChannel(T_B, make_channel(A.symbols, C.symbols, eaves))
    except UWCError as exc:
        raise ParseError(str(exc)) from exc


def load_channel(path) -> UncertainChannel | WiretapChannel:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from exc
    return parse_channel(text)


def format_channel(channel: UncertainChannel | WiretapChannel) -> str:
    """Canonical text; ``parse_channel(format_channel(ch)) == ch``."""
    if isinstance(channel, WiretapChannel):
        main, eaves = channel.main, channel.eaves
    else:
        main, eaves = channel, None
    lines = [
        "input: " + " ".join(main.input.symbols),
        "output_b: " + " ".join(main.output.symbols),
    ]
    if eaves is not None:
        lines.append("output_c: " + " ".join(eaves.output.symbols))
    for a in main.input.symbols:
        line = f"{a} -> " + " ".join(main.sorted_image(a))
        if eaves is not None:
            line += " | " + " ".join(eaves.sorted_image(a))
        lines.append(line)
    return "\n".join(lines) + "\n"


def channel_hash(channel) -> str:
    return hashlib.sha256(format_channel(channel).encode("utf-8")).hexdigest()
