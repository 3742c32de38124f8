"""Line-oriented text formats for fans, divisors and traces.

All numbers are exact: integers, or rationals written ``p/q``.  Blank
lines and lines starting with ``#`` are ignored.  Every parse error names
the offending line.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction

from .divisors import WeilDivisor
from .errors import InvalidFanError, ParseError
from .toric import Fan, validate_fan

_INT = re.compile(r"-?\d+\Z")
_RAT = re.compile(r"-?\d+(/\d+)?\Z")


def _lines(text: str):
    for no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if line and not line.startswith("#"):
            yield no, line.split()


def _int(tok: str, no: int) -> int:
    if not _INT.match(tok):
        raise ParseError(f"expected an integer, got {tok!r}", no)
    return int(tok)


def _rat(tok: str, no: int) -> Fraction:
    if not _RAT.match(tok):
        raise ParseError(f"expected an exact rational p/q, got {tok!r}", no)
    num, _, den = tok.partition("/")
    if den and int(den) == 0:
        raise ParseError("zero denominator", no)
    return Fraction(int(num), int(den) if den else 1)


def format_rational(x) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _header(lines, expected: str):
    try:
        no, toks = next(lines)
    except StopIteration:
        raise ParseError(f"empty input, expected header {expected!r}") from None
    if " ".join(toks) != expected:
        raise ParseError(f"expected header {expected!r}", no)


# ---------------------------------------------------------------------------
# Fans

def parse_fan(text: str, validate: bool = True) -> Fan:
    lines = _lines(text)
    _header(lines, "fan v1")
    n = None
    rays, cones = [], []
    for no, toks in lines:
        key, args = toks[0], toks[1:]
        if key == "rank":
            if n is not None or len(args) != 1:
                raise ParseError("rank must appear once with one value", no)
            n = _int(args[0], no)
            if n < 0:
                raise ParseError("rank must be nonnegative", no)
        elif key == "ray":
            if n is None:
                raise ParseError("ray before rank", no)
            if len(args) != n:
                raise ParseError(f"ray needs {n} coordinates, got {len(args)}", no)
            rays.append(tuple(_int(a, no) for a in args))
        elif key == "cone":
            idx = [_int(a, no) for a in args]
            if any(i < 0 for i in idx):
                raise ParseError("negative ray index", no)
            cones.append(tuple(idx))
        else:
            raise ParseError(f"unknown record {key!r}", no)
    if n is None:
        raise ParseError("missing rank record")
    F = Fan(n, rays, cones)
    if validate:
        bad = validate_fan(F)
        if bad:
            raise InvalidFanError(bad)
    return F


def emit_fan(F: Fan) -> str:
    out = ["fan v1", f"rank {F.rank}"]
    out += ["ray " + " ".join(str(x) for x in r) for r in F.rays]
    out += ["cone " + " ".join(str(i) for i in c) for c in F.cones]
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# Divisors

def parse_divisor(text: str, fan: Fan) -> WeilDivisor:
    lines = _lines(text)
    _header(lines, "divisor v1")
    coeffs = [Fraction(0)] * fan.nrays
    seen = set()
    for no, toks in lines:
        key, args = toks[0], toks[1:]
        if key != "coeff":
            raise ParseError(f"unknown record {key!r}", no)
        if len(args) != 2:
            raise ParseError("coeff needs an index and a value", no)
        i = _int(args[0], no)
        if not 0 <= i < fan.nrays:
            raise ParseError(f"ray index {i} out of range 0..{fan.nrays - 1}", no)
        if i in seen:
            raise ParseError(f"duplicate coefficient for ray {i}", no)
        seen.add(i)
        coeffs[i] = _rat(args[1], no)
    return WeilDivisor(fan, coeffs)


def emit_divisor(D: WeilDivisor) -> str:
    out = ["divisor v1"] + [f"coeff {i} {format_rational(a)}" for i, a in enumerate(D.coeffs)]
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# Traces: a tree of records "key arg arg ..." indented by two spaces per level

@dataclass(init=False)
class Record:
    key: str
    args: tuple[str, ...] = ()
    children: list["Record"] = field(default_factory=list)

    def __init__(self, key: str, *args, children=None):
        if not key or any(c.isspace() for c in key):
            raise ValueError(f"bad record key {key!r}")
        self.key = key
        self.args = tuple(_token(a) for a in args)
        self.children = list(children or [])

    def add(self, key: str, *args) -> "Record":
        r = Record(key, *args)
        self.children.append(r)
        return r

    def find(self, key: str) -> "Record | None":
        return next((c for c in self.children if c.key == key), None)

    def find_all(self, key: str) -> list["Record"]:
        return [c for c in self.children if c.key == key]


def _token(a) -> str:
    if isinstance(a, bool):
        return "true" if a else "false"
    if isinstance(a, Fraction):
        return format_rational(a)
    s = str(a)
    if not s or any(c.isspace() for c in s):
        raise ValueError(f"trace tokens must be nonempty and contain no whitespace: {s!r}")
    return s


def emit_trace(records: list[Record]) -> str:
    out = ["trace v1"]

    def walk(r: Record, depth: int):
        out.append("  " * depth + " ".join((r.key,) + r.args))
        for c in r.children:
            walk(c, depth + 1)

    for r in records:
        walk(r, 0)
    return "\n".join(out) + "\n"


def parse_trace(text: str) -> list[Record]:
    raw = text.splitlines()
    if not raw or raw[0].strip() != "trace v1":
        raise ParseError("expected header 'trace v1'", 1)
    roots: list[Record] = []
    stack: list[tuple[int, Record]] = []
    for no, line in enumerate(raw[1:], start=2):
        if not line.strip():
            continue
        indent = len(line) - len(line.lstrip(" "))
        if indent % 2 or "\t" in line:
            raise ParseError("indentation must be a multiple of two spaces", no)
        depth = indent // 2
        toks = line.split()
        rec = Record(toks[0], *toks[1:])
        while stack and stack[-1][0] >= depth:
            stack.pop()
        if depth == 0:
            roots.append(rec)
        elif not stack or stack[-1][0] != depth - 1:
            raise ParseError("record indented too deeply", no)
        else:
            stack[-1][1].children.append(rec)
        stack.append((depth, rec))
    return roots
