"""Plain-text serialization for instances and assignments.

Instance files ("RB1"): UTF-8, LF line endings, ASCII decimal.

    line 1:       RB1
    line 2:       n=.. k=.. d=.. m=.. rel=.. mode=.. alpha=.. r=.. p=.. seed=..
    lines 3..m+2: C <i1> ... <ik> : <code1> <code2> ...

Scopes and codes are ascending; reals carry 17 significant digits so
parsing reproduces the exact float.  An assignment file is a single line
of n space-separated integers.
"""

from __future__ import annotations

from typing import Sequence

from .core import EXACT, Instance, MODES, RBParams, derive_params

_HEADER_KEYS = ("n", "k", "d", "m", "rel", "mode", "alpha", "r", "p", "seed")


class ParseError(ValueError):
    """Malformed instance or assignment text; message names the line."""

    def __init__(self, message: str, lineno: int):
        super().__init__(f"{message} at line {lineno}")
        self.lineno = lineno


def fmt_real(x: float) -> str:
    """Decimal form with 17 significant digits (round-trip exact)."""
    return "%.17g" % x


def serialize_instance(inst: Instance) -> bytes:
    p = inst.params
    lines = [
        "RB1",
        f"n={p.n} k={p.k} d={p.d} m={p.m} rel={p.rel_size} mode={p.mode} "
        f"alpha={fmt_real(p.alpha)} r={fmt_real(p.r)} p={fmt_real(p.p)} seed={inst.seed}",
    ]
    for c in inst.constraints:
        scope = " ".join(str(v) for v in c.scope)
        codes = " ".join(str(t) for t in c.relation)
        lines.append(f"C {scope} : {codes}")
    return ("\n".join(lines) + "\n").encode("utf-8")


def _parse_header(line: str, lineno: int) -> tuple[RBParams, int]:
    fields: dict[str, str] = {}
    for token in line.split():
        key, sep, value = token.partition("=")
        if not sep or key not in _HEADER_KEYS or key in fields:
            raise ParseError(f"malformed header field {token!r}", lineno)
        fields[key] = value
    missing = [k for k in _HEADER_KEYS if k not in fields]
    if missing:
        raise ParseError(f"malformed header: missing {' '.join(missing)}", lineno)
    try:
        n, k, d, m = (int(fields[key]) for key in ("n", "k", "d", "m"))
        rel = int(fields["rel"])
        seed = int(fields["seed"])
        alpha, r, p = (float(fields[key]) for key in ("alpha", "r", "p"))
    except ValueError:
        raise ParseError("malformed header: non-numeric field", lineno) from None
    mode = fields["mode"]
    if mode not in MODES:
        raise ParseError(f"malformed header: unknown mode {mode!r}", lineno)
    params = derive_params(n, k, alpha, r, p, mode)
    if (params.d, params.m, params.rel_size) != (d, m, rel):
        raise ParseError(
            f"malformed header: d/m/rel ({d}/{m}/{rel}) do not match the control "
            f"parameters (expected {params.d}/{params.m}/{params.rel_size})",
            lineno,
        )
    return params, seed


def _parse_ints(tokens: Sequence[str], what: str, lineno: int) -> list[int]:
    out = []
    for tok in tokens:
        try:
            out.append(int(tok))
        except ValueError:
            raise ParseError(f"non-integer {what} {tok!r}", lineno) from None
    return out


def parse_instance(data: bytes | str) -> Instance:
    """Parse RB1 text; inverse of serialize_instance."""
    text = data.decode("utf-8") if isinstance(data, bytes) else data
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines or lines[0].strip() != "RB1":
        raise ParseError("malformed header: expected literal RB1", 1)
    if len(lines) < 2:
        raise ParseError("malformed header: missing parameter line", 2)
    params, seed = _parse_header(lines[1], 2)

    from .core import Constraint  # deferred to keep module import light

    space = params.space
    constraints = []
    for offset, line in enumerate(lines[2:]):
        lineno = offset + 3
        if offset >= params.m:
            raise ParseError("constraint count mismatch", lineno)
        tokens = line.split()
        if not tokens or tokens[0] != "C":
            raise ParseError("malformed constraint line: expected leading C", lineno)
        if ":" not in tokens:
            raise ParseError("malformed constraint line: missing ':'", lineno)
        sep = tokens.index(":")
        scope = _parse_ints(tokens[1:sep], "variable index", lineno)
        codes = _parse_ints(tokens[sep + 1 :], "tuple code", lineno)
        if len(scope) != params.k:
            raise ParseError(f"scope arity {len(scope)} != k={params.k}", lineno)
        if any(a >= b for a, b in zip(scope, scope[1:])):
            raise ParseError("scope not ascending", lineno)
        if scope[0] < 0 or scope[-1] >= params.n:
            raise ParseError("variable index out of range", lineno)
        if not codes:
            raise ParseError("empty relation", lineno)
        if any(a >= b for a, b in zip(codes, codes[1:])):
            raise ParseError("tuple codes not ascending", lineno)
        if codes[0] < 0 or codes[-1] >= space:
            raise ParseError("tuple code out of range", lineno)
        if params.mode == EXACT and len(codes) != params.rel_size:
            raise ParseError(
                f"relation size {len(codes)} != rel_size={params.rel_size}", lineno
            )
        constraints.append(Constraint(tuple(scope), tuple(codes)))
    if len(constraints) != params.m:
        raise ParseError("constraint count mismatch", len(lines) + 1)
    return Instance(params, tuple(constraints), seed)


def serialize_assignment(a: Sequence[int]) -> bytes:
    return (" ".join(str(v) for v in a) + "\n").encode("utf-8")


def parse_assignment(
    data: bytes | str, n: int | None = None, d: int | None = None
) -> tuple[int, ...]:
    """Parse a one-line assignment, optionally validating length and domain."""
    text = data.decode("utf-8") if isinstance(data, bytes) else data
    values = tuple(_parse_ints(text.split(), "assignment value", 1))
    if n is not None and len(values) != n:
        raise ParseError(f"assignment length {len(values)} != n={n}", 1)
    if d is not None and any(not 0 <= v < d for v in values):
        raise ParseError(f"assignment value outside domain [0, {d})", 1)
    return values
