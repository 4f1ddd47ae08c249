"""Instance-file parsing and serialization.

Grammar (one instance per line; "#" starts a comment):

    LINE     := ID (WS BINDING)*
    BINDING  := NAME "=" VALUE
    VALUE    := INTEGER | MONOMIAL | "inf" | "0"
    MONOMIAL := [SIGN] RATIONAL? ("q" ("^" EXPONENT)?)?   (at least one part)
    RATIONAL := INT ("/" POSINT)?
    EXPONENT := INT | "(" INT "/2" ")"

Exponents in the file are whole-q unless written as "(e/2)"; internally
everything is t-units (t = q^(1/2)).  A whole file is rejected on the first
bad line, with 1-based line/column diagnostics.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Optional, Tuple

from gmpy2 import mpq

from .corpus import IdentityInstance, get_def, make_instance
from .errors import ParseError
from .series import INFINITY, Monomial

_NAME_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_MONO_RE = re.compile(
    r"""^
    (?P<sign>[+-])?
    (?P<rat>\d+(?:/\d+)?)?
    (?P<qpart>q(?:\^(?P<exp>-?\d+|\(-?\d+/2\)))?)?
    $""",
    re.VERBOSE,
)


@dataclass(frozen=True)
class InstanceFile:
    entries: Tuple[Tuple[int, IdentityInstance], ...]


def parse_monomial(text: str) -> Monomial:
    """Parse a VALUE of monomial kind."""
    if text == "inf":
        return INFINITY
    if text == "0":
        return Monomial(0)
    m = _MONO_RE.match(text)
    if not m or (m.group("rat") is None and m.group("qpart") is None):
        raise ValueError(f"not a monomial: {text!r}")
    coeff = mpq(m.group("rat")) if m.group("rat") else mpq(1)
    if m.group("sign") == "-":
        coeff = -coeff
    texp = 0
    if m.group("qpart"):
        exp = m.group("exp")
        if exp is None:
            texp = 2
        elif exp.startswith("("):
            texp = int(exp[1:-3])
        else:
            texp = 2 * int(exp)
    if coeff == 0:
        raise ValueError("zero coefficient with a q-part; write 0")
    return Monomial(coeff, texp)


def format_monomial(m: Monomial) -> str:
    """Canonical serialization; parse(format(m)) == m."""
    if m.infinite:
        return "inf"
    if m.is_zero():
        return "0"
    if m.texp == 0:
        return str(m.coeff)
    if m.texp == 2:
        qpart = "q"
    elif m.texp % 2 == 0:
        qpart = f"q^{m.texp // 2}"
    else:
        qpart = f"q^({m.texp}/2)"
    if m.coeff == 1:
        return qpart
    if m.coeff == -1:
        return "-" + qpart
    return f"{m.coeff}{qpart}"


def format_instance(inst: IdentityInstance) -> str:
    d = get_def(inst.def_id)
    parts = [inst.def_id]
    for p in d.params:
        v = inst.bindings[p.name]
        parts.append(f"{p.name}={v if isinstance(v, int) else format_monomial(v)}")
    parts.append(f"order={inst.order}")
    return " ".join(parts)


_INT_RE = re.compile(r"^-?\d+$")


def _parse_line(line: str, line_no: int, default_order: Optional[int]) -> IdentityInstance:
    def err(msg: str, col: int):
        raise ParseError(msg, line_no, col)

    pos = 0
    mm = _NAME_RE.match(line, pos)
    if not mm:
        err("expected identity ID", pos + 1)
    def_id = mm.group(0)
    try:
        d = get_def(def_id)
    except Exception as exc:
        raise ParseError(str(exc), line_no, pos + 1) from exc
    kinds = {p.name: p.kind for p in d.params}
    pos = mm.end()
    bindings: dict = {}
    order: Optional[int] = None
    while pos < len(line):
        if not line[pos].isspace():
            err(f"unexpected character {line[pos]!r}", pos + 1)
        while pos < len(line) and line[pos].isspace():
            pos += 1
        if pos >= len(line):
            break
        mm = _NAME_RE.match(line, pos)
        if not mm:
            err("expected parameter name", pos + 1)
        name = mm.group(0)
        pos = mm.end()
        if pos >= len(line) or line[pos] != "=":
            err("expected '=' after parameter name", pos + 1)
        pos += 1
        start = pos
        while pos < len(line) and not line[pos].isspace():
            pos += 1
        value = line[start:pos]
        if not value:
            err("expected a value", start + 1)
        if name == "order":
            if not _INT_RE.match(value):
                err("order must be an integer (t-units)", start + 1)
            order = int(value)
            continue
        kind = kinds.get(name)
        if kind is None:
            err(f"{def_id} has no parameter {name!r}", start + 1)
        if name in bindings:
            err(f"duplicate parameter {name!r}", start + 1)
        if kind in ("nonneg-int", "pos-int"):
            if not _INT_RE.match(value):
                err(f"{name} must be an integer", start + 1)
            bindings[name] = int(value)
        else:
            try:
                bindings[name] = parse_monomial(value)
            except ValueError as exc:
                err(str(exc), start + 1)
    if order is None:
        order = default_order
    if order is None:
        err("no order given and no default order configured", len(line))
    try:
        return make_instance(def_id, bindings, order)
    except Exception as exc:
        raise ParseError(f"{type(exc).__name__}: {exc}", line_no, 1) from exc


def parse_instances(text: str, default_order: Optional[int] = None) -> InstanceFile:
    """Parse a whole instance file; any bad line rejects the file."""
    entries = []
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        entries.append((line_no, _parse_line(line.strip(), line_no, default_order)))
    return InstanceFile(tuple(entries))
