"""Line-oriented key=value problem files.

Several ``key=value`` pairs may share a line; a value runs until the next
``key=`` or the end of the line, so expressions may contain spaces.  ``#``
starts a comment.  Keys may appear in any order.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from ..coeff import default_names
from ..errors import ParseError, ValidationError
from ..forms import Connection, Form, PolyVectorField, flat, sharp
from .expr import format_form, parse_form

EQUATIONS = ("homogeneous", "inhom-exact", "general", "curvature", "dual", "pipeline")
OUTPUTS = ("text", "json", "latex")

_KEY = re.compile(r"(?:(?<=\s)|^)([A-Za-z_][A-Za-z0-9_]*(?:\[[^\]\s]*\])*)\s*=")
_INDEXED = re.compile(r"^(A|g|omega|X|init)((?:\[\d+\])+)$")
_PLAIN = ("dim", "trunc", "fiber", "center", "equation", "c", "c2", "J", "output", "degree", "stages")
_STAGE = re.compile(r"^(D|delta)(?:\^(\d+))?$")


@dataclass
class RawEntry:
    key: str
    value: str
    line: int
    column: int  # column of the value


@dataclass
class ProblemSpec:
    dim: int
    trunc: int
    fiber: int = 1
    center: Tuple[Fraction, ...] = ()
    equation: str = "homogeneous"
    connection: Optional[Connection] = None
    c: Optional[Form] = None
    c2: Optional[Form] = None
    J: Optional[Form] = None
    degree: Optional[int] = None
    stages: List[Tuple[str, int]] = field(default_factory=list)
    init: Dict[int, Form] = field(default_factory=dict)
    omegas: Dict[int, Form] = field(default_factory=dict)
    fields: Dict[int, PolyVectorField] = field(default_factory=dict)
    gauge: Optional[List[List[Form]]] = None
    output: str = "text"

    @property
    def names(self) -> List[str]:
        return default_names(self.dim)

    def frame(self):
        if not self.omegas:
            return None
        return ([self.omegas[i] for i in sorted(self.omegas)],
                [self.fields[i] for i in sorted(self.fields)])


def split_entries(text: str) -> List[RawEntry]:
    if text.startswith("﻿"):
        text = text[1:]
    out: List[RawEntry] = []
    for ln, line in enumerate(text.replace("\r\n", "\n").replace("\r", "\n").split("\n"), 1):
        line = line.split("#", 1)[0]
        if not line.strip():
            continue
        keys = list(_KEY.finditer(line))
        if not keys or line[: keys[0].start()].strip():
            first = len(line) - len(line.lstrip()) + 1
            raise ParseError("expected key=value", ln, first)
        for i, m in enumerate(keys):
            end = keys[i + 1].start() if i + 1 < len(keys) else len(line)
            raw = line[m.end():end]
            lead = len(raw) - len(raw.lstrip())
            out.append(RawEntry(m.group(1), raw.strip(), ln, m.end() + lead + 1))
    return out


def _int(e: RawEntry, lo: int = 0) -> int:
    if not re.fullmatch(r"-?\d+", e.value):
        raise ParseError(f"{e.key} must be an integer, found {e.value!r}", e.line, e.column)
    v = int(e.value)
    if v < lo:
        raise ValidationError(f"line {e.line}: {e.key} must be >= {lo}")
    return v


def parse_rational(text: str, line: int, column: int) -> Fraction:
    t = text.strip()
    if re.fullmatch(r"[-+]?\d*\.\d*", t) and any(ch.isdigit() for ch in t):
        raise ParseError(f"decimal literal {t!r} is not allowed; write an exact fraction", line, column)
    if not re.fullmatch(r"[-+]?\d+(?:/\d+)?", t):
        raise ParseError(f"expected a rational number like 3/2, found {t!r}", line, column)
    if re.fullmatch(r"[-+]?\d+/0+", t):
        raise ParseError("division by zero", line, column)
    return Fraction(t)


def _center(e: RawEntry, dim: int) -> Tuple[Fraction, ...]:
    parts = e.value.split(",")
    vals, col = [], e.column
    for p in parts:
        vals.append(parse_rational(p, e.line, col + len(p) - len(p.lstrip())))
        col += len(p) + 1
    if len(vals) != dim:
        raise ValidationError(f"line {e.line}: center has {len(vals)} coordinates, dim is {dim}")
    return tuple(vals)


def _indices(e: RawEntry, m: re.Match, count: int, bound: int) -> Tuple[int, ...]:
    idx = tuple(int(s) for s in re.findall(r"\d+", m.group(2)))
    if len(idx) != count:
        raise ParseError(f"{m.group(1)} takes {count} index(es), got {e.key}", e.line, 1)
    for i in idx:
        if not 1 <= i <= bound:
            raise ValidationError(f"line {e.line}: index {i} in {e.key} is out of range 1..{bound}")
    return idx


def _stages(e: RawEntry) -> List[Tuple[str, int]]:
    out = []
    col = e.column
    for tok in re.split(r"(\s+)", e.value):
        if tok.strip():
            m = _STAGE.match(tok)
            if not m:
                raise ParseError(f"expected a stage 'D', 'delta', 'D^p' or 'delta^p', found {tok!r}",
                                 e.line, col)
            out.append((m.group(1), int(m.group(2) or 1)))
        col += len(tok)
    if not out:
        raise ParseError("stages must list at least one operator", e.line, e.column)
    return out


def parse_problem(text: str, overrides: Optional[Dict[str, str]] = None) -> ProblemSpec:
    """Parse a problem document; ``overrides`` replace file values (as raw text)."""
    entries = split_entries(text)
    seen: Dict[str, RawEntry] = {}
    for e in entries:
        if e.key not in _PLAIN and not _INDEXED.match(e.key):
            raise ParseError(f"unknown key {e.key!r}", e.line, max(1, e.column - len(e.key) - 1))
        if e.key in seen:
            raise ParseError(f"duplicate key {e.key!r} (first on line {seen[e.key].line})",
                             e.line, e.column)
        seen[e.key] = e
    for k, v in (overrides or {}).items():
        if v is not None:
            seen[k] = RawEntry(k, str(v), 0, 1)
    for req in ("dim", "trunc"):
        if req not in seen:
            raise ValidationError(f"missing required key {req!r}")
    dim = _int(seen["dim"], 1)
    trunc = _int(seen["trunc"], 0)
    fiber = _int(seen["fiber"], 1) if "fiber" in seen else 1
    spec = ProblemSpec(dim=dim, trunc=trunc, fiber=fiber)
    spec.center = _center(seen["center"], dim) if "center" in seen else (Fraction(0),) * dim
    if "equation" in seen:
        eq = seen["equation"]
        if eq.value not in EQUATIONS:
            raise ParseError(f"unknown equation {eq.value!r}; expected one of {', '.join(EQUATIONS)}",
                             eq.line, eq.column)
        spec.equation = eq.value
    if "output" in seen:
        o = seen["output"]
        if o.value not in OUTPUTS:
            raise ParseError(f"unknown output format {o.value!r}", o.line, o.column)
        spec.output = o.value
    if "degree" in seen:
        spec.degree = _int(seen["degree"], 0)
    if "stages" in seen:
        spec.stages = _stages(seen["stages"])

    def form(e: RawEntry, fib: int = fiber, degree=None) -> Form:
        return parse_form(e.value, dim, trunc, fib, degree, line=e.line, col0=e.column)

    entries_A: Dict[Tuple[int, int], Form] = {}
    gauge: Dict[Tuple[int, int], Form] = {}
    for key, e in seen.items():
        m = _INDEXED.match(key)
        if key in ("c", "c2", "J"):
            setattr(spec, key, form(e))
        elif m is None:
            continue
        elif m.group(1) == "A":
            entries_A[_indices(e, m, 2, fiber)] = form(e, 1, 1)
        elif m.group(1) == "g":
            gauge[_indices(e, m, 2, fiber)] = form(e, 1, 0)
        elif m.group(1) == "omega":
            spec.omegas[_indices(e, m, 1, dim)[0]] = form(e, 1, 1)
        elif m.group(1) == "X":
            # vector fields are written as their metric-dual one-forms
            spec.fields[_indices(e, m, 1, dim)[0]] = sharp(form(e, 1, 1))
        elif m.group(1) == "init":
            spec.init[_indices(e, m, 1, 10 ** 6)[0]] = form(e)
    rows = [[entries_A.get((i, j), Form.zero(dim, 1, trunc)) for j in range(1, fiber + 1)]
            for i in range(1, fiber + 1)]
    spec.connection = Connection(rows)
    if gauge:
        spec.gauge = [[gauge.get((i, j), Form.zero(dim, 0, trunc)) for j in range(1, fiber + 1)]
                      for i in range(1, fiber + 1)]
    validate(spec)
    return spec


def validate(spec: ProblemSpec) -> None:
    eq = spec.equation
    if sorted(spec.omegas) != sorted(spec.fields):
        raise ValidationError("omega[i] and X[i] must be given for the same indices")
    if eq in ("homogeneous",) and spec.c is None:
        raise ValidationError("equation=homogeneous needs initial data c")
    if eq in ("inhom-exact", "general", "pipeline") and spec.J is None:
        raise ValidationError(f"equation={eq} needs a right-hand side J")
    if eq == "dual" and spec.J is None and spec.c is None:
        raise ValidationError("equation=dual needs c or J")
    if eq == "curvature" and spec.J is None and spec.c2 is None and spec.c is None:
        raise ValidationError("equation=curvature needs J, c or c2")
    if eq == "pipeline" and not spec.stages:
        raise ValidationError("equation=pipeline needs stages")
    if eq in ("inhom-exact", "general") and spec.c is not None and spec.J is not None:
        if spec.c.degree + 1 != spec.J.degree:
            raise ValidationError(f"c is a {spec.c.degree}-form but J is a {spec.J.degree}-form; "
                                  "J must have degree one higher")
    if eq == "dual" and spec.c is not None and spec.J is not None:
        if spec.c.degree != spec.J.degree + 1:
            raise ValidationError("for the dual equation J must have degree one lower than c")
    if eq in ("inhom-exact", "general") and spec.J is not None and spec.J.degree == 0:
        raise ValidationError("J must have degree >= 1")
    if spec.gauge is not None and eq not in ("homogeneous", "inhom-exact", "general"):
        raise ValidationError("a gauge g is only supported for first-order covariant equations")
    if spec.omegas and spec.fiber != 1:
        raise ValidationError("horizontal frames need fiber=1")
    if eq != "pipeline" and (spec.stages or spec.init):
        raise ValidationError("stages and init[i] are only meaningful for equation=pipeline")
    if eq != "curvature" and spec.c2 is not None:
        raise ValidationError("c2 is only meaningful for equation=curvature")


def render_problem(spec: ProblemSpec) -> str:
    """Canonical problem text; ``parse_problem(render_problem(s))`` reproduces ``s``."""
    names = spec.names
    lines = [f"dim={spec.dim} trunc={spec.trunc} fiber={spec.fiber}",
             "center=" + ",".join(str(v) for v in spec.center),
             f"equation={spec.equation}"]
    if spec.degree is not None:
        lines.append(f"degree={spec.degree}")
    if spec.stages:
        lines.append("stages=" + " ".join(k if p == 1 else f"{k}^{p}" for k, p in spec.stages))
    for i, row in enumerate(spec.connection.entries, 1):
        for j, e in enumerate(row, 1):
            if not e.is_zero():
                lines.append(f"A[{i}][{j}]={format_form(e, names, True)}")
    for key in ("c", "c2", "J"):
        f = getattr(spec, key)
        if f is not None:
            lines.append(f"{key}={format_form(f, names, True)}")
    for i in sorted(spec.init):
        lines.append(f"init[{i}]={format_form(spec.init[i], names, True)}")
    for i in sorted(spec.omegas):
        lines.append(f"omega[{i}]={format_form(spec.omegas[i], names, True)}")
        lines.append(f"X[{i}]={format_form(flat(spec.fields[i]), names, True)}")
    if spec.gauge is not None:
        for i, row in enumerate(spec.gauge, 1):
            for j, e in enumerate(row, 1):
                if not e.is_zero():
                    lines.append(f"g[{i}][{j}]={format_form(e, names, True)}")
    lines.append(f"output={spec.output}")
    return "\n".join(lines) + "\n"

