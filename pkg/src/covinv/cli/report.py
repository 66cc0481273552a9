"""Report object and its text / json / latex renderings."""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from math import gcd
from typing import Any, Dict, List, Optional, Sequence

from ..coeff import Series, default_names
from ..forms import Form
from .expr import format_form
from .parser import ProblemSpec, parse_problem, render_problem


@dataclass
class Report:
    problem: ProblemSpec
    solution: Form
    residual_min_degree: int
    residual_terms: int
    iterations: int
    constraint_status: str
    gauge_modes: List[Form] = field(default_factory=list)
    radius: Optional[float] = None
    parts: Dict[str, Form] = field(default_factory=dict)
    diagnostics: Dict[str, Any] = field(default_factory=dict)
    verified: bool = True
    message: str = ""
    timing: float = 0.0

    @property
    def ok(self) -> bool:
        return self.constraint_status != "NoSolution" and self.verified


# json ---------------------------------------------------------------------------

def form_to_json(f: Form) -> Dict[str, Any]:
    return {
        "dim": f.dim,
        "trunc": f.trunc,
        "fiber": f.fiber,
        "degree": f.degree,
        "terms": [
            {"indexSet": list(I), "fiber": a, "monomial": list(mono), "value": str(c)}
            for I, a, mono, c in f.terms()
        ],
    }


def form_from_json(obj: Dict[str, Any]) -> Form:
    dim, trunc = obj["dim"], obj["trunc"]
    grouped: Dict = {}
    for t in obj["terms"]:
        key = (tuple(t["indexSet"]), t["fiber"])
        grouped.setdefault(key, {})[tuple(t["monomial"])] = Fraction(t["value"])
    coeffs = {k: Series(dim, trunc, v) for k, v in grouped.items()}
    return Form(dim, obj["degree"], trunc, coeffs, obj["fiber"])


def _enc(v):
    if isinstance(v, Form):
        return {"form": form_to_json(v)}
    if isinstance(v, Fraction):
        return {"rational": str(v)}
    if isinstance(v, float) and not math.isfinite(v):
        return {"float": str(v)}
    if isinstance(v, dict):
        return {"dict": {str(k): _enc(x) for k, x in v.items()}}
    if isinstance(v, (list, tuple)):
        return [_enc(x) for x in v]
    return v


def _dec(v):
    if isinstance(v, list):
        return [_dec(x) for x in v]
    if isinstance(v, dict):
        if "form" in v:
            return form_from_json(v["form"])
        if "rational" in v:
            return Fraction(v["rational"])
        if "float" in v:
            return float(v["float"])
        if "dict" in v:
            return {k: _dec(x) for k, x in v["dict"].items()}
    return v


def report_to_json(r: Report) -> Dict[str, Any]:
    p = r.problem
    return {
        "problem": {
            "dim": p.dim,
            "trunc": p.trunc,
            "fiber": p.fiber,
            "center": [str(c) for c in p.center],
            "equation": p.equation,
            "text": render_problem(p),
        },
        "solution": form_to_json(r.solution),
        "residualMinDegree": r.residual_min_degree,
        "residualTerms": r.residual_terms,
        "iterations": r.iterations,
        "constraintStatus": r.constraint_status,
        "gaugeModes": [form_to_json(g) for g in r.gauge_modes],
        "radius": _enc(r.radius),
        "parts": {k: form_to_json(v) for k, v in r.parts.items()},
        "diagnostics": {k: _enc(v) for k, v in r.diagnostics.items()},
        "verified": r.verified,
        "message": r.message,
        "timing": r.timing,
    }


def report_from_json(obj) -> Report:
    if isinstance(obj, str):
        obj = json.loads(obj)
    return Report(
        problem=parse_problem(obj["problem"]["text"]),
        solution=form_from_json(obj["solution"]),
        residual_min_degree=obj["residualMinDegree"],
        residual_terms=obj["residualTerms"],
        iterations=obj["iterations"],
        constraint_status=obj["constraintStatus"],
        gauge_modes=[form_from_json(g) for g in obj["gaugeModes"]],
        radius=_dec(obj["radius"]),
        parts={k: form_from_json(v) for k, v in obj["parts"].items()},
        diagnostics={k: _dec(v) for k, v in obj["diagnostics"].items()},
        verified=obj["verified"],
        message=obj["message"],
        timing=obj["timing"],
    )


# latex --------------------------------------------------------------------------

def _tex_name(n: str) -> str:
    return n if len(n) == 1 else f"{n[0]}_{{{n[1:]}}}"


def _tex_frac(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"\\frac{{{c.numerator}}}{{{c.denominator}}}"


def _tex_body(I, mono, names) -> str:
    m = "".join(_tex_name(n) + (f"^{{{e}}}" if e > 1 else "") for n, e in zip(names, mono) if e)
    b = r"\wedge ".join("d" + _tex_name(names[i]) for i in I)
    if m and b:
        return m + r"\," + b
    return m or b


def _tex_sum(terms, names) -> str:
    out = ""
    for k, (I, mono, c) in enumerate(terms):
        body = _tex_body(I, mono, names)
        mag = abs(c)
        coef = "" if (mag == 1 and body) else _tex_frac(mag)
        piece = coef + (r"\," if coef and body.startswith("d") else "") + body
        if k == 0:
            out = ("-" if c < 0 else "") + piece
        else:
            out += (" - " if c < 0 else " + ") + piece
    return out


def latex_scalar(terms, names) -> str:
    if not terms:
        return "0"
    if len(terms) == 1:
        return _tex_sum(terms, names)
    num = reduce(gcd, (abs(c.numerator) for _, _, c in terms))
    den = reduce(lambda a, b: a * b // gcd(a, b), (c.denominator for _, _, c in terms))
    content = Fraction(num, den)
    if terms[0][2] < 0:
        content = -content
    if content == 1:
        return _tex_sum(terms, names)
    inner = _tex_sum([(I, m, c / content) for I, m, c in terms], names)
    lead = "-" if content < 0 else ""
    mag = abs(content)
    pre = "" if mag == 1 else _tex_frac(mag)
    return f"{lead}{pre}\\left({inner}\\right)"


def latex_form(f: Form, names: Optional[Sequence[str]] = None) -> str:
    """Wedge-expression LaTeX, with the common rational content factored out."""
    names = names or default_names(f.dim)
    comps = [[] for _ in range(f.fiber)]
    for I, a, mono, c in f.terms():
        comps[a].append((I, mono, c))
    if f.fiber == 1:
        return latex_scalar(comps[0], names)
    rows = r" \\ ".join(latex_scalar(t, names) for t in comps)
    return r"\begin{pmatrix} " + rows + r" \end{pmatrix}"


def to_latex(r: Report) -> str:
    names = r.problem.names
    lines = [
        f"% equation: {r.problem.equation}, dim={r.problem.dim}, N={r.problem.trunc}, m={r.problem.fiber}",
        f"% constraint status: {r.constraint_status}; residual min degree {r.residual_min_degree}",
        r"\[ \varphi = " + latex_form(r.solution, names) + r" \]",
    ]
    for i, g in enumerate(r.gauge_modes, 1):
        lines.append(rf"\[ g_{{{i}}} = " + latex_form(g, names) + r" \]")
    return "\n".join(lines) + "\n"


# text ---------------------------------------------------------------------------

def _mono_text(mono, names) -> str:
    s = "*".join(n if e == 1 else f"{n}^{e}" for n, e in zip(names, mono) if e)
    return s or "1"


def term_table(f: Form, names) -> List[str]:
    rows = [("indexSet", "fiber", "monomial", "value")]
    for I, a, mono, c in f.terms():
        rows.append(("^".join("d" + names[i] for i in I) or "1", str(a + 1), _mono_text(mono, names), str(c)))
    widths = [max(len(r[k]) for r in rows) for k in range(4)]
    return ["  ".join(cell.ljust(w) for cell, w in zip(r, widths)).rstrip() for r in rows]


def _fmt_radius(r) -> str:
    return "n/a" if r is None else ("inf" if r == math.inf else f"{r:.6g}")


def to_text(r: Report) -> str:
    p, names = r.problem, r.problem.names
    header = [
        ("equation", p.equation),
        ("dim / trunc / fiber", f"{p.dim} / {p.trunc} / {p.fiber}"),
        ("center", ", ".join(str(c) for c in p.center)),
        ("constraint status", r.constraint_status),
        ("iterations", str(r.iterations)),
        ("residual min degree", f"{r.residual_min_degree} ({r.residual_terms} terms)"),
        ("radius estimate", _fmt_radius(r.radius)),
        ("verified", "yes" if r.verified else "NO"),
        ("time", f"{r.timing:.3f} s"),
    ]
    if r.message:
        header.append(("message", r.message))
    w = max(len(k) for k, _ in header)
    out = [f"{k.ljust(w)}  {v}" for k, v in header]
    out.append("")
    out.append(f"solution ({r.solution.degree}-form):")
    out.append("  " + format_form(r.solution, names))
    if not r.solution.is_zero():
        out.extend("  " + line for line in term_table(r.solution, names))
    if r.gauge_modes:
        out.append("")
        out.append(f"gauge modes ({len(r.gauge_modes)}):")
        out.extend(f"  {format_form(g, names)}" for g in r.gauge_modes)
    if r.parts:
        out.append("")
        out.append("parts:")
        pw = max(len(k) for k in r.parts)
        out.extend(f"  {k.ljust(pw)}  {format_form(v, names)}" for k, v in r.parts.items())
    if r.diagnostics:
        out.append("")
        out.append("diagnostics:")
        dw = max(len(k) for k in r.diagnostics)
        for k, v in r.diagnostics.items():
            out.append(f"  {k.ljust(dw)}  {_diag_text(v, names)}")
    return "\n".join(out) + "\n"


def _diag_text(v, names) -> str:
    if isinstance(v, Form):
        return format_form(v, names)
    if isinstance(v, dict):
        return "{" + ", ".join(f"{k}: {_diag_text(x, names)}" for k, x in v.items()) + "}"
    if isinstance(v, list):
        return "[" + ", ".join(_diag_text(x, names) for x in v) + "]"
    return str(v)


def emit(r: Report, fmt: str = "text") -> str:
    if fmt == "json":
        return json.dumps(report_to_json(r), indent=2) + "\n"
    if fmt == "latex":
        return to_latex(r)
    if fmt == "text":
        return to_text(r)
    raise ValueError(f"unknown output format {fmt!r}")
