"""Form expressions: recursive-descent parser and the matching renderer.

Grammar (whitespace ignored)::

    expr    := ['+'|'-'] term (('+'|'-') term)*
    term    := factor ('*' factor)* ['[' INT ']']
    factor  := atom ['^' INT]            # power of a function-valued atom
             | basis
    atom    := INT ['/' INT] | VAR | '(' expr ')'
    basis   := 'd'VAR ('^' 'd'VAR)*

A factor that is a wedge of differentials is a basis; the product of two
bases is their wedge product.  ``[a]`` selects fiber component a (1-based).
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from ..coeff import Series, default_names
from ..errors import ParseError, ValidationError
from ..forms import Form, merge_sign

# a value is {(index_set, component or None): Series}
Value = Dict[Tuple[Tuple[int, ...], Optional[int]], Series]

_TOKEN = re.compile(
    r"\s*(?:(?P<dec>\d+\.\d*|\.\d+)|(?P<int>\d+)|(?P<ident>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>[-+*/^()\[\]]))"
)


@dataclass
class Token:
    kind: str  # int, ident, op, end
    text: str
    col: int  # 1-based column within the full line


def tokenize(text: str, line: int = 1, col0: int = 1) -> List[Token]:
    toks, pos = [], 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            j = pos + len(text[pos:]) - len(text[pos:].lstrip())
            raise ParseError(f"unexpected character {text[j]!r}", line, col0 + j)
        kind = m.lastgroup
        start = m.start(kind)
        if kind == "dec":
            raise ParseError(
                f"decimal literal {m.group(kind)!r} is not allowed; write an exact fraction such as 3/2",
                line, col0 + start,
            )
        toks.append(Token(kind, m.group(kind), col0 + start))
        pos = m.end()
    toks.append(Token("end", "", col0 + len(text.rstrip())))
    return toks


class ExprParser:
    def __init__(self, text: str, dim: int, trunc: int, fiber: int = 1,
                 names: Optional[Sequence[str]] = None, line: int = 1, col0: int = 1):
        self.dim, self.trunc, self.fiber = dim, trunc, fiber
        self.names = list(names or default_names(dim))
        self.var_index = {n: i for i, n in enumerate(self.names)}
        self.line = line
        self.toks = tokenize(text, line, col0)
        self.i = 0

    # token helpers
    def peek(self) -> Token:
        return self.toks[self.i]

    def next(self) -> Token:
        t = self.toks[self.i]
        self.i += 1
        return t

    def error(self, msg: str, tok: Optional[Token] = None):
        tok = tok or self.peek()
        return ParseError(msg, self.line, tok.col)

    def expect(self, text: str) -> Token:
        t = self.peek()
        if t.text != text or t.kind not in ("op",):
            found = "end of input" if t.kind == "end" else repr(t.text)
            raise self.error(f"expected {text!r}, found {found}")
        return self.next()

    def at_op(self, *ops) -> bool:
        t = self.peek()
        return t.kind == "op" and t.text in ops

    # value helpers
    def const(self, c) -> Value:
        return {((), None): Series.const(self.dim, self.trunc, c)}

    def _is_basis_ident(self, text: str) -> bool:
        return text.startswith("d") and text not in self.var_index

    # grammar
    def parse(self) -> Value:
        if self.peek().kind == "end":
            raise self.error("expected an expression, found end of input")
        v = self.expr()
        if self.peek().kind != "end":
            raise self.error(f"expected '+', '-' or end of input, found {self.peek().text!r}")
        return v

    def expr(self) -> Value:
        sign = 1
        if self.at_op("+", "-"):
            sign = -1 if self.next().text == "-" else 1
        out = _scale(self.term(), sign)
        while self.at_op("+", "-"):
            sign = -1 if self.next().text == "-" else 1
            out = _add(out, _scale(self.term(), sign))
        return out

    def term(self) -> Value:
        val = self.factor()
        while self.at_op("*"):
            tok = self.next()
            rhs = self.factor()
            try:
                val = _mul(val, rhs, self.trunc)
            except ValueError:
                raise ParseError("fiber component given twice", self.line, tok.col) from None
        if self.at_op("["):
            tok = self.next()
            t = self.next()
            if t.kind != "int":
                raise self.error("expected a fiber index", t)
            a = int(t.text)
            if not 1 <= a <= self.fiber:
                raise ParseError(f"fiber index {a} out of range 1..{self.fiber}", self.line, t.col)
            self.expect("]")
            if any(k[1] is not None for k in val):
                raise ParseError("fiber component given twice", self.line, tok.col)
            val = {(k[0], a - 1): s for k, s in val.items()}
        return val

    def factor(self) -> Value:
        t = self.peek()
        if t.kind == "ident" and self._is_basis_ident(t.text):
            return self.basis()
        base = self.atom()
        if self.at_op("^"):
            self.next()
            e = self.next()
            if e.kind != "int":
                raise self.error("expected a non-negative integer exponent", e)
            if any(k[0] for k in base):
                raise ParseError("only functions can be raised to a power", self.line, e.col)
            out = self.const(1)
            for _ in range(int(e.text)):
                out = _mul(out, base, self.trunc)
            return out
        return base

    def atom(self) -> Value:
        t = self.next()
        if t.kind == "int":
            num = Fraction(int(t.text))
            if self.at_op("/"):
                self.next()
                d = self.next()
                if d.kind != "int":
                    raise self.error("expected an integer denominator", d)
                if int(d.text) == 0:
                    raise ParseError("division by zero", self.line, d.col)
                num /= int(d.text)
            return self.const(num)
        if t.kind == "ident":
            if t.text in self.var_index:
                return {((), None): Series.var(self.dim, self.trunc, self.var_index[t.text])}
            raise ParseError(f"unknown variable {t.text!r} (declared: {', '.join(self.names)})",
                             self.line, t.col)
        if t.kind == "op" and t.text == "(":
            v = self.expr()
            self.expect(")")
            return v
        found = "end of input" if t.kind == "end" else repr(t.text)
        raise ParseError(f"expected a number, variable, differential or '(', found {found}",
                         self.line, t.col)

    def basis(self) -> Value:
        idx = [self._differential(self.next())]
        # '^' after a differential is a wedge, never a power
        while self.at_op("^"):
            self.next()
            t = self.next()
            if not (t.kind == "ident" and t.text.startswith("d")):
                raise self.error("expected a differential after '^'", t)
            idx.append(self._differential(t))
        f = Form.basis(self.dim, self.trunc, idx)
        return {(k[0], None): s for k, s in f.coeffs.items()}

    def _differential(self, t: Token) -> int:
        name = t.text[1:]
        if name not in self.var_index:
            raise ParseError(f"unknown basis symbol {t.text!r} (declared: "
                             f"{', '.join('d' + n for n in self.names)})", self.line, t.col)
        return self.var_index[name]


def _add(a: Value, b: Value) -> Value:
    out = dict(a)
    for k, s in b.items():
        out[k] = out[k] + s if k in out else s
    return out  # zero entries are kept so that `dx - dx` still reads as a 1-form


def _scale(a: Value, c) -> Value:
    return {k: s.scale(c) for k, s in a.items()} if c != 1 else a


def _mul(a: Value, b: Value, trunc: int) -> Value:
    out: Value = {}
    for (I, p), s in a.items():
        for (J, q), t in b.items():
            if p is not None and q is not None:
                raise ValueError("fiber component given twice")
            sign, K = merge_sign(I, J)
            if sign == 0:
                continue
            prod = (s * t).scale(sign)
            key = (K, p if p is not None else q)
            out[key] = out[key] + prod if key in out else prod
    return out


def parse_form(text: str, dim: int, trunc: int, fiber: int = 1, degree: Optional[int] = None,
               names: Optional[Sequence[str]] = None, line: int = 1, col0: int = 1) -> Form:
    """Parse a form expression; ``degree`` is inferred from the terms when omitted."""
    p = ExprParser(text, dim, trunc, fiber, names, line, col0)
    val = p.parse()
    degrees = {len(k[0]) for k in val}
    if len(degrees) > 1:
        raise ValidationError(f"line {line}: expression mixes form degrees {sorted(degrees)}")
    found = degrees.pop() if degrees else degree
    if degree is not None and found != degree:
        raise ValidationError(f"line {line}: expected a {degree}-form, got a {found}-form")
    if found is None:
        found = 0
    return Form(dim, found, trunc, {(k[0], k[1] or 0): s for k, s in val.items()}, fiber)


# rendering -------------------------------------------------------------------

def _mono_str(mono, names) -> str:
    return "*".join(n if e == 1 else f"{n}^{e}" for n, e in zip(names, mono) if e)


def format_form(form: Form, names: Optional[Sequence[str]] = None, keep_degree: bool = False) -> str:
    """Render in the input grammar; ``parse_form(format_form(f, keep_degree=True))`` gives back ``f``."""
    names = names or default_names(form.dim)
    if form.is_zero():
        if keep_degree and form.degree:
            return "0*" + "^".join("d" + names[i] for i in range(form.degree))
        return "0"
    pieces = []
    for I, a, mono, c in form.terms():
        factors = []
        mono_s = _mono_str(mono, names)
        basis = "^".join("d" + names[i] for i in I)
        if abs(c) != 1 or not (mono_s or basis):
            factors.append(str(abs(c)))
        if mono_s:
            factors.append(mono_s)
        if basis:
            factors.append(basis)
        body = "*".join(factors)
        if form.fiber > 1:
            body += f"[{a + 1}]"
        pieces.append(("-" if c < 0 else "+", body))
    out = ("-" if pieces[0][0] == "-" else "") + pieces[0][1]
    for sign, body in pieces[1:]:
        out += f" {sign} {body}"
    return out
