"""Parsers for element, factored-element, form and rational-map literals."""

import re
from fractions import Fraction

from .errors import DomainError, ParseError

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z]\w*)|(.))")


def _tokens(s: str) -> list:
    out = []
    pos = 0
    s = s.strip()
    while pos < len(s):
        m = _TOKEN.match(s, pos)
        if not m or m.end() == pos:
            break
        pos = m.end()
        num, ident, op = m.groups()
        if num is not None:
            out.append(("num", int(num)))
        elif ident is not None:
            # "2X" style implicit products are split by the regex already;
            # "Tu" is not a supported identifier
            out.append(("sym", ident))
        elif op.strip():
            if op not in "+-*/^(),":
                raise ParseError(f"unexpected character {op!r}")
            out.append(("op", op))
    return out


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokens(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None)

    def take(self, op=None):
        tok = self.peek()
        if op is not None and tok != ("op", op):
            raise ParseError(f"expected {op!r}")
        self.i += 1
        return tok

    def parse(self):
        if not self.toks:
            raise ParseError("empty expression")
        node = self.expr()
        if self.i != len(self.toks):
            raise ParseError(f"trailing input near token {self.peek()[1]!r}")
        return node

    def expr(self):
        node = self.term()
        while self.peek() in (("op", "+"), ("op", "-")):
            op = self.take()[1]
            node = ("add" if op == "+" else "sub", node, self.term())
        return node

    def term(self):
        node = self.unary()
        while True:
            tok = self.peek()
            if tok in (("op", "*"), ("op", "/")):
                self.take()
                node = ("mul" if tok[1] == "*" else "div", node, self.unary())
            elif tok[0] in ("num", "sym") or tok == ("op", "("):
                node = ("mul", node, self.power())
            else:
                return node

    def unary(self):
        tok = self.peek()
        if tok == ("op", "-"):
            self.take()
            return ("neg", self.unary())
        if tok == ("op", "+"):
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        node = self.atom()
        if self.peek() == ("op", "^"):
            self.take()
            sign = 1
            if self.peek() == ("op", "-"):
                self.take()
                sign = -1
            kind, val = self.take()
            if kind != "num":
                raise ParseError("exponent must be an integer")
            node = ("pow", node, sign * val)
        return node

    def atom(self):
        kind, val = self.take()
        if kind == "num":
            return ("num", Fraction(val))
        if kind == "sym":
            return ("sym", val)
        if (kind, val) == ("op", "("):
            node = self.expr()
            self.take(")")
            return node
        raise ParseError(f"unexpected token {val!r}")


def parse_ast(text: str):
    return _Parser(text).parse()


def _wrap(fn):
    def inner(*args):
        try:
            return fn(*args)
        except DomainError as exc:
            raise ParseError(str(exc)) from exc
    return inner


def eval_base(F, node):
    """Evaluate an expression to an element of a non-function field."""
    kind = node[0]
    if kind == "num":
        return F.coerce(node[1])
    if kind == "sym":
        return F.parse_element(node[1])
    if kind == "neg":
        return F.neg(eval_base(F, node[1]))
    if kind == "pow":
        return F.power(eval_base(F, node[1]), node[2])
    a, b = eval_base(F, node[1]), eval_base(F, node[2])
    return {"add": F.add, "sub": F.sub, "mul": F.mul, "div": F.div}[kind](a, b)


def eval_poly(coef_field, var: str, node, symbol=None):
    """Evaluate an expression to a Poly in ``var`` over ``coef_field``."""
    from .polynomials import Poly

    def rec(n):
        kind = n[0]
        if kind == "num":
            return Poly(coef_field, [coef_field.coerce(n[1])])
        if kind == "sym":
            if n[1] == var:
                return Poly.x(coef_field)
            if symbol is not None:
                return Poly(coef_field, [symbol(n[1])])
            return Poly(coef_field, [coef_field.parse_element(n[1])])
        if kind == "neg":
            return -rec(n[1])
        if kind == "pow":
            if n[2] < 0:
                raise ParseError("negative power inside a polynomial")
            return rec(n[1]) ** n[2]
        a, b = rec(n[1]), rec(n[2])
        if kind == "add":
            return a + b
        if kind == "sub":
            return a - b
        if kind == "mul":
            return a * b
        if b.degree != 0:
            raise ParseError("division by a nonconstant polynomial")
        return a.scale(coef_field.inv(b.lc))
    return rec(node)


def _to_factored(FF, node):
    from .arith_fields import check_irreducible
    kind = node[0]
    if kind in ("add", "sub", "sym") or (kind == "num"):
        f = eval_poly(FF.base, "T", node)
        if f.is_zero():
            raise ParseError("zero entry")
        if f.degree > 0 and check_irreducible(FF.base, f) is False:
            raise ParseError(f"{f.fmt()} is not irreducible over {FF.base}; supply it factored")
        return FF.from_poly(f)
    if kind == "neg":
        return FF.neg(_to_factored(FF, node[1]))
    if kind == "pow":
        return FF.power(_to_factored(FF, node[1]), node[2])
    a, b = _to_factored(FF, node[1]), _to_factored(FF, node[2])
    if kind == "mul":
        return FF.mul(a, b)
    if kind == "div":
        return FF.mul(a, FF.inv(b))
    raise ParseError(f"unsupported expression {kind}")


@_wrap
def parse_factored(FF, text: str):
    """Parse ``c * (pi1)^e1 * (pi2)^e2`` into a factored element of k(T)."""
    return _to_factored(FF, parse_ast(text))


@_wrap
def parse_element(F, text: str):
    if F.is_function_field:
        return parse_factored(F, text)
    return eval_base(F, parse_ast(text))


def split_top_level(s: str, sep: str = ",") -> list:
    parts, depth, cur = [], 0, ""
    for ch in s:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == sep and depth == 0:
            parts.append(cur)
            cur = ""
        else:
            cur += ch
    parts.append(cur)
    return parts


_FORM_RE = re.compile(r"^\s*<(.*)>\s*over\s+(\S.*?)\s*$")


def parse_form(text: str):
    """Parse ``"<1,-3,1,-3> over Q"`` into a DiagonalForm."""
    from .arith_fields import parse_field
    from .quad_forms import DiagonalForm
    m = _FORM_RE.match(text)
    if not m:
        raise ParseError(f"form literal must look like '<a,b,...> over F': {text!r}")
    F = parse_field(m.group(2))
    body = m.group(1).strip()
    entries = [] if not body else [parse_element(F, e) for e in split_top_level(body)]
    try:
        return DiagonalForm(F, entries)
    except DomainError as exc:
        raise ParseError(str(exc)) from exc


def parse_polys_ratio(text: str, coef_field, var: str = "X", symbol=None):
    """Parse ``"A / B"`` into two polynomials in ``var``."""
    if " / " in text:
        parts = text.split(" / ")
    else:
        parts = split_top_level(text, "/")
    if len(parts) != 2:
        raise ParseError("a rational map must be written 'A / B'")
    return tuple(eval_poly(coef_field, var, parse_ast(p), symbol) for p in parts)
