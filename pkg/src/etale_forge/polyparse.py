"""Parser and pretty-printer for polynomial expressions.

Grammar (LL(1), whitespace-insensitive, byte offsets in errors):

    expr    := term (('+' | '-') term)*
    term    := factor ('*' factor)*
    factor  := '-' factor | atom ('^' INT)?
    atom    := NUMBER | SYMBOL | '(' expr ')'
    NUMBER  := INT ('/' INT)?

Implicit multiplication ("2x") is rejected; rationals are written "p/q";
exponents are nonnegative integer literals.  Symbols are either declared
variables or the generator of the coefficient field ("theta", "zeta", ...).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .numfield import QQ, FieldElement, NumberField
from .polyalg import Poly


class PolyParseError(ValueError):
    """Malformed polynomial text; position is a byte offset."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (offset {position})")
        self.position = position


class UnknownSymbol(PolyParseError):
    pass


class NonIntegerExponent(PolyParseError):
    pass


@dataclass(frozen=True)
class ExprAST:
    """Expression tree node: number | symbol | add | mul | pow | neg | paren."""
    kind: str
    children: tuple = ()
    value: object = None
    position: int = 0


# -- tokenizer -------------------------------------------------------------

_OPS = set("+-*^()/")


def _tokenize(text: str):
    tokens = []
    i, n = 0, len(text)
    while i < n:
        c = text[i]
        if c.isspace():
            i += 1
            continue
        if c in _OPS:
            tokens.append((c, c, i))
            i += 1
            continue
        if c.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            tokens.append(("INT", int(text[i:j]), i))
            i = j
            continue
        if c.isalpha() or c == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(("SYM", text[i:j], i))
            i = j
            continue
        raise PolyParseError(f"unexpected character {c!r}", i)
    tokens.append(("EOF", None, n))
    return tokens


class _Parser:
    def __init__(self, tokens):
        self.tokens = tokens
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos]

    def advance(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, kind: str):
        tok = self.advance()
        if tok[0] != kind:
            raise PolyParseError(f"expected {kind!r}, found {tok[1]!r}", tok[2])
        return tok

    def parse(self) -> ExprAST:
        ast = self.expr()
        tok = self.peek()
        if tok[0] != "EOF":
            raise PolyParseError(
                f"unexpected {tok[1]!r} (implicit multiplication is not allowed)",
                tok[2])
        return ast

    def expr(self) -> ExprAST:
        node = self.term()
        while self.peek()[0] in ("+", "-"):
            op, _, pos = self.advance()
            rhs = self.term()
            if op == "-":
                rhs = ExprAST("neg", (rhs,), position=pos)
            node = ExprAST("add", (node, rhs), position=pos)
        return node

    def term(self) -> ExprAST:
        node = self.factor()
        while self.peek()[0] == "*":
            _, _, pos = self.advance()
            node = ExprAST("mul", (node, self.factor()), position=pos)
        return node

    def factor(self) -> ExprAST:
        tok = self.peek()
        if tok[0] == "-":
            self.advance()
            return ExprAST("neg", (self.factor(),), position=tok[2])
        node = self.atom()
        if self.peek()[0] == "^":
            self.advance()
            etok = self.peek()
            if etok[0] == "-":
                raise NonIntegerExponent("exponent must be nonnegative", etok[2])
            if etok[0] != "INT":
                raise PolyParseError(f"expected integer exponent, found {etok[1]!r}",
                                     etok[2])
            self.advance()
            if self.peek()[0] == "/":
                raise NonIntegerExponent("exponent must be an integer", self.peek()[2])
            node = ExprAST("pow", (node,), value=etok[1], position=etok[2])
        return node

    def atom(self) -> ExprAST:
        tok = self.advance()
        if tok[0] == "INT":
            value = Fraction(tok[1])
            if self.peek()[0] == "/":
                self.advance()
                den = self.expect("INT")
                if den[1] == 0:
                    raise PolyParseError("zero denominator", den[2])
                value = Fraction(tok[1], den[1])
            return ExprAST("number", value=value, position=tok[2])
        if tok[0] == "SYM":
            return ExprAST("symbol", value=tok[1], position=tok[2])
        if tok[0] == "(":
            inner = self.expr()
            self.expect(")")
            return ExprAST("paren", (inner,), position=tok[2])
        raise PolyParseError(f"unexpected {tok[1]!r}", tok[2])


def parse_expr(text: str) -> ExprAST:
    return _Parser(_tokenize(text)).parse()


def _ast_to_poly(ast: ExprAST, vars: tuple[str, ...], field: NumberField) -> Poly:
    kind = ast.kind
    if kind == "number":
        return Poly.constant(field.elem(ast.value), field, vars)
    if kind == "symbol":
        name = ast.value
        if name in vars:
            return Poly.variable(name, field, vars)
        if not field.is_rational and name == field.gen_name:
            return Poly.constant(field.gen(), field, vars)
        raise UnknownSymbol(f"unknown symbol {name!r}", ast.position)
    if kind == "neg":
        return -_ast_to_poly(ast.children[0], vars, field)
    if kind == "paren":
        return _ast_to_poly(ast.children[0], vars, field)
    if kind == "add":
        return (_ast_to_poly(ast.children[0], vars, field)
                + _ast_to_poly(ast.children[1], vars, field))
    if kind == "mul":
        return (_ast_to_poly(ast.children[0], vars, field)
                * _ast_to_poly(ast.children[1], vars, field))
    if kind == "pow":
        return _ast_to_poly(ast.children[0], vars, field) ** ast.value
    raise PolyParseError(f"unknown node kind {kind!r}", ast.position)


def parse_poly(text: str, vars, field: NumberField = QQ) -> Poly:
    """Parse text into an exact Poly over the given field and variables."""
    return _ast_to_poly(parse_expr(text), tuple(vars), field)


# -- printing ----------------------------------------------------------------


def _format_rational(q: Fraction) -> str:
    return str(q)


def _format_coeff_field(c: FieldElement) -> str:
    """A general field coefficient, parenthesized and re-parseable."""
    parts = []
    name = c.field.gen_name
    for e, q in enumerate(c.coords):
        if q == 0:
            continue
        mono = "" if e == 0 else (name if e == 1 else f"{name}^{e}")
        mag = abs(q)
        if mono and mag == 1:
            body = mono
        elif mono:
            body = f"{mag}*{mono}"
        else:
            body = str(mag)
        if not parts:
            parts.append(body if q > 0 else f"-{body}")
        else:
            parts.append(f" + {body}" if q > 0 else f" - {body}")
    return "(" + "".join(parts) + ")"


def _format_monomial(variables: tuple[str, ...], exps: tuple[int, ...]) -> str:
    pieces = []
    for v, e in zip(variables, exps):
        if e == 0:
            continue
        pieces.append(v if e == 1 else f"{v}^{e}")
    return "*".join(pieces)


def print_poly(p: Poly) -> str:
    """Canonical text form; parse_poly(print_poly(p)) == p.

    Terms in descending lexicographic order of the exponent vectors;
    rational coefficients contribute their sign to the term separator,
    proper field coefficients are parenthesized.
    """
    if p.is_zero():
        return "0"
    out = []
    for exps in sorted(p.terms, reverse=True):
        c = p.terms[exps]
        mono = _format_monomial(p.variables, exps)
        if c.is_rational():
            q = c.coords[0]
            mag = abs(q)
            if mono and mag == 1:
                body = mono
            elif mono:
                body = f"{mag}*{mono}"
            else:
                body = str(mag)
            negative = q < 0
        else:
            body = _format_coeff_field(c)
            if mono:
                body = f"{body}*{mono}"
            negative = False
        if not out:
            out.append(f"-{body}" if negative else body)
        else:
            out.append(f" - {body}" if negative else f" + {body}")
    return "".join(out)
