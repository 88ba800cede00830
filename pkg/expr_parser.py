"""
expr_parser.py — CHAlg σ-expression parser.

Owns everything related to reading expressions typed on the command line:
  - tokenizer (positions kept for error carets)
  - AST dataclasses
  - parse()     text -> AST, recursive descent
  - render()    AST -> text that reparses to the same AST
  - evaluate()  AST -> NCPoly at a given truncation level

Grammar:
    expr    := sign* term (sign+ term)*       "a + -b" == "a - b"
    term    := factor+                       juxtaposition = product
    factor  := VAR | "(" expr ")" | scalar
    scalar  := "s" INT "(" expr ")" | "ch" INT "(" expr ")" | INT ("/" INT)?
    VAR     := a–z | "x" INT

"s2(" and "ch3(" are keywords only when written without spaces; "s 2(ab)"
is the variable s times 2(ab).
"""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Tuple, Union

from modules.errors import ExprSyntaxError
from modules.free_sigma import NCPoly, ch_polynomial, sigma_of
from modules.sigma_ring import Truncation, as_truncation
from modules.word_core import variable_name

log = logging.getLogger("CHAlg.Parser")

_ALPHABET = "abcdefghijklmnopqrstuvwxyz"


# ─────────────────────────────────────────────────────────────────
# AST
# ─────────────────────────────────────────────────────────────────
@dataclass(frozen=True)
class Num:
    value: Fraction


@dataclass(frozen=True)
class Var:
    index: int


@dataclass(frozen=True)
class Group:
    body: "Sum"


@dataclass(frozen=True)
class Sigma:
    index: int
    arg:   "Sum"
    pos:   int = field(default=-1, compare=False)


@dataclass(frozen=True)
class CH:
    degree: int
    arg:    "Sum"
    pos:    int = field(default=-1, compare=False)


Factor = Union[Num, Var, Group, Sigma, CH]


@dataclass(frozen=True)
class Product:
    factors: Tuple[Factor, ...]


@dataclass(frozen=True)
class Sum:
    terms: Tuple[Tuple[int, Product], ...]        # (sign ±1, product)


ExprAST = Sum


# ─────────────────────────────────────────────────────────────────
# TOKENIZER
# ─────────────────────────────────────────────────────────────────
@dataclass(frozen=True)
class Token:
    kind:  str          # SIGMA CH VAR INT OP LPAREN RPAREN SLASH END
    value: object
    pos:   int


_TOKEN_SPEC = [
    ("SIGMA",  r"s(\d+)\("),
    ("CH",     r"ch(\d+)\("),
    ("XVAR",   r"x(\d+)"),
    ("VAR",    r"[a-z]"),
    ("INT",    r"\d+"),
    ("OP",     r"[+\-]"),
    ("LPAREN", r"\("),
    ("RPAREN", r"\)"),
    ("SLASH",  r"/"),
    ("SKIP",   r"\s+"),
]
_TOKEN_RE = re.compile("|".join(f"(?P<{name}>{pat})" for name, pat in _TOKEN_SPEC))


def tokenize(text: str) -> List[Token]:
    tokens: List[Token] = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise ExprSyntaxError(f"Unexpected character {text[pos]!r}", pos, text)
        kind = m.lastgroup
        if kind == "SIGMA":
            tokens.append(Token("SIGMA", int(m.group(2)), pos))
        elif kind == "CH":
            tokens.append(Token("CH", int(m.group(4)), pos))
        elif kind == "XVAR":
            tokens.append(Token("VAR", int(m.group(6)), pos))
        elif kind == "VAR":
            tokens.append(Token("VAR", _ALPHABET.index(m.group(0)), pos))
        elif kind == "INT":
            tokens.append(Token("INT", int(m.group(0)), pos))
        elif kind != "SKIP":
            tokens.append(Token(kind, m.group(0), pos))
        pos = m.end()
    tokens.append(Token("END", None, len(text)))
    return tokens


# ─────────────────────────────────────────────────────────────────
# PARSER
# ─────────────────────────────────────────────────────────────────
_FACTOR_START = {"SIGMA", "CH", "VAR", "INT", "LPAREN"}


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = tokenize(text)
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def _error(self, message: str, tok: Optional[Token] = None) -> ExprSyntaxError:
        tok = tok or self.tok
        return ExprSyntaxError(message, tok.pos, self.text)

    def _advance(self) -> Token:
        tok = self.tok
        self.i += 1
        return tok

    def _expect(self, kind: str, what: str) -> Token:
        if self.tok.kind != kind:
            found = "end of input" if self.tok.kind == "END" else repr(self.tok.value)
            raise self._error(f"Expected {what}, found {found}")
        return self._advance()

    def parse(self) -> Sum:
        if self.tok.kind == "END":
            raise self._error("Empty expression")
        expr = self.expr()
        if self.tok.kind != "END":
            raise self._error(f"Unexpected {self.tok.value!r}")
        return expr

    def _signs(self) -> int:
        sign = 1
        while self.tok.kind == "OP":
            if self._advance().value == "-":
                sign = -sign
        return sign

    def expr(self) -> Sum:
        terms = [(self._signs(), self.term())]
        while self.tok.kind == "OP":
            terms.append((self._signs(), self.term()))
        return Sum(tuple(terms))

    def term(self) -> Product:
        if self.tok.kind not in _FACTOR_START:
            found = "end of input" if self.tok.kind == "END" else repr(self.tok.value)
            raise self._error(f"Expected a term, found {found}")
        factors: List[Factor] = []
        while self.tok.kind in _FACTOR_START:
            factors.append(self.factor())
        return Product(tuple(factors))

    def factor(self) -> Factor:
        tok = self._advance()
        if tok.kind == "VAR":
            return Var(tok.value)
        if tok.kind == "INT":
            if self.tok.kind == "SLASH":
                self._advance()
                den = self._expect("INT", "a denominator")
                if den.value == 0:
                    raise self._error("Zero denominator", den)
                return Num(Fraction(tok.value, den.value))
            return Num(Fraction(tok.value))
        if tok.kind == "LPAREN":
            body = self.expr()
            self._expect("RPAREN", "')'")
            return Group(body)
        if tok.kind in ("SIGMA", "CH"):
            if tok.value < 1:
                name = "σ index" if tok.kind == "SIGMA" else "ch degree"
                raise self._error(f"{name} must be >= 1, got {tok.value}", tok)
            arg = self.expr()
            self._expect("RPAREN", "')'")
            if tok.kind == "SIGMA":
                return Sigma(tok.value, arg, tok.pos)
            return CH(tok.value, arg, tok.pos)
        raise self._error(f"Unexpected {tok.value!r}", tok)


def parse(text: str) -> ExprAST:
    """Text -> AST. Raises ExprSyntaxError with the offending position."""
    ast = _Parser(text).parse()
    log.debug("Parsed %r", text)
    return ast


# ─────────────────────────────────────────────────────────────────
# RENDER
# ─────────────────────────────────────────────────────────────────
def _render_factor(f: Factor) -> str:
    if isinstance(f, Var):
        return variable_name(f.index)
    if isinstance(f, Num):
        v = f.value
        return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"
    if isinstance(f, Group):
        return f"({render(f.body)})"
    if isinstance(f, Sigma):
        return f"s{f.index}({render(f.arg)})"
    return f"ch{f.degree}({render(f.arg)})"


def _render_product(p: Product) -> str:
    out = ""
    for f in p.factors:
        piece = _render_factor(f)
        # keep "x" + digits, "s"/"ch" + digits and adjacent numbers apart
        if out and piece[0].isdigit():
            out += " "
        out += piece
    return out


def render(ast: ExprAST) -> str:
    parts = []
    for k, (sign, product) in enumerate(ast.terms):
        body = _render_product(product)
        if k == 0:
            parts.append(f"-{body}" if sign < 0 else body)
        else:
            parts.append(f" {'-' if sign < 0 else '+'} {body}")
    return "".join(parts)


# ─────────────────────────────────────────────────────────────────
# EVALUATE
# ─────────────────────────────────────────────────────────────────
def _has_sigma(f: NCPoly) -> bool:
    return any(not c.is_constant() for _, c in f.items())


def evaluate(ast: Union[ExprAST, Factor, Product],
             trunc: Union[Truncation, int, None] = None) -> NCPoly:
    """AST -> NCPoly; σ and CH are computed at the given truncation level."""
    trunc = as_truncation(trunc)
    if isinstance(ast, Sum):
        out = NCPoly()
        for sign, product in ast.terms:
            value = evaluate(product, trunc)
            out = out + value if sign > 0 else out - value
        return out
    if isinstance(ast, Product):
        out = NCPoly.one()
        for f in ast.factors:
            out = out * evaluate(f, trunc)
        return out
    if isinstance(ast, Num):
        return NCPoly.scalar(ast.value)
    if isinstance(ast, Var):
        return NCPoly.var(ast.index)
    if isinstance(ast, Group):
        return evaluate(ast.body, trunc)
    if isinstance(ast, Sigma):
        inner = evaluate(ast.arg, trunc)
        if len(inner) > 1 and _has_sigma(inner):
            raise ExprSyntaxError(
                f"s{ast.index}(…) of a sum containing σ-terms is not supported; "
                f"only a scalar times a word may carry σ inside σ",
                ast.pos,
            )
        return NCPoly.scalar(sigma_of(ast.index, inner, trunc))
    if isinstance(ast, CH):
        level = trunc if trunc.level is not None else Truncation.at(ast.degree)
        return ch_polynomial(ast.degree, evaluate(ast.arg, level), level)
    raise TypeError(f"Not an expression node: {ast!r}")


def parse_and_evaluate(text: str, n: Optional[int] = None) -> NCPoly:
    try:
        return evaluate(parse(text), n)
    except ExprSyntaxError as e:
        e.text = e.text or text
        raise
