"""
CHAlg — modules/symfun.py
==========================
Symmetric-function kernel: the universal power-reduction polynomials

    e_i(x_1^j, …, x_N^j) = P_{i,j}(e_1, …, e_{i·j})      (N >= i·j)

in the elementary basis, plus truncation e_k = 0 for k > n.

P_{i,j} is computed by expanding e_i of j-th powers in exactly i·j
variables (sympy ring over ZZ, lex order) and peeling off lex-leading
monomials: a leading monomial x^α (α non-increasing) is the leading
monomial of e_1^{α1−α2} e_2^{α2−α3} … e_N^{αN}.

Universal results are cached per (i, j); truncation is always applied to a
cached universal polynomial, never stored in that cache.
"""

from __future__ import annotations

import logging
from collections import defaultdict
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from sympy import ZZ
from sympy.polys.orderings import lex
from sympy.polys.rings import ring

from .config import Config, check_cap

log = logging.getLogger("CHAlg.SymFun")

Exponents = Tuple[int, ...]      # exponent of e_1, e_2, … (no trailing zeros)


def _strip(exps: Iterable[int]) -> Exponents:
    out = list(exps)
    while out and out[-1] == 0:
        out.pop()
    return tuple(out)


# ─────────────────────────────────────────────────────────────────
# EPOLY
# ─────────────────────────────────────────────────────────────────
class EPoly:
    """Integer polynomial in e_1, e_2, …; terms keyed by exponent vectors."""

    __slots__ = ("terms",)

    def __init__(self, terms: Optional[Mapping[Iterable[int], int]] = None):
        clean: Dict[Exponents, int] = defaultdict(int)
        for exps, c in (terms or {}).items():
            clean[_strip(exps)] += int(c)
        self.terms: Dict[Exponents, int] = {k: v for k, v in clean.items() if v}

    @classmethod
    def generator(cls, k: int) -> "EPoly":
        return cls({(0,) * (k - 1) + (1,): 1})

    @staticmethod
    def weight_of(exps: Exponents) -> int:
        return sum((k + 1) * a for k, a in enumerate(exps))

    def weights(self) -> set:
        return {self.weight_of(e) for e in self.terms}

    def is_homogeneous(self, weight: Optional[int] = None) -> bool:
        w = self.weights()
        if not w:
            return True
        return len(w) == 1 and (weight is None or w == {weight})

    def max_index(self) -> int:
        return max((len(e) for e in self.terms), default=0)

    def evaluate(self, e_values: Sequence) -> Fraction:
        """e_values[k-1] is the value of e_k; indices past the end count as 0."""
        total = Fraction(0)
        for exps, c in self.terms.items():
            term = Fraction(c)
            for k, a in enumerate(exps):
                if not a:
                    continue
                val = e_values[k] if k < len(e_values) else 0
                term *= Fraction(val) ** a
                if not term:
                    break
            total += term
        return total

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        return isinstance(other, EPoly) and self.terms == other.terms

    def __hash__(self) -> int:
        return hash(frozenset(self.terms.items()))

    def sorted_terms(self) -> List[Tuple[Exponents, int]]:
        # reverse lex on exponents: e_1^2 before e_1e_3 before e_4
        return sorted(self.terms.items(), key=lambda kv: kv[0], reverse=True)

    def render(self) -> str:
        if not self.terms:
            return "0"
        out = []
        for exps, c in self.sorted_terms():
            factors = []
            for k, a in enumerate(exps):
                if a == 1:
                    factors.append(f"e{k + 1}")
                elif a:
                    factors.append(f"e{k + 1}^{a}")
            body = "*".join(factors)
            mag = abs(c)
            if not body:
                piece = str(mag)
            elif mag == 1:
                piece = body
            else:
                piece = f"{mag}*{body}"
            sign = "-" if c < 0 else "+"
            out.append((sign, piece))
        first_sign, first = out[0]
        text = ("-" if first_sign == "-" else "") + first
        for sign, piece in out[1:]:
            text += f" {sign} {piece}"
        return text

    def __repr__(self) -> str:
        return f"EPoly({self.render()})"

    def to_json(self) -> list:
        return [{"coeff": c, "exponents": list(e)} for e, c in self.sorted_terms()]


# ─────────────────────────────────────────────────────────────────
# ELEMENTARY SYMMETRIC FUNCTIONS
# ─────────────────────────────────────────────────────────────────
def _elementary(values: Sequence, one, zero) -> List:
    """[e_0, e_1, …, e_N] via ∏(1 + x_k T)."""
    e = [one] + [zero] * len(values)
    for count, x in enumerate(values, start=1):
        for k in range(count, 0, -1):
            e[k] = e[k] + e[k - 1] * x
    return e


def elementary_from_roots(values: Sequence) -> List[Fraction]:
    """e_1 … e_N of the given values: ∏(t − x_i) = t^N − e_1 t^{N−1} + …"""
    vals = [Fraction(v) for v in values]
    return _elementary(vals, Fraction(1), Fraction(0))[1:]


def power_transform_in(i: int, j: int, nvars: int) -> EPoly:
    """e_i(x_1^j, …, x_nvars^j) rewritten in e_1 … e_nvars."""
    if i < 1 or j < 1:
        raise ValueError("power_transform needs i >= 1 and j >= 1.")
    if nvars < i:
        return EPoly()
    R, *xs = ring([f"x{k}" for k in range(nvars)], ZZ, lex)
    es = _elementary(xs, R.one, R.zero)
    target = _elementary([x ** j for x in xs], R.one, R.zero)[i]

    powers: Dict[Tuple[int, int], object] = {}

    def e_power(k: int, a: int):
        key = (k, a)
        if key not in powers:
            powers[key] = es[k] ** a
        return powers[key]

    result: Dict[Exponents, int] = {}
    remainder = target
    while remainder:
        monom, coeff = remainder.LT
        exps = tuple(monom[k] - monom[k + 1] for k in range(nvars - 1)) + (monom[-1],)
        product = R.one
        for k, a in enumerate(exps, start=1):
            if a:
                product *= e_power(k, a)
        remainder -= coeff * product
        result[exps] = int(coeff)
    return EPoly(result)


def power_transform(i: int, j: int) -> EPoly:
    """Universal P_{i,j}, computed in exactly i·j variables."""
    check_cap("MAX_PIJ_WEIGHT", "P_{i,j} weight i·j", i * j)
    return _power_transform(i, j)


@lru_cache(maxsize=None)
def _power_transform(i: int, j: int) -> EPoly:
    p = power_transform_in(i, j, i * j)
    log.info("P_{%d,%d} computed: %d terms", i, j, len(p.terms))
    return p


def truncate_epoly(p: EPoly, n: int) -> EPoly:
    """Drop every term containing some e_k with k > n."""
    return EPoly({e: c for e, c in p.terms.items() if len(e) <= n})


@lru_cache(maxsize=None)
def truncated_power_transform(i: int, j: int, n: int) -> EPoly:
    """
    P_{i,j}(e_1, …, e_n, 0, …). Within the universal cap this is the
    truncated universal polynomial; beyond it the same polynomial is obtained
    by rewriting in exactly n variables.
    """
    if i > n:
        return EPoly()
    if i * j <= Config.MAX_PIJ_WEIGHT:
        return truncate_epoly(power_transform(i, j), n)
    log.info("P_{%d,%d} above the universal cap; rewriting in %d variables", i, j, n)
    return power_transform_in(i, j, n)
