"""
CHAlg — modules/sigma_ring.py
==============================
The commutative ring S_{n,A} (or untruncated S_A): polynomials with rational
(in practice integer) coefficients in the canonical generators σ_i(p),
p a Lyndon word, optionally carrying monomials in commutative bookkeeping
parameters (t1, t2, …, u1, v1, …) used by polarization and kernel relations.

Sign convention, fixed everywhere:
    det(t − a) = t^n + Σ_{i=1}^n (−1)^i σ_i(a) t^{n−i}
so σ_i is the i-th elementary symmetric function of the eigenvalues.

normalize_sigma(i, w, trunc) reduces σ_i of an arbitrary word:
    cyclic normal form (N, j) first, then P_{i,j}, then σ_k(N) = 0 for k > n.
"""

from __future__ import annotations

import logging
import re
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Dict, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple, Union

from .config import check_cap
from .errors import EmptyWordError
from .symfun import EPoly, power_transform, truncated_power_transform
from .word_core import Word, as_word, cyclic_normalize, is_lyndon, render_word

log = logging.getLogger("CHAlg.Sigma")


# ─────────────────────────────────────────────────────────────────
# TRUNCATION
# ─────────────────────────────────────────────────────────────────
@dataclass(frozen=True)
class Truncation:
    level: Optional[int] = None      # None = unbounded (S_A)

    def __post_init__(self) -> None:
        if self.level is not None and self.level < 1:
            raise ValueError(f"Truncation level must be >= 1, got {self.level}.")

    @classmethod
    def unbounded(cls) -> "Truncation":
        return cls(None)

    @classmethod
    def at(cls, n: int) -> "Truncation":
        return cls(n)

    @property
    def bounded(self) -> bool:
        return self.level is not None

    def allows(self, i: int) -> bool:
        """False when σ_i is forced to vanish (i > n)."""
        return self.level is None or i <= self.level

    def __str__(self) -> str:
        return "unbounded" if self.level is None else f"n={self.level}"


def as_truncation(trunc: Union[Truncation, int, None]) -> Truncation:
    if isinstance(trunc, Truncation):
        return trunc
    return Truncation(trunc)


# ─────────────────────────────────────────────────────────────────
# GENERATORS AND MONOMIALS
# ─────────────────────────────────────────────────────────────────
@dataclass(frozen=True)
class SigmaGenerator:
    index: int
    word:  Word

    def __post_init__(self) -> None:
        if self.index < 1:
            raise ValueError(f"σ index must be >= 1, got {self.index}.")
        if not is_lyndon(self.word):
            raise ValueError(f"σ generator needs a Lyndon word, got {self.word}.")

    @property
    def sort_key(self):
        return (self.index, self.word.sort_key)

    @property
    def weight(self) -> int:
        return self.index * len(self.word)

    def multidegree(self) -> Dict[int, int]:
        return {v: self.index * c for v, c in self.word.multidegree().items()}

    def render(self, style: str = "ascii") -> str:
        if style == "unicode":
            return f"σ_{self.index}({render_word(self.word, 'unicode')})"
        if style == "expr":
            return f"s{self.index}({render_word(self.word)})"
        return f"s{self.index}[{render_word(self.word)}]"


ParamMono = Tuple[Tuple[str, int], ...]
SigmaMono = Tuple[Tuple[SigmaGenerator, int], ...]
TermKey   = Tuple[ParamMono, SigmaMono]
Scalar    = Union[int, Fraction]

_PARAM_RE = re.compile(r"^(\D*)(\d*)$")


def _param_key(name: str):
    m = _PARAM_RE.match(name)
    if not m:
        return (name, -1, name)
    return (m.group(1), int(m.group(2)) if m.group(2) else -1, name)


def _param_mono(items: Mapping[str, int]) -> ParamMono:
    return tuple(sorted(((k, e) for k, e in items.items() if e), key=lambda kv: _param_key(kv[0])))


def _sigma_mono(items: Mapping[SigmaGenerator, int]) -> SigmaMono:
    return tuple(sorted(((g, e) for g, e in items.items() if e), key=lambda kv: kv[0].sort_key))


def _mul_mono(a: tuple, b: tuple, builder) -> tuple:
    if not a:
        return b
    if not b:
        return a
    merged: Dict = dict(a)
    for k, e in b:
        merged[k] = merged.get(k, 0) + e
    return builder(merged)


def _term_sort_key(key: TermKey):
    params, mono = key
    return (
        tuple(_param_key(k) + (e,) for k, e in params),
        sum(g.weight * e for g, e in mono),
        tuple((g.sort_key, e) for g, e in mono),
    )


def _fmt_coeff(c: Fraction) -> Union[int, str]:
    return int(c) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


# ─────────────────────────────────────────────────────────────────
# SIGMAPOLY
# ─────────────────────────────────────────────────────────────────
class SigmaPoly:
    """
    Immutable element of S_{n,A}[params]. Terms map
    (parameter monomial, σ-monomial) -> nonzero Fraction.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Optional[Mapping[TermKey, Scalar]] = None):
        self._terms: Dict[TermKey, Fraction] = {
            k: Fraction(c) for k, c in (terms or {}).items() if c
        }
        self._hash: Optional[int] = None

    # ── constructors ──────────────────────────────────────────────
    @classmethod
    def constant(cls, c: Scalar) -> "SigmaPoly":
        return cls({((), ()): c})

    @classmethod
    def zero(cls) -> "SigmaPoly":
        return cls()

    @classmethod
    def one(cls) -> "SigmaPoly":
        return cls.constant(1)

    @classmethod
    def generator(cls, i: int, word) -> "SigmaPoly":
        return cls({((), ((SigmaGenerator(i, as_word(word)), 1),)): 1})

    @classmethod
    def param(cls, name: str, exponent: int = 1) -> "SigmaPoly":
        return cls({(((name, exponent),), ()): 1})

    @classmethod
    def param_monomial(cls, exps: Mapping[str, int], coeff: Scalar = 1) -> "SigmaPoly":
        return cls({(_param_mono(exps), ()): coeff})

    @classmethod
    def coerce(cls, value) -> "SigmaPoly":
        if isinstance(value, SigmaPoly):
            return value
        if isinstance(value, (int, Fraction)):
            return cls.constant(value)
        raise TypeError(f"Cannot use {type(value).__name__} as a SigmaPoly.")

    # ── access ────────────────────────────────────────────────────
    @property
    def terms(self) -> Mapping[TermKey, Fraction]:
        return self._terms

    def items(self) -> List[Tuple[TermKey, Fraction]]:
        """Terms in canonical order."""
        return sorted(self._terms.items(), key=lambda kv: _term_sort_key(kv[0]))

    def __iter__(self) -> Iterator[Tuple[TermKey, Fraction]]:
        return iter(self.items())

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_constant(self) -> bool:
        return all(k == ((), ()) for k in self._terms)

    def constant_value(self) -> Fraction:
        return self._terms.get(((), ()), Fraction(0))

    def has_params(self) -> bool:
        return any(p for (p, _m) in self._terms)

    def param_names(self) -> frozenset:
        return frozenset(name for (p, _m) in self._terms for name, _e in p)

    def generators(self) -> frozenset:
        return frozenset(g for (_p, m) in self._terms for g, _e in m)

    def variables(self) -> frozenset:
        return frozenset(v for g in self.generators() for v in g.word.letters)

    def word_degree(self) -> int:
        """Largest Σ index·length over the σ-monomials."""
        return max((sum(g.weight * e for g, e in m) for (_p, m) in self._terms), default=0)

    def weights(self) -> set:
        return {sum(g.weight * e for g, e in m) for (_p, m) in self._terms}

    def multidegrees(self) -> set:
        out = set()
        for (_p, m) in self._terms:
            deg: Dict[int, int] = defaultdict(int)
            for g, e in m:
                for v, c in g.multidegree().items():
                    deg[v] += c * e
            out.add(tuple(sorted(deg.items())))
        return out

    def is_homogeneous(self) -> bool:
        return len(self.weights()) <= 1 and len(self.multidegrees()) <= 1

    # ── arithmetic ────────────────────────────────────────────────
    def __add__(self, other) -> "SigmaPoly":
        if not isinstance(other, (int, Fraction, SigmaPoly)):
            return NotImplemented
        other = SigmaPoly.coerce(other)
        out: Dict[TermKey, Fraction] = dict(self._terms)
        for k, c in other._terms.items():
            out[k] = out.get(k, 0) + c
        return SigmaPoly(out)

    __radd__ = __add__

    def __neg__(self) -> "SigmaPoly":
        return SigmaPoly({k: -c for k, c in self._terms.items()})

    def __sub__(self, other) -> "SigmaPoly":
        return self + (-SigmaPoly.coerce(other))

    def __rsub__(self, other) -> "SigmaPoly":
        return SigmaPoly.coerce(other) - self

    def __mul__(self, other) -> "SigmaPoly":
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, SigmaPoly):
            return NotImplemented
        out: Dict[TermKey, Fraction] = defaultdict(Fraction)
        for (pa, ma), ca in self._terms.items():
            for (pb, mb), cb in other._terms.items():
                key = (_mul_mono(pa, pb, _param_mono), _mul_mono(ma, mb, _sigma_mono))
                out[key] += ca * cb
        return SigmaPoly(out)

    __rmul__ = __mul__

    def scale(self, c: Scalar) -> "SigmaPoly":
        return SigmaPoly({k: v * c for k, v in self._terms.items()})

    def __pow__(self, exponent: int) -> "SigmaPoly":
        if exponent < 0:
            raise ValueError("Negative power of a SigmaPoly.")
        result = SigmaPoly.one()
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            exponent >>= 1
            if exponent:
                base = base * base
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = SigmaPoly.constant(other)
        if not isinstance(other, SigmaPoly):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    # ── parameters ────────────────────────────────────────────────
    def coefficient_extract(self, exps: Union[Mapping[str, int], Sequence[int]],
                            prefix: str = "t") -> "SigmaPoly":
        """
        Coefficient of one exact parameter monomial. A sequence (1, 1) means
        t1^1 t2^1; absent coefficient -> zero.
        """
        if not isinstance(exps, Mapping):
            exps = {f"{prefix}{k}": e for k, e in enumerate(exps, start=1)}
        wanted = _param_mono(exps)
        return SigmaPoly({((), m): c for (p, m), c in self._terms.items() if p == wanted})

    def by_params(self) -> Dict[ParamMono, "SigmaPoly"]:
        """Split into {parameter monomial: σ-coefficient}."""
        groups: Dict[ParamMono, Dict[TermKey, Fraction]] = defaultdict(dict)
        for (p, m), c in self._terms.items():
            groups[p][((), m)] = c
        return {p: SigmaPoly(t) for p, t in
                sorted(groups.items(), key=lambda kv: tuple(_param_key(k) + (e,) for k, e in kv[0]))}

    def substitute_params(self, images: Mapping[str, object]) -> "SigmaPoly":
        """Replace parameters by SigmaPoly (or scalar) values; others stay."""
        cache: Dict[Tuple[str, int], SigmaPoly] = {}

        def power(name: str, e: int) -> SigmaPoly:
            if (name, e) not in cache:
                cache[(name, e)] = SigmaPoly.coerce(images[name]) ** e
            return cache[(name, e)]

        out = SigmaPoly()
        for (p, m), c in self._terms.items():
            kept = tuple((k, e) for k, e in p if k not in images)
            term = SigmaPoly({(kept, m): c})
            for k, e in p:
                if k in images:
                    term = term * power(k, e)
            out = out + term
        return out

    def substitute_generators(self, images) -> "SigmaPoly":
        """images(generator) -> SigmaPoly; used by T-substitutions."""
        cache: Dict[SigmaGenerator, SigmaPoly] = {}
        out = SigmaPoly()
        for (p, m), c in self._terms.items():
            term = SigmaPoly({(p, ()): c})
            for g, e in m:
                if g not in cache:
                    cache[g] = SigmaPoly.coerce(images(g))
                term = term * (cache[g] ** e)
            out = out + term
        return out

    # ── text / json ───────────────────────────────────────────────
    def render(self, style: str = "ascii") -> str:
        """
        style: ascii   "2*t1*s1[a]*s2[ab]"
               unicode "2·t1·σ_1(a)·σ_2(ab)"
               expr    "2s1(a)s2(ab)"  (reparseable, parameter-free only)
        """
        if not self._terms:
            return "0"
        if style == "expr" and self.has_params():
            raise ValueError("Parameter monomials have no expression syntax.")
        joiner = {"ascii": "*", "unicode": "·", "expr": ""}[style]
        pieces: List[Tuple[str, str]] = []
        for (p, m), c in self.items():
            factors: List[str] = []
            for name, e in p:
                factors.append(name if e == 1 else f"{name}^{e}")
            for g, e in m:
                token = g.render(style)
                if e == 1:
                    factors.append(token)
                elif style == "expr":
                    factors.extend([token] * e)
                else:
                    factors.append(f"{token}^{e}")
            mag = abs(c)
            mag_txt = str(mag)
            if not factors:
                body = mag_txt
            elif mag == 1:
                body = joiner.join(factors)
            else:
                body = mag_txt + joiner + joiner.join(factors)
            pieces.append(("-" if c < 0 else "+", body))
        sign0, first = pieces[0]
        text = ("-" if sign0 == "-" else "") + first
        for sign, body in pieces[1:]:
            text += f" {sign} {body}"
        return text

    def __str__(self) -> str:
        return self.render()

    def __repr__(self) -> str:
        return f"SigmaPoly({self.render()})"

    def to_json(self) -> list:
        out = []
        for (p, m), c in self.items():
            gens = []
            for g, e in m:
                gens.extend({"i": g.index, "word": list(g.word.letters)} for _ in range(e))
            out.append({"coeff": _fmt_coeff(c), "tvars": dict(p), "generators": gens})
        return out


def sum_polys(polys: Iterable[SigmaPoly]) -> SigmaPoly:
    out: Dict[TermKey, Fraction] = defaultdict(Fraction)
    for p in polys:
        for k, c in p.terms.items():
            out[k] += c
    return SigmaPoly(out)


# ─────────────────────────────────────────────────────────────────
# NORMALIZATION
# ─────────────────────────────────────────────────────────────────
def _substitute_epoly(p: EPoly, root: Word) -> SigmaPoly:
    """e_k -> σ_k(root)."""
    terms: Dict[TermKey, Fraction] = {}
    for exps, c in p.terms.items():
        mono = _sigma_mono({SigmaGenerator(k, root): a
                            for k, a in enumerate(exps, start=1) if a})
        terms[((), mono)] = Fraction(c)
    return SigmaPoly(terms)


@lru_cache(maxsize=1 << 15)
def _normalize_cached(i: int, w: Word, level: Optional[int]) -> SigmaPoly:
    if not w:
        if level is None:
            raise EmptyWordError("σ_i(1) is only defined at a bounded truncation level.")
        return SigmaPoly.constant(comb(level, i))
    form = cyclic_normalize(w)
    if form.exponent == 1:
        if level is not None and i > level:
            return SigmaPoly()
        return SigmaPoly.generator(i, form.root)
    if level is None:
        reduction = power_transform(i, form.exponent)
    else:
        reduction = truncated_power_transform(i, form.exponent, level)
    return _substitute_epoly(reduction, form.root)


def normalize_sigma(i: int, w, trunc: Union[Truncation, int, None] = None) -> SigmaPoly:
    """σ_i(w) in canonical generators, at the given truncation."""
    if i < 1:
        raise ValueError(f"σ index must be >= 1, got {i}.")
    w, level = as_word(w), as_truncation(trunc).level
    if w and level is None:
        j = cyclic_normalize(w).exponent
        if j > 1:
            check_cap("MAX_PIJ_WEIGHT", "P_{i,j} weight i·j", i * j)
    return _normalize_cached(i, w, level)
