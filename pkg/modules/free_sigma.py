"""
CHAlg — modules/free_sigma.py
==============================
The free Σ-algebra F⟨X⟩ ⊗ S and its algorithms:

  amitsur_expand   σ_m(Σ t_i M_i) over Lyndon words of the slot alphabet
  polarize         one multidegree component σ_{m; a_1, …}
  sigma_of         σ_i of an arbitrary NCPoly
  ch_polynomial    formal Cayley–Hamilton polynomial CH_n(f)
  t_substitute     substitution endomorphisms (T-ideal closure)
  kernel_relations the φ_{h,k} with σ_n(fg) − σ_n(f)σ_n(g) = Σ u^h v^k φ_{h,k}

Amitsur's formula, for slots t_1 M_1, …, t_k M_k over letters y_1 < … < y_k:

    σ_m(Σ t_i y_i) = Σ (−1)^{m − Σ j_r} t^{Σ j_r ν(p_r)} σ_{j_1}(p_1) ⋯ σ_{j_k}(p_k)

summed over strictly increasing Lyndon words p_1 < … < p_r and positive j_r
with Σ j_r ℓ(p_r) = m. Each σ_j(p) is then renormalized after substituting
the slot monomials, since a primitive word in monomials need not stay
primitive.
"""

from __future__ import annotations

import logging
from collections import Counter, defaultdict
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Sequence, Tuple, Union

from .config import check_cap
from .errors import EmptyWordError, SubstitutionError
from .sigma_ring import (
    ParamMono, SigmaPoly, Truncation, _param_mono, as_truncation, normalize_sigma, sum_polys,
)
from .word_core import EMPTY, Word, as_word, lyndon_words, lyndon_words_within, render_word

log = logging.getLogger("CHAlg.FreeSigma")

_INTERNAL_PREFIX = "$"


# ─────────────────────────────────────────────────────────────────
# NCPOLY
# ─────────────────────────────────────────────────────────────────
class NCPoly:
    """Immutable Σ_w c_w · w with SigmaPoly coefficients c_w (central)."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Optional[Mapping[Word, object]] = None):
        clean: Dict[Word, SigmaPoly] = {}
        for w, c in (terms or {}).items():
            c = SigmaPoly.coerce(c)
            if c:
                clean[as_word(w)] = c
        self._terms = clean

    @classmethod
    def var(cls, v: int) -> "NCPoly":
        return cls({Word((v,)): 1})

    @classmethod
    def monomial(cls, w, coeff=1) -> "NCPoly":
        return cls({as_word(w): coeff})

    @classmethod
    def scalar(cls, c) -> "NCPoly":
        return cls({EMPTY: c})

    @classmethod
    def one(cls) -> "NCPoly":
        return cls.scalar(1)

    @classmethod
    def coerce(cls, value) -> "NCPoly":
        if isinstance(value, NCPoly):
            return value
        return cls.scalar(value)

    # ── access ────────────────────────────────────────────────────
    @property
    def terms(self) -> Mapping[Word, SigmaPoly]:
        return self._terms

    def items(self) -> List[Tuple[Word, SigmaPoly]]:
        return sorted(self._terms.items(), key=lambda kv: kv[0].sort_key)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def constant_term(self) -> SigmaPoly:
        return self._terms.get(EMPTY, SigmaPoly())

    def is_scalar(self) -> bool:
        return all(not w for w in self._terms)

    def variables(self) -> frozenset:
        out = set()
        for w, c in self._terms.items():
            out.update(w.letters)
            out.update(c.variables())
        return frozenset(out)

    def param_names(self) -> frozenset:
        return frozenset(n for c in self._terms.values() for n in c.param_names())

    def degree(self) -> int:
        """Largest word length plus σ-weight over all terms."""
        return max((len(w) + c.word_degree() for w, c in self._terms.items()), default=0)

    # ── arithmetic ────────────────────────────────────────────────
    def __add__(self, other) -> "NCPoly":
        other = NCPoly.coerce(other)
        out: Dict[Word, SigmaPoly] = dict(self._terms)
        for w, c in other._terms.items():
            out[w] = out[w] + c if w in out else c
        return NCPoly(out)

    __radd__ = __add__

    def __neg__(self) -> "NCPoly":
        return NCPoly({w: -c for w, c in self._terms.items()})

    def __sub__(self, other) -> "NCPoly":
        return self + (-NCPoly.coerce(other))

    def __rsub__(self, other) -> "NCPoly":
        return NCPoly.coerce(other) - self

    def __mul__(self, other) -> "NCPoly":
        if isinstance(other, (int, Fraction, SigmaPoly)):
            return NCPoly({w: c * other for w, c in self._terms.items()})
        other = NCPoly.coerce(other)
        out: Dict[Word, List[SigmaPoly]] = defaultdict(list)
        for wa, ca in self._terms.items():
            for wb, cb in other._terms.items():
                out[wa + wb].append(ca * cb)
        return NCPoly({w: sum_polys(cs) for w, cs in out.items()})

    def __rmul__(self, other) -> "NCPoly":
        # scalars and σ-coefficients are central
        if isinstance(other, (int, Fraction, SigmaPoly)):
            return self * other
        return NCPoly.coerce(other) * self

    def __pow__(self, exponent: int) -> "NCPoly":
        if exponent < 0:
            raise ValueError("Negative power of an NCPoly.")
        result = NCPoly.one()
        for _ in range(exponent):
            result = result * self
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction, SigmaPoly)):
            other = NCPoly.scalar(other)
        if not isinstance(other, NCPoly):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        return hash(frozenset(self._terms.items()))

    # ── text / json ───────────────────────────────────────────────
    def render(self, style: str = "ascii") -> str:
        if not self._terms:
            return "0"
        word_style = "unicode" if style == "unicode" else "plain"
        joiner = "" if style == "expr" else ("·" if style == "unicode" else "*")
        pieces = []
        for w, c in self.items():
            coeff_txt = c.render(style)
            if not w:
                pieces.append(coeff_txt if len(c) == 1 else f"({coeff_txt})")
                continue
            word_txt = render_word(w, word_style)
            if c == 1:
                pieces.append(word_txt)
            elif c == -1:
                pieces.append(f"-{word_txt}")
            elif len(c) == 1:
                pieces.append(f"{coeff_txt}{joiner}{word_txt}")
            else:
                pieces.append(f"({coeff_txt}){joiner}{word_txt}")
        text = pieces[0]
        for p in pieces[1:]:
            text += f" - {p[1:]}" if p.startswith("-") else f" + {p}"
        return text

    def __str__(self) -> str:
        return self.render()

    def __repr__(self) -> str:
        return f"NCPoly({self.render()})"

    def to_json(self) -> list:
        return [{"word": list(w.letters), "coeff": c.to_json()} for w, c in self.items()]


# ─────────────────────────────────────────────────────────────────
# SLOTS
# ─────────────────────────────────────────────────────────────────
@dataclass(frozen=True)
class Slot:
    """
    One summand t_{param_index} · extra · monomial of the linear combination
    fed to Amitsur's formula. param_index None means no t parameter.
    """
    param_index: Optional[int]
    monomial:    Word
    extra:       ParamMono = ()
    prefix:      str = "t"

    @property
    def param_name(self) -> Optional[str]:
        return None if self.param_index is None else f"{self.prefix}{self.param_index}"

    @classmethod
    def parse_list(cls, text: str) -> List["Slot"]:
        """'t1:a,t2:b,t3:ba' (or 'a,b,ba', numbered in order)."""
        slots: List[Slot] = []
        for pos, chunk in enumerate(c.strip() for c in text.split(",") if c.strip()):
            name, _, word = chunk.rpartition(":")
            index = pos + 1
            if name:
                digits = name.lstrip("t")
                if not name.startswith("t") or not digits.isdigit():
                    raise SubstitutionError(f"Bad slot parameter {name!r}; expected t<k>.")
                index = int(digits)
            slots.append(cls(index, Word.parse(word)))
        return slots


def _check_slots(m: int, slots: Sequence[Slot], trunc: Truncation) -> None:
    if m < 1:
        raise ValueError(f"Amitsur degree must be >= 1, got {m}.")
    if not slots:
        raise ValueError("Amitsur expansion needs at least one slot.")
    check_cap("MAX_DEGREE", "Amitsur degree m", m)
    check_cap("MAX_SLOTS", "slot count", len(slots))
    if not trunc.bounded and any(not s.monomial for s in slots):
        raise EmptyWordError("Empty slot monomials need a bounded truncation level.")


@dataclass
class _LyndonFactor:
    length:  int
    nu:      Tuple[int, ...]            # occurrences of each slot letter
    word:    Word                       # slot monomials substituted


def _prepare(m: int, slots: Sequence[Slot],
             budget: Optional[Sequence[int]]) -> List[_LyndonFactor]:
    k = len(slots)
    out: List[_LyndonFactor] = []
    words = lyndon_words(k, m) if budget is None else lyndon_words_within(k, m, budget)
    for p in words:
        counts = Counter(p.letters)
        nu = tuple(counts.get(s, 0) for s in range(k))
        word = Word(tuple(v for s in p.letters for v in slots[s].monomial.letters))
        out.append(_LyndonFactor(len(p), nu, word))
    return out


def amitsur_expand(m: int, slots: Sequence[Slot],
                   trunc: Union[Truncation, int, None] = None,
                   budget: Optional[Sequence[int]] = None) -> SigmaPoly:
    """
    σ_m(Σ t_i M_i) as a SigmaPoly in the slot parameters.

    budget, when given, keeps only terms whose slot multidegree is exactly
    that vector (used by polarize to prune the enumeration).
    """
    trunc = as_truncation(trunc)
    _check_slots(m, slots, trunc)
    if budget is not None:
        budget = tuple(budget)
        if len(budget) != len(slots) or sum(budget) != m or min(budget) < 0:
            return SigmaPoly()

    factors = _prepare(m, slots, budget)
    k = len(slots)
    collected: List[SigmaPoly] = []

    def leaf(picks: List[Tuple[int, int]], product: SigmaPoly) -> None:
        total_j = sum(j for _idx, j in picks)
        exps = [0] * k
        for idx, j in picks:
            for s, a in enumerate(factors[idx].nu):
                exps[s] += j * a
        params: Dict[str, int] = defaultdict(int)
        for s, e in enumerate(exps):
            if not e:
                continue
            slot = slots[s]
            if slot.param_name:
                params[slot.param_name] += e
            for name, a in slot.extra:
                params[name] += a * e
        sign = -1 if (m - total_j) % 2 else 1
        collected.append(product * SigmaPoly.param_monomial(params, sign))

    def walk(start: int, remaining: int, left: Optional[List[int]],
             picks: List[Tuple[int, int]], product: SigmaPoly) -> None:
        if remaining == 0:
            leaf(picks, product)
            return
        for idx in range(start, len(factors)):
            fac = factors[idx]
            if fac.length > remaining:
                break
            for j in range(1, remaining // fac.length + 1):
                if not trunc.allows(j):
                    break
                if left is not None and any(j * a > b for a, b in zip(fac.nu, left)):
                    break
                sigma = normalize_sigma(j, fac.word, trunc)
                if not sigma:
                    continue
                nxt_left = None if left is None else [b - j * a for a, b in zip(fac.nu, left)]
                walk(idx + 1, remaining - j * fac.length, nxt_left,
                     picks + [(idx, j)], product * sigma)

    walk(0, m, list(budget) if budget is not None else None, [], SigmaPoly.one())
    result = sum_polys(collected)
    log.info("Amitsur σ_%d over %d slots (%s): %d products, %d terms",
             m, len(slots), trunc, len(collected), len(result))
    return result


def polarize(m: int, slots: Sequence[Slot], trunc: Union[Truncation, int, None],
             multi_index: Sequence[int]) -> SigmaPoly:
    """Coefficient of ∏ t_i^{a_i} in σ_m(Σ t_i M_i), i.e. σ_{m; a_1, …}."""
    if len(multi_index) != len(slots):
        raise ValueError("multi_index needs one exponent per slot.")
    if any(s.param_name is None for s in slots):
        raise ValueError("polarize needs a t parameter on every slot.")
    if sum(multi_index) != m:
        log.debug("Multi-index %s does not sum to %d: zero component", multi_index, m)
        return SigmaPoly()
    expansion = amitsur_expand(m, slots, trunc, budget=multi_index)
    wanted = {s.param_name: a for s, a in zip(slots, multi_index)}
    return expansion.coefficient_extract(wanted)


# ─────────────────────────────────────────────────────────────────
# σ OF GENERAL ELEMENTS
# ─────────────────────────────────────────────────────────────────
def sigma_of(i: int, f, trunc: Union[Truncation, int, None] = None) -> SigmaPoly:
    """
    σ_i(f) for an arbitrary NCPoly: every term c·w becomes a slot with an
    internal parameter, which is then replaced by c (σ_i(c·w) = c^i σ_i(w)).
    """
    trunc = as_truncation(trunc)
    f = NCPoly.coerce(f)
    if i < 1:
        raise ValueError(f"σ index must be >= 1, got {i}.")
    if not f:
        return SigmaPoly()
    items = f.items()
    if len(items) == 1:
        w, c = items[0]
        return normalize_sigma(i, w, trunc) * (c ** i)
    slots = [Slot(k, w, prefix=_INTERNAL_PREFIX) for k, (w, _c) in enumerate(items)]
    expansion = amitsur_expand(i, slots, trunc)
    images = {f"{_INTERNAL_PREFIX}{k}": c for k, (_w, c) in enumerate(items)}
    return expansion.substitute_params(images)


def ch_polynomial(n: int, f, trunc: Union[Truncation, int, None] = None) -> NCPoly:
    """CH_n(f) = f^n + Σ_{i=1}^n (−1)^i σ_i(f) f^{n−i}, σ computed at level n."""
    if n < 1:
        raise ValueError(f"CH_n needs n >= 1, got {n}.")
    trunc = as_truncation(n if trunc is None else trunc)
    f = NCPoly.coerce(f)
    powers = [NCPoly.one()]
    for _ in range(n):
        powers.append(powers[-1] * f)
    result = powers[n]
    for i in range(1, n + 1):
        sigma = sigma_of(i, f, trunc)
        if sigma:
            result = result + powers[n - i] * (sigma if i % 2 == 0 else -sigma)
    return result


# ─────────────────────────────────────────────────────────────────
# T-SUBSTITUTION
# ─────────────────────────────────────────────────────────────────
def t_substitute(f, images: Mapping[int, object],
                 trunc: Union[Truncation, int, None] = None) -> NCPoly:
    """
    Apply the Σ-endomorphism x_v -> images[v] (variables without an image are
    fixed). σ-generators in the coefficients are rewritten through sigma_of.
    """
    trunc = as_truncation(trunc)
    f = NCPoly.coerce(f)
    imgs: Dict[int, NCPoly] = {}
    for v, img in images.items():
        img = NCPoly.coerce(img)
        if img.constant_term():
            raise SubstitutionError(
                f"Image of variable {v} has a constant term; T-substitutions must not."
            )
        imgs[v] = img

    word_cache: Dict[Word, NCPoly] = {}

    def image_of(w: Word) -> NCPoly:
        if w not in word_cache:
            out = NCPoly.one()
            for v in w.letters:
                out = out * imgs.get(v, NCPoly.var(v))
            word_cache[w] = out
        return word_cache[w]

    def rewrite_generator(g) -> SigmaPoly:
        return sigma_of(g.index, image_of(g.word), trunc)

    out = NCPoly()
    for w, c in f.items():
        coeff = c.substitute_generators(rewrite_generator)
        out = out + image_of(w) * coeff
    return out


# ─────────────────────────────────────────────────────────────────
# KERNEL RELATIONS
# ─────────────────────────────────────────────────────────────────
@dataclass(frozen=True)
class KernelRelation:
    h:   Tuple[int, ...]          # exponents of u_1 … u_a
    k:   Tuple[int, ...]          # exponents of v_1 … v_b
    phi: SigmaPoly

    def to_json(self) -> dict:
        return {"h": list(self.h), "k": list(self.k), "phi": self.phi.to_json()}


def kernel_relations(n: int, f_monomials: Sequence, g_monomials: Sequence) -> List[KernelRelation]:
    """
    f = Σ u_i M_i, g = Σ v_j N_j; expand σ_n(fg) − σ_n(f)σ_n(g) at level n and
    return every nonzero coefficient φ_{h,k} of u^h v^k.
    """
    fs = [as_word(w) for w in f_monomials]
    gs = [as_word(w) for w in g_monomials]
    if not fs or not gs:
        raise ValueError("kernel_relations needs nonempty monomial lists.")
    if any(not w for w in fs + gs):
        raise EmptyWordError("kernel_relations monomials must be nonempty.")
    trunc = Truncation.at(n)

    f_slots  = [Slot(None, w, _param_mono({f"u{i}": 1})) for i, w in enumerate(fs, 1)]
    g_slots  = [Slot(None, w, _param_mono({f"v{j}": 1})) for j, w in enumerate(gs, 1)]
    fg_slots = [Slot(None, a.monomial + b.monomial, _param_mono({a.extra[0][0]: 1, b.extra[0][0]: 1}))
                for a in f_slots for b in g_slots]

    difference = (amitsur_expand(n, fg_slots, trunc)
                  - amitsur_expand(n, f_slots, trunc) * amitsur_expand(n, g_slots, trunc))

    relations: List[KernelRelation] = []
    for params, phi in difference.by_params().items():
        exps = dict(params)
        h = tuple(exps.get(f"u{i}", 0) for i in range(1, len(fs) + 1))
        k = tuple(exps.get(f"v{j}", 0) for j in range(1, len(gs) + 1))
        relations.append(KernelRelation(h, k, phi))
    log.info("Kernel relations n=%d |f|=%d |g|=%d: %d nonzero φ", n, len(fs), len(gs), len(relations))
    return relations
