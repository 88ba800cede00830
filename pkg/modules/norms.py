"""
CHAlg — modules/norms.py
=========================
Split semisimple algebras F(m;a) = ⊕ M_{m_i}(Q), block i repeated a_i
times, with the norm N(r) = ∏ det(r_i)^{a_i} of degree n = Σ a_i·m_i.

The characteristic polynomial χ_r(t) = N(t − r) = ∏ det(t − r_i)^{a_i} is a
sympy Poly in t over QQ; evaluation at an element is blockwise Horner.
"""

from __future__ import annotations

import logging
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from sympy import QQ, Poly, Rational, Symbol

from .errors import ShapeMismatchError
from .matrix_eval import ExactMatrix, char_coeffs, char_poly, random_matrix

log = logging.getLogger("CHAlg.Norms")

T = Symbol("t")


# ─────────────────────────────────────────────────────────────────
# SHAPES AND ELEMENTS
# ─────────────────────────────────────────────────────────────────
@dataclass(frozen=True)
class BlockShape:
    blocks: Tuple[Tuple[int, int], ...]          # (m_i, a_i)

    def __post_init__(self) -> None:
        object.__setattr__(self, "blocks", tuple((int(m), int(a)) for m, a in self.blocks))
        if not self.blocks:
            raise ShapeMismatchError("A block shape needs at least one block.")
        for m, a in self.blocks:
            if m < 1 or a < 1:
                raise ShapeMismatchError(f"Block size and multiplicity must be >= 1: ({m}, {a}).")

    @property
    def degree(self) -> int:
        return sum(m * a for m, a in self.blocks)

    @property
    def sizes(self) -> Tuple[int, ...]:
        return tuple(m for m, _ in self.blocks)

    @classmethod
    def parse(cls, text: str) -> "BlockShape":
        """'2:1,1:1' -> blocks ((2, 1), (1, 1)); a bare '3' means multiplicity 1."""
        blocks = []
        for part in text.split(","):
            part = part.strip()
            if not part:
                continue
            m, _, a = part.partition(":")
            try:
                blocks.append((int(m), int(a) if a else 1))
            except ValueError:
                raise ShapeMismatchError(f"Bad block {part!r}; expected m:a.") from None
        return cls(tuple(blocks))

    def __str__(self) -> str:
        return ",".join(f"{m}:{a}" for m, a in self.blocks)

    def to_json(self) -> dict:
        return {"blocks": [[m, a] for m, a in self.blocks]}


@dataclass(frozen=True)
class BlockElement:
    blocks: Tuple[ExactMatrix, ...]

    @classmethod
    def of(cls, *blocks) -> "BlockElement":
        return cls(tuple(b if isinstance(b, ExactMatrix) else ExactMatrix.of(b) for b in blocks))

    @classmethod
    def identity(cls, shape: BlockShape) -> "BlockElement":
        return cls(tuple(ExactMatrix.identity(m) for m in shape.sizes))

    @classmethod
    def scalar(cls, shape: BlockShape, c) -> "BlockElement":
        return cls(tuple(ExactMatrix.identity(m).scale(c) for m in shape.sizes))

    def __mul__(self, other: "BlockElement") -> "BlockElement":
        if len(other.blocks) != len(self.blocks):
            raise ShapeMismatchError("Elements have different block counts.")
        return BlockElement(tuple(a @ b for a, b in zip(self.blocks, other.blocks)))

    def __add__(self, other: "BlockElement") -> "BlockElement":
        if len(other.blocks) != len(self.blocks):
            raise ShapeMismatchError("Elements have different block counts.")
        return BlockElement(tuple(a + b for a, b in zip(self.blocks, other.blocks)))

    def scale(self, c) -> "BlockElement":
        return BlockElement(tuple(b.scale(c) for b in self.blocks))

    def to_json(self) -> list:
        return [b.to_json() for b in self.blocks]


def _check(shape: BlockShape, r: BlockElement) -> None:
    got = tuple(b.size for b in r.blocks)
    if got != shape.sizes:
        raise ShapeMismatchError(f"Element blocks {got} do not match shape sizes {shape.sizes}.")


# ─────────────────────────────────────────────────────────────────
# NORM / CHARACTERISTIC POLYNOMIAL
# ─────────────────────────────────────────────────────────────────
def norm(shape: BlockShape, r: BlockElement) -> Fraction:
    _check(shape, r)
    out = Fraction(1)
    for (_, a), block in zip(shape.blocks, r.blocks):
        out *= block.det() ** a
    return out


def char_poly_block(shape: BlockShape, r: BlockElement) -> Poly:
    """∏ det(t − r_i)^{a_i}: monic, degree n."""
    _check(shape, r)
    chi = Poly(1, T, domain=QQ)
    for (_, a), block in zip(shape.blocks, r.blocks):
        coeffs = [QQ(c.numerator, c.denominator) for c in char_poly(block)]
        chi *= Poly(coeffs, T, domain=QQ) ** a
    return chi


def _horner(coeffs: Sequence[Fraction], m: ExactMatrix) -> ExactMatrix:
    acc = ExactMatrix.zeros(m.size)
    one = ExactMatrix.identity(m.size)
    for c in coeffs:
        acc = acc @ m + one.scale(c)
    return acc


def _fractions(p: Poly) -> List[Fraction]:
    return [Fraction(int(Rational(c).p), int(Rational(c).q)) for c in p.all_coeffs()]


def ch_check(shape: BlockShape, r: BlockElement, poly: Optional[Poly] = None) -> bool:
    """χ_r(r) == 0 blockwise. `poly` replaces χ_r, e.g. for a negative control."""
    _check(shape, r)
    chi = poly if poly is not None else char_poly_block(shape, r)
    coeffs = _fractions(chi)
    return all(_horner(coeffs, block).is_zero() for block in r.blocks)


def sigma_from_norm(shape: BlockShape, r: BlockElement) -> List[Fraction]:
    """σ_1 … σ_n from χ_r(t) = t^n + Σ (−1)^i σ_i t^{n−i}."""
    coeffs = _fractions(char_poly_block(shape, r))
    return [c if i % 2 == 0 else -c for i, c in enumerate(coeffs) if i > 0]


# ─────────────────────────────────────────────────────────────────
# RANDOM SAMPLING
# ─────────────────────────────────────────────────────────────────
def random_shape(n: int, rng: random.Random) -> BlockShape:
    """A random shape of degree n: split n into parts m·a."""
    blocks = []
    left = n
    while left:
        m = rng.randint(1, left)
        a = rng.randint(1, left // m)
        blocks.append((m, a))
        left -= m * a
    return BlockShape(tuple(blocks))


def random_element(shape: BlockShape, rng: random.Random, bound: int = 10) -> BlockElement:
    blocks = []
    for m in shape.sizes:
        block = random_matrix(m, rng, bound)
        den = rng.randint(1, 3)
        blocks.append(block.scale(Fraction(1, den)))
    return BlockElement(tuple(blocks))


# ─────────────────────────────────────────────────────────────────
# SUITE
# ─────────────────────────────────────────────────────────────────
@dataclass
class NormReport:
    shape:  BlockShape
    trials: int
    seed:   int
    checks: dict = field(default_factory=dict)   # name -> passed count
    failures: List[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_json(self) -> dict:
        return {"shape": self.shape.to_json(), "degree": self.shape.degree,
                "trials": self.trials, "seed": self.seed, "checks": dict(self.checks),
                "failures": list(self.failures), "passed": self.passed}

    def summary(self) -> str:
        lines = [f"shape {self.shape} (n = {self.shape.degree}), "
                 f"{self.trials} trials, seed {self.seed}"]
        for name, count in self.checks.items():
            lines.append(f"  {name:<18} {count}/{self.trials}")
        lines.append("PASS" if self.passed else f"FAIL ({len(self.failures)} failure(s))")
        return "\n".join(lines)


def run_norm_suite(shape: BlockShape, trials: int = 100, seed: int = 0) -> NormReport:
    """Multiplicativity, degree-n homogeneity, Cayley–Hamilton and the σ/char-coeff
    agreement on `trials` random elements."""
    report = NormReport(shape, trials, seed)
    names = ("multiplicative", "homogeneous", "cayley-hamilton", "sigma-consistent")
    for name in names:
        report.checks[name] = 0
    n = shape.degree

    for trial in range(trials):
        rng = random.Random(f"{seed}:{trial}")
        r = random_element(shape, rng)
        s = random_element(shape, rng)
        lam = Fraction(rng.randint(-9, 9), rng.randint(1, 5))
        results = {
            "multiplicative":  norm(shape, r * s) == norm(shape, r) * norm(shape, s),
            "homogeneous":     norm(shape, r.scale(lam)) == lam ** n * norm(shape, r),
            "cayley-hamilton": ch_check(shape, r),
            "sigma-consistent": sigma_from_norm(shape, r)[-1] == norm(shape, r),
        }
        for name, ok in results.items():
            if ok:
                report.checks[name] += 1
            else:
                report.failures.append(f"trial {trial}: {name}")
    log.info("Norm suite on %s: %s", shape, "pass" if report.passed else "FAIL")
    return report


def single_block_matches(m: ExactMatrix) -> bool:
    """Shape ((h),(1)) reproduces the matrix characteristic coefficients."""
    shape = BlockShape(((m.size, 1),))
    return sigma_from_norm(shape, BlockElement((m,))) == list(char_coeffs(m))
