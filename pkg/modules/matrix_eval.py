"""
CHAlg — modules/matrix_eval.py
===============================
Exact evaluation oracle.

  - ExactMatrix: a square sympy DomainMatrix over one of two scalar domains
      RationalDomain      QQ, entries handed out as fractions.Fraction
      PolynomialDomain    sympy PolyRing over QQ (generic matrices)
  - char_coeffs: DomainMatrix.charpoly, division-free, so it runs over
    polynomial entries as well
  - eval_sigma_poly / eval_nc_poly: the evaluation homomorphism ρ
  - verify_identity: exact-generic or seeded randomized vanishing test

Words map to left-to-right matrix products, the empty word to the identity.
Random trials draw integer entries in [−bound, bound] from
random.Random(f"{seed}:{trial}"), so each trial is reproducible on its own.
"""

from __future__ import annotations

import logging
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Sequence, Union

import sympy
from sympy import QQ
from sympy.polys.matrices import DomainMatrix
from sympy.polys.rings import PolyElement, ring

from .config import Config, check_cap
from .errors import UnassignedVariableError
from .free_sigma import NCPoly
from .sigma_ring import SigmaPoly
from .word_core import Word, variable_name

log = logging.getLogger("CHAlg.Matrix")


# ─────────────────────────────────────────────────────────────────
# SCALAR DOMAINS
# ─────────────────────────────────────────────────────────────────
def _fraction(x) -> Fraction:
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    if isinstance(x, sympy.Rational):
        return Fraction(int(x.p), int(x.q))
    # QQ elements (PythonMPQ / gmpy2.mpq)
    return Fraction(int(x.numerator), int(x.denominator))


class RationalDomain:
    """QQ inside the matrices, Fraction at the boundary."""

    name = "QQ"
    K    = QQ
    zero = Fraction(0)
    one  = Fraction(1)

    def convert(self, x):
        if isinstance(x, PolyElement):
            raise TypeError("Polynomial entry in a rational matrix.")
        f = _fraction(x)
        return QQ(f.numerator, f.denominator)

    @staticmethod
    def lift(x) -> Fraction:
        return _fraction(x)

    @staticmethod
    def export(x) -> Fraction:
        return _fraction(x)

    @staticmethod
    def is_zero(x) -> bool:
        return x == 0

    @staticmethod
    def to_json(x):
        x = _fraction(x)
        return int(x) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"

    def __eq__(self, other) -> bool:
        return isinstance(other, RationalDomain)

    def __hash__(self) -> int:
        return hash("QQ")


class PolynomialDomain:
    """QQ[names] through sympy's sparse polynomial rings."""

    def __init__(self, names: Sequence[str]):
        self.names = tuple(names)
        self.ring, *gens = ring(list(self.names), QQ)
        self.K     = self.ring.to_domain()
        self.gens  = dict(zip(self.names, gens))
        self.zero  = self.ring.zero
        self.one   = self.ring.one
        self.name  = f"QQ[{len(self.names)} vars]"

    def convert(self, x):
        if isinstance(x, PolyElement):
            return x
        f = _fraction(x)
        return self.ring(QQ(f.numerator, f.denominator))

    def lift(self, x):
        return self.convert(x)

    @staticmethod
    def export(x):
        return x

    @staticmethod
    def is_zero(x) -> bool:
        return not x

    @staticmethod
    def to_json(x):
        return str(x.as_expr())

    def __eq__(self, other) -> bool:
        return isinstance(other, PolynomialDomain) and other.names == self.names

    def __hash__(self) -> int:
        return hash(self.names)


QQ_DOMAIN = RationalDomain()
Domain = Union[RationalDomain, PolynomialDomain]


# ─────────────────────────────────────────────────────────────────
# EXACT MATRIX
# ─────────────────────────────────────────────────────────────────
@dataclass(frozen=True, eq=False)
class ExactMatrix:
    """Square DomainMatrix (dense) tagged with the CHAlg scalar domain it lives in."""

    dm:     DomainMatrix
    domain: Domain = QQ_DOMAIN

    def __post_init__(self) -> None:
        rows, cols = self.dm.shape
        if rows != cols:
            raise ValueError("ExactMatrix must be square.")
        dm = self.dm if self.dm.domain == self.domain.K else self.dm.convert_to(self.domain.K)
        object.__setattr__(self, "dm", dm.to_dense())

    # ── constructors ──────────────────────────────────────────────
    @classmethod
    def of(cls, rows, domain: Domain = QQ_DOMAIN) -> "ExactMatrix":
        rows = [list(r) for r in rows]
        n = len(rows)
        if any(len(r) != n for r in rows):
            raise ValueError("ExactMatrix must be square.")
        entries = [[domain.convert(x) for x in r] for r in rows]
        return cls(DomainMatrix(entries, (n, n), domain.K), domain)

    @classmethod
    def identity(cls, n: int, domain: Domain = QQ_DOMAIN) -> "ExactMatrix":
        return cls(DomainMatrix.eye(n, domain.K), domain)

    @classmethod
    def zeros(cls, n: int, domain: Domain = QQ_DOMAIN) -> "ExactMatrix":
        return cls(DomainMatrix.zeros((n, n), domain.K), domain)

    @classmethod
    def from_sympy(cls, m: sympy.Matrix) -> "ExactMatrix":
        return cls(DomainMatrix.from_Matrix(m).convert_to(QQ))

    def to_sympy(self) -> sympy.Matrix:
        return self.dm.to_Matrix()

    # ── shape / entries ───────────────────────────────────────────
    @property
    def size(self) -> int:
        return self.dm.shape[0]

    @property
    def rows(self) -> tuple:
        export = self.domain.export
        return tuple(tuple(export(x) for x in r) for r in self.dm.to_list())

    def __getitem__(self, ij):
        i, j = ij
        return self.domain.export(self.dm[i, j].element)

    def __eq__(self, other) -> bool:
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        return self.domain == other.domain and self.dm == other.dm

    __hash__ = None

    # ── arithmetic ────────────────────────────────────────────────
    def _same(self, other: "ExactMatrix") -> None:
        if other.size != self.size:
            raise ValueError(f"Size mismatch: {self.size} vs {other.size}.")
        if other.domain != self.domain:
            raise ValueError("Matrices over different scalar domains.")

    def __add__(self, other: "ExactMatrix") -> "ExactMatrix":
        self._same(other)
        return ExactMatrix(self.dm + other.dm, self.domain)

    def __sub__(self, other: "ExactMatrix") -> "ExactMatrix":
        self._same(other)
        return ExactMatrix(self.dm - other.dm, self.domain)

    def __matmul__(self, other: "ExactMatrix") -> "ExactMatrix":
        self._same(other)
        return ExactMatrix(self.dm.matmul(other.dm), self.domain)

    def scale(self, c) -> "ExactMatrix":
        return ExactMatrix(self.dm.scalarmul(self.domain.convert(c)), self.domain)

    def power(self, k: int) -> "ExactMatrix":
        return ExactMatrix(self.dm ** k, self.domain)

    def inverse(self) -> "ExactMatrix":
        """Over QQ only; raises for singular matrices."""
        return ExactMatrix(self.dm.inv(), self.domain)

    def is_zero(self) -> bool:
        return self.dm.is_zero_matrix

    def trace(self):
        total = self.domain.K.zero
        for x in self.dm.diagonal():
            total += x
        return self.domain.export(total)

    def det(self):
        if not self.size:
            return self.domain.one
        return self.domain.export(self.dm.det())

    def to_json(self) -> list:
        return [[self.domain.to_json(x) for x in r] for r in self.rows]


# ─────────────────────────────────────────────────────────────────
# CHARACTERISTIC COEFFICIENTS
# ─────────────────────────────────────────────────────────────────
def char_poly(m: ExactMatrix) -> List:
    """Monic coefficient list of det(t − M), highest degree first."""
    if not m.size:
        return [m.domain.one]
    return [m.domain.export(c) for c in m.dm.charpoly()]


def char_coeffs(m: ExactMatrix) -> List:
    """[σ_1, …, σ_n] with det(t − M) = t^n + Σ (−1)^i σ_i t^{n−i}."""
    c = char_poly(m)
    return [c[i] if i % 2 == 0 else -c[i] for i in range(1, len(c))]


# ─────────────────────────────────────────────────────────────────
# SPECIAL MATRICES
# ─────────────────────────────────────────────────────────────────
def elementary_matrix(n: int, i: int, j: int) -> ExactMatrix:
    """e_{i,j}, 1-based."""
    return ExactMatrix.of([[1 if (r, c) == (i - 1, j - 1) else 0 for c in range(n)]
                           for r in range(n)])


def cycle_matrix(n: int) -> ExactMatrix:
    """e_{1,2} + e_{2,3} + … + e_{n−1,n} + e_{n,1}."""
    return ExactMatrix.of([[1 if c == (r + 1) % n else 0 for c in range(n)] for r in range(n)])


def random_matrix(n: int, rng: random.Random, bound: int = 10) -> ExactMatrix:
    return ExactMatrix.of([[rng.randint(-bound, bound) for _ in range(n)] for _ in range(n)])


def random_strictly_upper(n: int, rng: random.Random, bound: int = 10) -> ExactMatrix:
    return ExactMatrix.of([[rng.randint(-bound, bound) if c > r else 0 for c in range(n)]
                           for r in range(n)])


def conjugate(m: ExactMatrix, p: ExactMatrix) -> ExactMatrix:
    """P·M·P⁻¹ over the rationals."""
    return p @ m @ p.inverse()


def nilpotent_by_sigma(m: ExactMatrix) -> bool:
    return all(m.domain.is_zero(s) for s in char_coeffs(m))


def is_nilpotent(m: ExactMatrix) -> bool:
    return m.power(m.size).is_zero()


# ─────────────────────────────────────────────────────────────────
# ASSIGNMENTS AND EVALUATION
# ─────────────────────────────────────────────────────────────────
@dataclass
class Assignment:
    matrices: Mapping[int, ExactMatrix]
    params:   Mapping[str, object] = field(default_factory=dict)
    n:        Optional[int] = None
    base:     Optional[Domain] = None

    def __post_init__(self) -> None:
        sizes = {m.size for m in self.matrices.values()}
        domains = {m.domain for m in self.matrices.values()}
        if len(sizes) > 1 or len(domains) > 1:
            raise ValueError("All assigned matrices must share size and domain.")
        self._word_cache: Dict[Word, ExactMatrix] = {}
        self._coeff_cache: Dict[Word, List] = {}

    @property
    def size(self) -> int:
        return next(iter(self.matrices.values())).size if self.matrices else (self.n or 0)

    @property
    def domain(self) -> Domain:
        if self.matrices:
            return next(iter(self.matrices.values())).domain
        return self.base or QQ_DOMAIN

    def word(self, w: Word) -> ExactMatrix:
        if w in self._word_cache:
            return self._word_cache[w]
        out = ExactMatrix.identity(self.size, self.domain)
        for v in w.letters:
            if v not in self.matrices:
                raise UnassignedVariableError(f"Variable {variable_name(v)} is not assigned.")
            out = out @ self.matrices[v]
        self._word_cache[w] = out
        return out

    def sigma(self, i: int, w: Word):
        if w not in self._coeff_cache:
            self._coeff_cache[w] = char_coeffs(self.word(w))
        coeffs = self._coeff_cache[w]
        return coeffs[i - 1] if i <= len(coeffs) else self.domain.zero

    def param(self, name: str):
        if name not in self.params:
            raise UnassignedVariableError(f"Parameter {name} is not assigned.")
        return self.domain.lift(self.params[name])


def eval_sigma_poly(p: SigmaPoly, asg: Assignment):
    """ρ(p): σ_i(w) -> i-th characteristic coefficient of the product along w."""
    dom = asg.domain
    total = dom.zero
    for (params, mono), c in p.items():
        term = dom.lift(c)
        for name, e in params:
            term = term * asg.param(name) ** e
        for g, e in mono:
            term = term * asg.sigma(g.index, g.word) ** e
            if dom.is_zero(term):
                break
        total = total + term
    return total


def eval_nc_poly(f: NCPoly, asg: Assignment) -> ExactMatrix:
    """Σ ρ(c_w) · (product of the assigned matrices along w)."""
    out = ExactMatrix.zeros(asg.size, asg.domain)
    for w, c in f.items():
        out = out + asg.word(w).scale(eval_sigma_poly(c, asg))
    return out


def generic_matrices(n: int, count: int, first_index: int = 0) -> List[ExactMatrix]:
    """count n×n matrices whose entries are fresh indeterminates ξ^{(i)}_{h,k}."""
    domain = generic_domain(n, range(first_index, first_index + count))
    return [_generic(domain, n, i) for i in range(first_index, first_index + count)]


def generic_domain(n: int, variables, params: Sequence[str] = ()) -> PolynomialDomain:
    variables = list(variables)
    check_cap("MAX_GENERIC_VARS", "generic indeterminates", len(variables) * n * n + len(params))
    names = [_xi(i, h, k) for i in variables for h in range(1, n + 1) for k in range(1, n + 1)]
    names += [f"p_{p}" for p in params]
    # sympy needs at least one generator
    return PolynomialDomain(names or ["xi"])


def _xi(i: int, h: int, k: int) -> str:
    return f"xi{i}_{h}_{k}"


def _generic(domain: PolynomialDomain, n: int, i: int) -> ExactMatrix:
    return ExactMatrix.of([[domain.gens[_xi(i, h, k)] for k in range(1, n + 1)]
                           for h in range(1, n + 1)], domain)


def random_assignment(variables, n: int, rng: random.Random, bound: int = 10,
                      params: Sequence[str] = ()) -> Assignment:
    mats = {v: random_matrix(n, rng, bound) for v in sorted(variables)}
    vals = {p: rng.randint(-bound, bound) for p in sorted(params)}
    return Assignment(mats, vals, n=n)


# ─────────────────────────────────────────────────────────────────
# VERIFICATION
# ─────────────────────────────────────────────────────────────────
@dataclass
class Verdict:
    status:   str                        # holds-exact | holds-randomized | fails
    mode:     str
    n:        int
    trials:   int = 0
    seed:     Optional[int] = None
    witness:  Optional[dict] = None
    value:    Optional[object] = None
    residual: Optional[str] = None
    caveat:   Optional[str] = None

    @property
    def holds(self) -> bool:
        return self.status != "fails"

    def to_json(self) -> dict:
        out = {"status": self.status, "mode": self.mode, "n": self.n,
               "trials": self.trials, "seed": self.seed}
        if self.witness is not None:
            out["witness"] = self.witness
            out["value"] = self.value
        if self.residual is not None:
            out["residual"] = self.residual
        if self.caveat:
            out["caveat"] = self.caveat
        return out

    def summary(self) -> str:
        if self.status == "holds-exact":
            return f"holds-exact (generic {self.n}x{self.n} matrices)"
        if self.status == "holds-randomized":
            return f"holds-randomized ({self.trials} trials, seed {self.seed})"
        return f"fails (after {self.trials} trial(s))"


def _evaluate(expr, asg: Assignment):
    if isinstance(expr, NCPoly):
        return eval_nc_poly(expr, asg)
    return eval_sigma_poly(expr, asg)


def _is_zero(value, asg: Assignment) -> bool:
    if isinstance(value, ExactMatrix):
        return value.is_zero()
    return asg.domain.is_zero(value)


def _value_json(value, asg: Assignment):
    if isinstance(value, ExactMatrix):
        return value.to_json()
    return asg.domain.to_json(value)


def _expr_degree(expr) -> int:
    return expr.degree() if isinstance(expr, NCPoly) else expr.word_degree()


def verify_identity(expr: Union[SigmaPoly, NCPoly], n: int, mode: str = "auto",
                    trials: int = 100, seed: int = 0, bound: int = 10) -> Verdict:
    """
    mode: exact   evaluate on generic n×n matrices, require the zero polynomial
          random  `trials` integer assignments, entries in [−bound, bound]
          auto    exact when n and degree are within the exact-generic caps
    """
    if mode not in ("auto", "exact", "random"):
        raise ValueError(f"Unknown verification mode {mode!r}.")
    caveat = None
    if mode == "auto":
        small = n <= Config.EXACT_MAX_N and _expr_degree(expr) <= Config.EXACT_MAX_DEGREE
        mode = "exact" if small else "random"
        if not small:
            caveat = (f"exact-generic skipped (n={n}, degree {_expr_degree(expr)}); "
                      f"randomized check only")
            log.warning("Verification: %s", caveat)

    variables = sorted(expr.variables())
    params = sorted(expr.param_names())

    if mode == "random":
        verdict = _random_search(expr, n, variables, params, trials, seed, bound)
        verdict.caveat = caveat
        return verdict

    domain = generic_domain(n, variables, params)
    asg = Assignment({v: _generic(domain, n, v) for v in variables},
                     {p: domain.gens[f"p_{p}"] for p in params}, n=n, base=domain)
    value = _evaluate(expr, asg)
    if _is_zero(value, asg):
        log.info("Identity holds exactly on generic %dx%d matrices", n, n)
        return Verdict("holds-exact", "exact", n)

    residual = value.to_json() if isinstance(value, ExactMatrix) else domain.to_json(value)
    log.info("Identity fails on generic matrices; searching a numeric witness")
    verdict = _random_search(expr, n, variables, params, trials, seed, bound)
    if verdict.status != "fails":
        verdict = Verdict("fails", "exact", n, trials, seed)
    verdict.mode = "exact"
    verdict.residual = str(residual)
    return verdict


def _random_search(expr, n: int, variables, params, trials: int, seed: int,
                   bound: int) -> Verdict:
    for trial in range(trials):
        rng = random.Random(f"{seed}:{trial}")
        asg = random_assignment(variables, n, rng, bound, params)
        value = _evaluate(expr, asg)
        if not _is_zero(value, asg):
            witness = {variable_name(v): asg.matrices[v].to_json() for v in variables}
            witness.update({p: asg.params[p] for p in params})
            log.info("Identity fails at trial %d (seed %d)", trial, seed)
            return Verdict("fails", "random", n, trial + 1, seed, witness,
                           _value_json(value, asg))
    log.info("Identity holds on %d random trials (seed %d)", trials, seed)
    return Verdict("holds-randomized", "random", n, trials, seed)
