"""
modules/help_module.py — CHAlg help guide.

Triggered by: `chalg.py help`, `chalg.py help verify`, `chalg.py help sigma`.

MODULE_HELP is also used by chalg.py as the description of each
subcommand, so `chalg.py verify --help` and `chalg.py help verify` agree.
"""

from __future__ import annotations

import logging
from typing import Optional, Tuple

log = logging.getLogger("CHAlg.Help")


# ─────────────────────────────────────────────────────────────────
# HELP CONTENT
# ─────────────────────────────────────────────────────────────────
MODULE_HELP: dict[str, str] = {

    "general": (
        "CHAlg computes in the free n-Cayley–Hamilton algebra.\n"
        "Expressions use juxtaposition for the noncommutative product, "
        "s<i>(...) for σ_i and ch<n>(...) for the Cayley–Hamilton polynomial.\n"
        "Subcommands: lyndon, reduce, amitsur, chpoly, verify, kernel, "
        "norm-check, repro-paper-example, help.\n"
        "Say `help <topic>` for one of them, or `help syntax`."
    ),

    "syntax": (
        "Expression syntax.\n"
        "  variables   a … z, or x0, x1, … for larger alphabets\n"
        "  product     juxtaposition: ab is a·b, 2s1(a)b is 2·σ_1(a)·b\n"
        "  scalars     integers, p/q, s<i>(expr), ch<n>(expr)\n"
        "  sums        + and -, parentheses for grouping\n"
        "Example: \"s2(ab) - s2(a)s2(b)\"."
    ),

    "lyndon": (
        "Enumerate Lyndon words over an alphabet of q letters up to a length, "
        "in degree-lexicographic order. --count prints the number per length."
    ),

    "reduce": (
        "Normalize an expression in S_{n,A}: σ-arguments are rotated to Lyndon "
        "words, powers are reduced and σ_i with i > n vanish. Omit --n to work "
        "in the untruncated ring."
    ),

    "amitsur": (
        "Amitsur expansion of σ_m(t1 M1 + t2 M2 + …). "
        "--slots \"t1:a,t2:b,t3:ba\" gives the summands, --coeff 1,1,1 selects "
        "one polarized component σ_{m;1,1,1}."
    ),

    "chpoly": (
        "The formal Cayley–Hamilton polynomial CH_n(f) = f^n + Σ (−1)^i σ_i(f) f^{n−i}."
    ),

    "verify": (
        "Check that an expression vanishes on n×n matrices. --exact uses generic "
        "matrices (polynomial entries); --random uses seeded integer trials. "
        "Without either, exact is used for small n and degree. Exit code 1 and a "
        "witness when the identity fails."
    ),

    "kernel": (
        "Relations φ_{h,k} with σ_n(fg) − σ_n(f)σ_n(g) = Σ u^h v^k φ_{h,k}, "
        "for f = Σ u_i M_i and g = Σ v_j N_j. --f and --g take comma-separated monomials."
    ),

    "norm-check": (
        "Norm suite on a split semisimple algebra ⊕ M_{m_i}(Q), block i repeated a_i "
        "times: multiplicativity, homogeneity, Cayley–Hamilton. --shape \"2:1,1:1\"."
    ),

    "repro-paper-example": (
        "Recompute the worked n = 2 example σ_{3;1,1,1}(a, b, ba) and σ_{4;2,2}(a, b) "
        "and compare against the stored displays in data/worked_example.json."
    ),
}

_ALIASES: dict[str, str] = {
    "grammar": "syntax",     "expression": "syntax", "expr": "syntax",
    "lyndon": "lyndon",      "words": "lyndon",      "necklace": "lyndon",
    "reduce": "reduce",      "normalize": "reduce",  "sigma": "reduce",
    "amitsur": "amitsur",    "polarize": "amitsur",  "expand": "amitsur",
    "chpoly": "chpoly",      "ch": "chpoly",         "cayley": "chpoly",
    "verify": "verify",      "check": "verify",      "matrix": "verify",
    "kernel": "kernel",      "relations": "kernel",  "phi": "kernel",
    "norm": "norm-check",    "norms": "norm-check",  "norm-check": "norm-check",
    "repro": "repro-paper-example", "example": "repro-paper-example",
    "repro-paper-example": "repro-paper-example",
}


def _detect_section(text: Optional[str]) -> str:
    if not text:
        return "general"
    t = text.lower().strip()
    if t in MODULE_HELP:
        return t
    for word in t.split():
        if word in _ALIASES:
            return _ALIASES[word]
    try:
        from fuzzywuzzy import process
    except ImportError:
        try:
            from thefuzz import process  # type: ignore
        except ImportError:
            return "general"
    best = process.extractOne(t, list(MODULE_HELP) + list(_ALIASES))
    if best and best[1] >= 70:
        return _ALIASES.get(best[0], best[0])
    return "general"


def handle(topic: Optional[str] = None) -> Tuple[str, str]:
    """(section, text) for a free-form topic."""
    section = _detect_section(topic)
    log.info("Help section: %s", section)
    return section, MODULE_HELP[section]
