"""Short constructors used across the test modules."""

from __future__ import annotations

from modules.free_sigma import NCPoly
from modules.sigma_ring import SigmaPoly
from modules.word_core import Word


def w(text: str) -> Word:
    return Word.parse(text)


def s(i: int, word: str) -> SigmaPoly:
    return SigmaPoly.generator(i, word)


def x(text: str) -> NCPoly:
    return NCPoly.monomial(text)
