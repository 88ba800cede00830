"""
CHAlg — modules/word_core.py
=============================
Combinatorics on words: noncommutative monomials, Lyndon words, cyclic
normal forms and monomial substitution.

A Word is a tuple of variable indices (0-based, unbounded alphabet).
The empty word is the monomial 1. Words are ordered degree-lexicographically:
length first, then letter by letter.

Algorithms:
  - minimal rotation: Booth's least-rotation scan (linear)
  - primitive root: smallest period from the failure (border) function
  - enumeration: Duval's generator, re-sorted degree-lexicographically
"""

from __future__ import annotations

import logging
import re
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator, List, Mapping, Sequence, Tuple

from sympy import divisors
from sympy.functions.combinatorial.numbers import mobius

from .config import check_cap
from .errors import EmptyWordError, ExprSyntaxError, SubstitutionError

log = logging.getLogger("CHAlg.Words")

_ALPHABET = "abcdefghijklmnopqrstuvwxyz"
_SUPERSCRIPTS = str.maketrans("0123456789", "⁰¹²³⁴⁵⁶⁷⁸⁹")
_TOKEN_RE = re.compile(r"x(\d+)|([a-z])")


# ─────────────────────────────────────────────────────────────────
# WORD
# ─────────────────────────────────────────────────────────────────
@dataclass(frozen=True)
class Word:
    letters: Tuple[int, ...] = ()

    def __post_init__(self) -> None:
        if not isinstance(self.letters, tuple):
            object.__setattr__(self, "letters", tuple(self.letters))
        if any(v < 0 for v in self.letters):
            raise ValueError(f"Variable indices must be >= 0: {self.letters}")

    # ── sequence protocol ─────────────────────────────────────────
    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self) -> Iterator[int]:
        return iter(self.letters)

    def __getitem__(self, item):
        if isinstance(item, slice):
            return Word(self.letters[item])
        return self.letters[item]

    def __add__(self, other: "Word") -> "Word":
        return Word(self.letters + other.letters)

    def __pow__(self, exponent: int) -> "Word":
        if exponent < 0:
            raise ValueError("Negative word power.")
        return Word(self.letters * exponent)

    def __bool__(self) -> bool:
        return bool(self.letters)

    # ── order ─────────────────────────────────────────────────────
    @property
    def sort_key(self) -> Tuple[int, Tuple[int, ...]]:
        """Degree-lexicographic key."""
        return (len(self.letters), self.letters)

    def __lt__(self, other: "Word") -> bool:
        return self.sort_key < other.sort_key

    def __le__(self, other: "Word") -> bool:
        return self.sort_key <= other.sort_key

    # ── degrees ───────────────────────────────────────────────────
    def multidegree(self) -> Counter:
        return Counter(self.letters)

    def variables(self) -> frozenset:
        return frozenset(self.letters)

    def rotate(self, k: int) -> "Word":
        if not self.letters:
            return self
        k %= len(self.letters)
        return Word(self.letters[k:] + self.letters[:k])

    # ── text ──────────────────────────────────────────────────────
    @classmethod
    def parse(cls, text: str) -> "Word":
        """'aab' -> (0,0,1); 'x0x12' -> (0,12); '1' or '' -> empty word."""
        s = text.strip()
        if s in ("", "1"):
            return cls(())
        letters: List[int] = []
        pos = 0
        while pos < len(s):
            m = _TOKEN_RE.match(s, pos)
            if not m:
                raise ExprSyntaxError(f"Bad letter {s[pos]!r} in word", pos, s)
            letters.append(int(m.group(1)) if m.group(1) is not None
                           else _ALPHABET.index(m.group(2)))
            pos = m.end()
        return cls(tuple(letters))

    def render(self, style: str = "plain") -> str:
        return render_word(self, style)

    def __str__(self) -> str:
        return render_word(self)


EMPTY = Word(())


def variable_name(v: int, letters: bool = True) -> str:
    return _ALPHABET[v] if letters and v < len(_ALPHABET) else f"x{v}"


def render_word(w: Word, style: str = "plain") -> str:
    """
    style:
      plain    juxtaposed, reparseable ("aabb", "x0x30")
      ascii    runs compressed with ^ ("a^2b^2")
      unicode  runs compressed with superscripts ("a²b²")
    Letters a–z are used when every index fits the 26-letter alphabet.
    """
    if not w.letters:
        return "1"
    use_letters = max(w.letters) < len(_ALPHABET)
    if style == "plain":
        return "".join(variable_name(v, use_letters) for v in w.letters)

    parts: List[str] = []
    i = 0
    while i < len(w.letters):
        j = i
        while j < len(w.letters) and w.letters[j] == w.letters[i]:
            j += 1
        name = variable_name(w.letters[i], use_letters)
        run = j - i
        if run == 1:
            parts.append(name)
        elif style == "unicode":
            parts.append(name + str(run).translate(_SUPERSCRIPTS))
        else:
            parts.append(f"{name}^{run}")
        i = j
    return "".join(parts)


def as_word(w) -> Word:
    """Accept a Word, a str ('ab') or a sequence of indices."""
    if isinstance(w, Word):
        return w
    if isinstance(w, str):
        return Word.parse(w)
    return Word(tuple(w))


# ─────────────────────────────────────────────────────────────────
# ROTATIONS / PERIODS
# ─────────────────────────────────────────────────────────────────
def _least_rotation(s: Tuple[int, ...]) -> int:
    """Booth: start index of the lexicographically least rotation."""
    doubled = s + s
    fail = [-1] * len(doubled)
    k = 0
    for j in range(1, len(doubled)):
        sj = doubled[j]
        i = fail[j - k - 1]
        while i != -1 and sj != doubled[k + i + 1]:
            if sj < doubled[k + i + 1]:
                k = j - i - 1
            i = fail[i]
        if sj != doubled[k + i + 1]:
            if sj < doubled[k]:
                k = j
            fail[j - k] = -1
        else:
            fail[j - k] = i + 1
    return k


def _smallest_period(s: Tuple[int, ...]) -> int:
    """Smallest p with s[i] == s[i+p]; from the KMP border of the whole word."""
    n = len(s)
    border = [0] * n
    b = 0
    for i in range(1, n):
        while b and s[i] != s[b]:
            b = border[b - 1]
        if s[i] == s[b]:
            b += 1
        border[i] = b
    return n - border[-1]


def rotations(w: Word) -> List[Word]:
    return [w.rotate(k) for k in range(max(len(w), 1))]


def primitive_root(w: Word) -> Tuple[Word, int]:
    """(u, j) with u primitive and u^j == w."""
    if not w:
        raise EmptyWordError("The empty word has no primitive root.")
    p = _smallest_period(w.letters)
    if len(w) % p:
        p = len(w)
    return Word(w.letters[:p]), len(w) // p


@dataclass(frozen=True)
class CyclicNormalForm:
    root:     Word
    exponent: int

    def word(self) -> Word:
        return self.root ** self.exponent


def is_lyndon(w: Word) -> bool:
    """Nonempty, primitive, and strictly below every nontrivial rotation."""
    w = as_word(w)
    if not w:
        return False
    if primitive_root(w)[1] > 1:
        return False
    return _least_rotation(w.letters) == 0


@lru_cache(maxsize=1 << 16)
def cyclic_normalize(w: Word) -> CyclicNormalForm:
    """(N, j): N Lyndon, N^j a rotation of w."""
    if not w:
        raise EmptyWordError("cyclic_normalize needs a nonempty word.")
    root, j = primitive_root(w)
    k = _least_rotation(w.letters)
    rotated = w.letters[k:] + w.letters[:k]
    return CyclicNormalForm(Word(rotated[:len(root)]), j)


# ─────────────────────────────────────────────────────────────────
# ENUMERATION
# ─────────────────────────────────────────────────────────────────
def necklace_count(alphabet_size: int, length: int) -> int:
    """Number of Lyndon words of exactly `length` letters (Witt's formula)."""
    if length < 1:
        return 0
    total = sum(mobius(e) * alphabet_size ** (length // e) for e in divisors(length))
    return int(total) // length


def _duval(alphabet_size: int, max_length: int) -> Iterator[Tuple[int, ...]]:
    w = [-1]
    while w:
        w[-1] += 1
        yield tuple(w)
        m = len(w)
        while len(w) < max_length:
            w.append(w[-m])
        while w and w[-1] == alphabet_size - 1:
            w.pop()


def lyndon_words(alphabet_size: int, max_length: int) -> List[Word]:
    """All Lyndon words of length <= max_length, degree-lexicographic order."""
    if alphabet_size < 1 or max_length < 1:
        raise ValueError("alphabet_size and max_length must be >= 1.")
    expected = sum(necklace_count(alphabet_size, d) for d in range(1, max_length + 1))
    check_cap("MAX_LYNDON", "Lyndon word count", expected)
    words = sorted((Word(t) for t in _duval(alphabet_size, max_length)),
                   key=lambda x: x.sort_key)
    log.debug("Enumerated %d Lyndon words (q=%d, d=%d)", len(words), alphabet_size, max_length)
    return words


def lyndon_words_within(alphabet_size: int, max_length: int,
                        content: Sequence[int]) -> List[Word]:
    """
    Lyndon words of length <= max_length using letter s at most content[s]
    times, degree-lexicographic order. Generated prefix by prefix, so the
    cost follows the content rather than alphabet_size ** max_length.
    """
    if len(content) != alphabet_size:
        raise ValueError("content needs one bound per letter.")
    remaining = list(content)
    prefix: List[int] = []
    words: List[Word] = []

    def extend() -> None:
        if prefix and is_lyndon(Word(tuple(prefix))):
            words.append(Word(tuple(prefix)))
            check_cap("MAX_LYNDON", "Lyndon word count", len(words))
        if len(prefix) == max_length:
            return
        # a Lyndon word starts with its smallest letter
        for s in range(prefix[0] if prefix else 0, alphabet_size):
            if remaining[s] > 0:
                remaining[s] -= 1
                prefix.append(s)
                extend()
                prefix.pop()
                remaining[s] += 1

    extend()
    words.sort(key=lambda x: x.sort_key)
    log.debug("Enumerated %d Lyndon words within content %s", len(words), tuple(content))
    return words


# ─────────────────────────────────────────────────────────────────
# SUBSTITUTION
# ─────────────────────────────────────────────────────────────────
def substitute_word(w: Word, images: Mapping[int, Word]) -> Word:
    """Concatenate images[v] for the letters v of w."""
    out: List[int] = []
    for v in w.letters:
        if v not in images:
            raise SubstitutionError(f"No image for variable {variable_name(v)}.")
        out.extend(as_word(images[v]).letters)
    return Word(tuple(out))


def words_variables(words: Iterable[Word]) -> frozenset:
    out: set = set()
    for w in words:
        out.update(w.letters)
    return frozenset(out)
