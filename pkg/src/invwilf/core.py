"""Inversion sequences, consecutive patterns and occurrence detection.

Sequences are plain tuples of ints.  Positions reported to callers are
1-based, so ``occurrences(p, s)`` returns start indices in ``[1, n - r + 1]``.
"""
from __future__ import annotations

import itertools
import os
import warnings
from dataclasses import dataclass
from functools import lru_cache
from math import factorial
from typing import Iterable, Iterator, Sequence, Union

from .errors import (
    EmptyWord,
    EnumerationCapExceeded,
    InvalidInput,
    InvalidPattern,
    InvalidSequence,
    LengthMismatch,
)

Word = tuple[int, ...]
OccurrenceSet = tuple[int, ...]

DEFAULT_MAX_N = 9
MAX_N_ENV = "INVWILF_MAX_N"


# ---------------------------------------------------------------------------
# text format
# ---------------------------------------------------------------------------

def parse_word(text: str) -> Word:
    """Parse ``"002111110"`` or ``"0,1,10"`` / ``"0 1 10"`` into a tuple."""
    text = text.strip()
    if not text:
        return ()
    if "," in text or any(c.isspace() for c in text):
        parts = [t for t in text.replace(",", " ").split() if t]
    else:
        parts = list(text)
    try:
        values = tuple(int(t) for t in parts)
    except ValueError:
        raise InvalidInput(f"not a sequence of non-negative integers: {text!r}") from None
    if any(v < 0 for v in values):
        raise InvalidInput(f"negative entry in {text!r}")
    return values


def format_word(w: Iterable[int]) -> str:
    w = tuple(w)
    if all(v <= 9 for v in w):
        return "".join(map(str, w))
    return ",".join(map(str, w))


def format_positions(positions: Iterable[int]) -> str:
    return "{" + ", ".join(map(str, positions)) + "}"


# ---------------------------------------------------------------------------
# sequences
# ---------------------------------------------------------------------------

def is_invseq(w: Sequence[int]) -> bool:
    return all(0 <= v < i for i, v in enumerate(w, start=1))


def is_reversed_invseq(w: Sequence[int]) -> bool:
    n = len(w)
    return all(0 <= v <= n - i for i, v in enumerate(w, start=1))


def as_invseq(w: Union[str, Sequence[int]]) -> Word:
    w = parse_word(w) if isinstance(w, str) else tuple(w)
    if not is_invseq(w):
        raise InvalidSequence(f"{format_word(w)} is not an inversion sequence")
    return w


def reverse(s: Sequence[int]) -> Word:
    return tuple(reversed(s))


def max_n_from_env() -> int:
    raw = os.environ.get(MAX_N_ENV)
    if raw is None:
        return DEFAULT_MAX_N
    try:
        value = int(raw)
    except ValueError:
        raise InvalidInput(f"{MAX_N_ENV} must be an integer, got {raw!r}") from None
    if value < 1:
        raise InvalidInput(f"{MAX_N_ENV} must be positive")
    return value


def check_cap(n: int, max_n: int | None = None) -> None:
    """Raise if ``n`` exceeds the enumeration cap; warn when the cap was raised."""
    cap = max_n_from_env() if max_n is None else max_n
    if n > cap:
        raise EnumerationCapExceeded(
            f"n={n} exceeds the enumeration cap {cap} (set {MAX_N_ENV} or pass max_n)")
    if n > DEFAULT_MAX_N:
        warnings.warn(f"enumerating I_{n} ({factorial(n):,} sequences); this may be slow",
                      RuntimeWarning, stacklevel=3)


def enumerate_invseqs(n: int, max_n: int | None = None) -> Iterator[Word]:
    """Yield every inversion sequence of length ``n`` in lexicographic order."""
    if n < 0:
        raise InvalidInput("n must be non-negative")
    check_cap(n, max_n)
    return itertools.product(*(range(i) for i in range(1, n + 1)))


def invseq_from_permutation(perm: Sequence[int]) -> Word:
    """Entry i counts the entries left of perm[i] that are larger than it."""
    n = len(perm)
    if sorted(perm) != list(range(1, n + 1)):
        raise InvalidInput(f"not a permutation of 1..{n}: {list(perm)}")
    return tuple(sum(1 for j in range(i) if perm[j] > perm[i]) for i in range(n))


# ---------------------------------------------------------------------------
# patterns
# ---------------------------------------------------------------------------

@lru_cache(maxsize=1 << 16)
def reduce_tuple(w: Word) -> Word:
    ranks = {v: i for i, v in enumerate(sorted(set(w)))}
    return tuple(ranks[v] for v in w)


@dataclass(frozen=True, order=True)
class Pattern:
    """A reduced consecutive pattern such as ``0102``."""

    entries: Word

    def __post_init__(self):
        entries = tuple(self.entries)
        object.__setattr__(self, "entries", entries)
        if not entries:
            raise InvalidPattern("a pattern must be non-empty")
        if reduce_tuple(entries) != entries:
            raise InvalidPattern(f"{format_word(entries)} is not reduced")

    @classmethod
    def parse(cls, text: Union[str, "Pattern", Sequence[int]]) -> "Pattern":
        if isinstance(text, Pattern):
            return text
        if isinstance(text, str):
            return cls(parse_word(text))
        return cls(tuple(text))

    @property
    def r(self) -> int:
        return len(self.entries)

    @property
    def d(self) -> int:
        return max(self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def __getitem__(self, i):
        return self.entries[i]

    def __str__(self) -> str:
        return format_word(self.entries)


PatternLike = Union[Pattern, str, Sequence[int]]


def as_pattern(p: PatternLike) -> Pattern:
    return Pattern.parse(p)


def reduction(w: Sequence[int]) -> Pattern:
    """Replace the i-th smallest value of ``w`` by i - 1."""
    if len(w) == 0:
        raise EmptyWord("cannot reduce an empty word")
    return Pattern(reduce_tuple(tuple(w)))


def occurs_at(p: Pattern, s: Sequence[int], i: int) -> bool:
    """True when the window of ``s`` starting at 1-based ``i`` reduces to ``p``."""
    r = len(p.entries)
    if i < 1 or i + r - 1 > len(s):
        return False
    return reduce_tuple(tuple(s[i - 1:i - 1 + r])) == p.entries


def occurrences(p: PatternLike, s: Sequence[int]) -> OccurrenceSet:
    p = as_pattern(p)
    entries = p.entries
    r = len(entries)
    s = tuple(s)
    return tuple(i + 1 for i in range(len(s) - r + 1) if reduce_tuple(s[i:i + r]) == entries)


def contains_classical(p: PatternLike, s: Sequence[int]) -> bool:
    """Classical (not necessarily consecutive) containment, by brute force."""
    p = as_pattern(p)
    return any(reduce_tuple(sub) == p.entries
               for sub in itertools.combinations(tuple(s), len(p.entries)))


def reduced_words(length: int) -> Iterator[Word]:
    """Every reduced word of the given length, in lexicographic order."""
    if length == 0:
        yield ()
        return
    for w in itertools.product(range(length), repeat=length):
        if reduce_tuple(w) == w:
            yield w


def overlap_witness(p: PatternLike, q: PatternLike) -> Word | None:
    """A word with ``p`` at 1 and ``q`` at 1 + s sharing at least two entries, if any."""
    return _overlap_witness(as_pattern(p), as_pattern(q))


@lru_cache(maxsize=None)
def _overlap_witness(p: Pattern, q: Pattern) -> Word | None:
    # reduced words suffice: reduction preserves the reduction of every window
    if p.r != q.r:
        raise LengthMismatch(f"{p} and {q} have different lengths")
    r = p.r
    for shift in range(1, r - 1):
        for w in reduced_words(r + shift):
            if reduce_tuple(w[:r]) == p.entries and reduce_tuple(w[shift:shift + r]) == q.entries:
                return w
    return None


def is_nonoverlapping(p: PatternLike) -> bool:
    p = as_pattern(p)
    return overlap_witness(p, p) is None


def mutually_nonoverlapping(p: PatternLike, q: PatternLike) -> bool:
    return overlap_witness(p, q) is None and overlap_witness(q, p) is None
