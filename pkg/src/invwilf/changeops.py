"""Changing pattern occurrences, and the maps that change a whole set of them.

Three kinds of rule are supported:

* ``GENERIC``  -- rewrite each window through the order-preserving map from
  ``{0..d}`` onto the window's values.  Only offered when both patterns are
  non-overlapping, so windows in one occurrence set share at most an endpoint.
* ``COPY_LEFT`` -- for the overlapping families 0102/0112 and 2120/2110 the
  third entry of each occurrence is overwritten, left to right, with the
  second entry (p -> q) or the first entry (q -> p).
* ``REVERSAL`` -- 2010/2110 are served by reversing the word, running the
  matching copy-left rule on 0102/0112, and reversing back.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import Iterable, Optional, Sequence

from .core import (
    Pattern,
    PatternLike,
    Word,
    as_pattern,
    is_invseq,
    is_nonoverlapping,
    occurs_at,
    reverse,
)
from .errors import (
    DistinctValueMismatch,
    LengthMismatch,
    MissingOccurrence,
    NotAnOccurrence,
    UnsupportedPair,
)


class RuleKind(str, Enum):
    GENERIC = "generic"
    COPY_LEFT = "copy-left"
    REVERSAL = "reversal"


# (source, target) -> index of the entry copied into the third slot
_COPY_LEFT_SOURCES = {
    ("0102", "0112"): 1,
    ("0112", "0102"): 0,
    ("2120", "2110"): 1,
    ("2110", "2120"): 0,
}

_REVERSAL_PAIRS = {("2010", "2110"), ("2110", "2010")}


@dataclass(frozen=True)
class ChangeRule:
    source: Pattern
    target: Pattern
    kind: RuleKind
    inner: Optional["ChangeRule"] = None
    copy_offset: int = 0

    def reversed(self) -> "ChangeRule":
        """The rule for the opposite direction."""
        return rule_for(self.target, self.source)

    def __str__(self) -> str:
        return f"{self.source}->{self.target} ({self.kind.value})"


def is_changeable(p: PatternLike, q: PatternLike) -> bool:
    """Whether every occurrence of ``p`` in an inversion sequence can be changed to ``q``.

    Checks ``q_i <= max({p_j : j <= i} U {p_j - j + 1 : j > i})`` for each i
    (1-based indices).
    """
    p, q = as_pattern(p), as_pattern(q)
    if p.r != q.r:
        raise LengthMismatch(f"{p} and {q} have different lengths")
    r = p.r
    for i in range(1, r + 1):
        candidates = [p[j - 1] for j in range(1, i + 1)]
        candidates += [p[j - 1] - j + 1 for j in range(i + 1, r + 1)]
        if q[i - 1] > max(candidates):
            return False
    return True


def generic_compatible(p: Pattern, q: Pattern) -> bool:
    return (p.r == q.r and p[0] == q[0] and p[-1] == q[-1] and p.d == q.d)


def rule_for(source: PatternLike, target: PatternLike) -> ChangeRule:
    """Look up (or build) the change rule for an ordered pattern pair."""
    return _rule_for(as_pattern(source), as_pattern(target))


@lru_cache(maxsize=None)
def _rule_for(p: Pattern, q: Pattern) -> ChangeRule:
    key = (str(p), str(q))
    if key in _COPY_LEFT_SOURCES:
        return ChangeRule(p, q, RuleKind.COPY_LEFT, copy_offset=_COPY_LEFT_SOURCES[key])
    if key in _REVERSAL_PAIRS:
        inner = rule_for(p.entries[::-1], q.entries[::-1])
        return ChangeRule(p, q, RuleKind.REVERSAL, inner)
    if p.r != q.r:
        raise LengthMismatch(f"{p} and {q} have different lengths")
    if not generic_compatible(p, q):
        raise UnsupportedPair(f"{p} and {q} must agree on first/last entries and maximum")
    if not (is_changeable(p, q) and is_changeable(q, p)):
        raise UnsupportedPair(f"{p} and {q} are not interchangeable")
    if not (is_nonoverlapping(p) and is_nonoverlapping(q)):
        raise UnsupportedPair(
            f"no simultaneous change is defined for overlapping patterns {p}, {q}")
    return ChangeRule(p, q, RuleKind.GENERIC)


def change_occurrence(s: Sequence[int], i: int, rule: ChangeRule) -> Word:
    """Rewrite the occurrence of ``rule.source`` at ``i`` into ``rule.target``."""
    p, q = rule.source, rule.target
    if not occurs_at(p, s, i):
        raise NotAnOccurrence(f"{p} does not occur at position {i}")
    r = p.r
    window = s[i - 1:i - 1 + r]
    values = sorted(set(window))
    if len(values) != p.d + 1 or q.d != p.d:
        raise DistinctValueMismatch(
            f"window has {len(values)} distinct values, pattern needs {q.d + 1}")
    out = list(s)
    out[i - 1:i - 1 + r] = [values[v] for v in q.entries]
    return tuple(out)


def is_valid_change(s: Sequence[int], i: int, rule: ChangeRule) -> bool:
    """Whether changing the occurrence at ``i`` keeps ``s`` an inversion sequence."""
    if rule.kind is RuleKind.GENERIC:
        changed = change_occurrence(s, i, rule)
    else:
        changed = phi_geq(s, (i,), rule)
    return is_invseq(changed)


def _require_occurrences(s: Sequence[int], T: Iterable[int], p: Pattern) -> None:
    for i in T:
        if not occurs_at(p, s, i):
            raise MissingOccurrence(i, f"{p} does not occur at position {i}")


def phi_geq(s: Sequence[int], T: Iterable[int], rule: ChangeRule) -> Word:
    """Change the occurrences of ``rule.source`` at every position of ``T``.

    All positions are checked against the input first; copy-left rules then
    run left to right, so an earlier copy may alter a later window.
    """
    s = tuple(s)
    T = sorted(T)
    if rule.kind is RuleKind.REVERSAL:
        n, r = len(s), rule.source.r
        _require_occurrences(s, T, rule.source)
        mirrored = [n - i - r + 2 for i in T]
        return reverse(phi_geq(reverse(s), mirrored, rule.inner))
    _require_occurrences(s, T, rule.source)
    if rule.kind is RuleKind.GENERIC:
        for i in T:
            s = change_occurrence(s, i, rule)
        return s
    offset = rule.copy_offset
    out = list(s)
    for i in T:
        out[i + 1] = out[i - 1 + offset]
    return tuple(out)


# rules the bijection layer knows how to drive, keyed by unordered pair
SUPPORTED_PAIRS: tuple[tuple[str, str], ...] = (
    ("1000", "1110"),
    ("2100", "2210"),
    ("0102", "0112"),
    ("2120", "2110"),
    ("2010", "2110"),
)
