"""Single-pass exchange of two overlapping patterns.

The pass walks positions left to right.  At position ``i`` it looks at the
window starting at ``i - 2``:

* an original ``p`` there: stash ``s[i]`` and copy ``s[i-1]`` into ``s[i]``;
* an original ``q`` there: stash ``s[i]`` and copy ``s[i-2]`` into ``s[i]``;
* a ``p`` created by an earlier replacement: swap ``s[i]`` with the stash.

"Original" means present in the input, even if an earlier replacement has
since destroyed it.  The result swaps the occurrence sets of ``p`` and ``q``
and applying the pass twice is the identity.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Sequence

from .core import Pattern, Word, format_word, occurrences, reduce_tuple, reverse
from .errors import AuditFailure, TransientQObserved


class Family(Enum):
    F0102_0112 = ("0102", "0112", True)
    F2120_2110 = ("2120", "2110", False)

    def __init__(self, p: str, q: str, ascending: bool):
        self.p = Pattern.parse(p)
        self.q = Pattern.parse(q)
        self.ascending = ascending

    def before(self, a: int, b: int) -> bool:
        """The strict comparison used by this family's definitions."""
        return a < b if self.ascending else a > b


class OccurrenceKind(str, Enum):
    ORIGINAL_P = "original-p"
    ORIGINAL_Q = "original-q"
    TRANSIENT_P = "transient-p"
    TRANSIENT_Q = "transient-q"


REPLACING_KINDS = frozenset(
    {OccurrenceKind.ORIGINAL_P, OccurrenceKind.ORIGINAL_Q, OccurrenceKind.TRANSIENT_P})


@dataclass(frozen=True)
class Replacement:
    position: int          # 1-based position whose entry was overwritten
    kind: OccurrenceKind   # what sat at position - 2 when the replacement fired
    displaced: int
    value: int
    source: Optional[int]  # position copied from; None when the stash was used


def family_for(p: str, q: str) -> Family:
    for fam in Family:
        if {str(fam.p), str(fam.q)} == {str(p), str(q)}:
            return fam
    raise KeyError((p, q))


def exchange_pass(s: Sequence[int], family: Family = Family.F0102_0112) -> tuple[Word, list[Replacement]]:
    """Run the exchange and return the output with its replacement log."""
    p, q = family.p.entries, family.q.entries
    seq = list(s)
    n = len(seq)
    orig_p = set(occurrences(family.p, seq))
    orig_q = set(occurrences(family.q, seq))
    last: Optional[int] = None
    log: list[Replacement] = []
    for i in range(3, n + 1):
        k = i - 2
        if k in orig_p:
            last, seq[i - 1] = seq[i - 1], seq[i - 2]
            log.append(Replacement(i, OccurrenceKind.ORIGINAL_P, last, seq[i - 1], i - 1))
        elif k in orig_q:
            last, seq[i - 1] = seq[i - 1], seq[i - 3]
            log.append(Replacement(i, OccurrenceKind.ORIGINAL_Q, last, seq[i - 1], i - 2))
        elif k + 3 <= n:
            window = reduce_tuple(tuple(seq[k - 1:k + 3]))
            if window == p:
                seq[i - 1], last = last, seq[i - 1]
                log.append(Replacement(i, OccurrenceKind.TRANSIENT_P, last, seq[i - 1], None))
            elif window == q:
                raise TransientQObserved(
                    f"transient {family.q} at {k} while exchanging {format_word(s)}")
    return tuple(seq), log


def exchange(s: Sequence[int], family: Family = Family.F0102_0112) -> Word:
    return exchange_pass(s, family)[0]


def exchange_2010_2110(s: Sequence[int]) -> Word:
    """Swap the occurrences of 2010 and 2110 via the reversed 0102/0112 exchange."""
    return reverse(exchange(reverse(s), Family.F0102_0112))


def classify_occurrence(s: Sequence[int], s_current: Sequence[int], i: int,
                        family: Family = Family.F0102_0112) -> Optional[OccurrenceKind]:
    """Classify position ``i`` as an original or transient occurrence.

    ``s`` is the input of the pass and ``s_current`` the sequence whose entry
    at ``i`` is compared (the output, or a snapshot taken mid-pass).
    """
    lt = family.before
    a, b, c, d = s[i - 1], s[i], s[i + 1], s[i + 2]
    a_now = s_current[i - 1]
    original_p = a == c and lt(a, b) and lt(b, d)
    original_q = lt(a, b) and b == c and lt(c, d)
    if original_p:
        return OccurrenceKind.ORIGINAL_P
    if original_q:
        return OccurrenceKind.ORIGINAL_Q
    if a_now == c and lt(a_now, b) and lt(b, d):
        return OccurrenceKind.TRANSIENT_P
    if lt(a_now, b) and b == c and lt(c, d):
        return OccurrenceKind.TRANSIENT_Q
    return None


def classify_all(s: Sequence[int], s_out: Sequence[int],
                 family: Family = Family.F0102_0112) -> dict[int, OccurrenceKind]:
    out = {}
    for i in range(1, len(s) - 2):
        kind = classify_occurrence(s, s_out, i, family)
        if kind is not None:
            out[i] = kind
    return out


def transient_p_positions(s: Sequence[int], family: Family = Family.F0102_0112) -> set[int]:
    s_out = exchange(s, family)
    return {i for i, k in classify_all(s, s_out, family).items()
            if k is OccurrenceKind.TRANSIENT_P}


@dataclass
class AuditReport:
    input: Word
    output: Word
    family: Family
    replacements: list[Replacement]
    classification: dict[int, OccurrenceKind]
    checks: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "family": self.family.name,
            "input": format_word(self.input),
            "output": format_word(self.output),
            "replacements": [
                {"position": r.position, "kind": r.kind.value, "displaced": r.displaced,
                 "value": r.value, "source": r.source}
                for r in self.replacements],
            "checks": self.checks,
        }


def audit_pass(s: Sequence[int], family: Family = Family.F0102_0112) -> AuditReport:
    """Run the exchange and check the structural facts behind its correctness.

    Raises :class:`AuditFailure` naming the first violated property.
    """
    s = tuple(s)
    out, log = exchange_pass(s, family)
    kinds = classify_all(s, out, family)
    lt = family.before
    report = AuditReport(s, out, family, log, kinds)
    n = len(s)

    for rep in log:
        i = rep.position
        if kinds.get(i - 2) is not rep.kind:
            raise AuditFailure(i, "third-position", f"branch {rep.kind.value}, "
                               f"classified {kinds.get(i - 2)}")
        if i >= n or not lt(s[i - 1], s[i]):
            raise AuditFailure(i, "replaced-entry-before-next")
        if not lt(rep.value, s[i]):
            raise AuditFailure(i, "replacement-before-next")
    report.checks += ["third-position", "replaced-entry-before-next", "replacement-before-next"]

    for k, kind in kinds.items():
        if kind is OccurrenceKind.TRANSIENT_Q:
            raise AuditFailure(k, "no-transient-q")
        if kind is OccurrenceKind.TRANSIENT_P and out[k + 1] == out[k - 1]:
            raise AuditFailure(k, "transient-p-broken")
    report.checks += ["no-transient-q", "transient-p-broken"]

    for i in range(1, n + 1):
        changed = out[i - 1] != s[i - 1]
        if changed != (kinds.get(i - 2) in REPLACING_KINDS):
            raise AuditFailure(i, "changed-iff-replacing-kind")
    report.checks.append("changed-iff-replacing-kind")
    return report
