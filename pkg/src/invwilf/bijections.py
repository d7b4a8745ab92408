"""The recursive bijection between sequences with equal occurrence sets.

``phi_eq(s, rule)`` sends a sequence whose source-pattern occurrence set is
``T`` to one whose target-pattern occurrence set is exactly ``T``.  It applies
the change map at level ``T``; whenever the target pattern shows up at a
strictly larger set ``S``, the inverse bijection at level ``S`` is computed by
the same procedure with the rule reversed, and the level-``T`` change is
applied again.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

from .changeops import ChangeRule, RuleKind, phi_geq, rule_for
from .core import (
    OccurrenceSet,
    Word,
    format_positions,
    format_word,
    is_nonoverlapping,
    occurrences,
)
from .errors import LevelSetNotContained, RuleNotNonOverlapping, TerminationGuardExceeded

DEFAULT_GUARD = 10 ** 6


@dataclass
class Step:
    """One application of the level map (or its inverse)."""

    inverse: bool
    level_set: OccurrenceSet
    before: Word
    after: Word
    found: OccurrenceSet


@dataclass
class TraceNode:
    source: str
    target: str
    inverse: bool
    level_set: OccurrenceSet
    start: Word
    steps: list[Union[Step, "TraceNode"]] = field(default_factory=list)
    final: Optional[Word] = None

    @property
    def depth(self) -> int:
        """Deepest nesting below this node (0 when no child call was needed)."""
        kids = [c.depth + 1 for c in self.steps if isinstance(c, TraceNode)]
        return max(kids, default=0)

    def sequences(self) -> list[Word]:
        """Every sequence produced by a level-map application, in order."""
        out: list[Word] = []
        for step in self.steps:
            if isinstance(step, Step):
                out.append(step.after)
            else:
                out.extend(step.sequences())
        return out

    def to_dict(self) -> dict:
        def conv(step):
            if isinstance(step, TraceNode):
                return {"child": step.to_dict()}
            return {
                "map": "phi_inv_geq" if step.inverse else "phi_geq",
                "level_set": list(step.level_set),
                "input": format_word(step.before),
                "output": format_word(step.after),
                "occurrences": list(step.found),
            }

        return {
            "direction": [self.source, self.target],
            "inverse": self.inverse,
            "level_set": list(self.level_set),
            "input": format_word(self.start),
            "steps": [conv(s) for s in self.steps],
            "final": None if self.final is None else format_word(self.final),
        }


@dataclass
class PhiResult:
    image: Word
    calls: int
    depth: int
    trace: Optional[TraceNode] = None


class _Run:
    def __init__(self, guard: int, record: bool):
        self.guard = guard
        self.record = record
        self.calls = 0
        self.depth = 0

    def apply(self, s: Word, T: OccurrenceSet, rule: ChangeRule) -> Word:
        self.calls += 1
        if self.calls > self.guard:
            raise TerminationGuardExceeded(
                f"more than {self.guard} change-map applications")
        return phi_geq(s, T, rule)

    def solve(self, s: Word, rule: ChangeRule, inverse: bool, level: int) -> tuple[Word, Optional[TraceNode]]:
        self.depth = max(self.depth, level)
        T = occurrences(rule.source, s)
        node = None
        if self.record:
            node = TraceNode(str(rule.source), str(rule.target), inverse, T, s)
        back = rule.reversed()
        T_set = set(T)
        cur = s
        while True:
            before = cur
            cur = self.apply(cur, T, rule)
            S = occurrences(rule.target, cur)
            if node is not None:
                node.steps.append(Step(inverse, T, before, cur, S))
            if not T_set.issubset(S):
                raise LevelSetNotContained(
                    f"{format_positions(S)} does not contain {format_positions(T)} "
                    f"after changing {format_word(before)}")
            if S == T:
                break
            cur, child = self.solve(cur, back, not inverse, level + 1)
            if node is not None:
                node.steps.append(child)
        if node is not None:
            node.final = cur
        return cur, node


def phi_eq(s: Sequence[int], rule: ChangeRule, *, guard: int = DEFAULT_GUARD,
           record: bool = True) -> PhiResult:
    """Map ``s`` to the sequence whose target occurrences equal its source occurrences.

    ``calls`` counts every application of the change map or its inverse,
    including applications at an empty level set.
    """
    run = _Run(guard, record)
    image, trace = run.solve(tuple(s), rule, False, 0)
    return PhiResult(image, run.calls, run.depth, trace)


def iterative_map(s: Sequence[int], rule: ChangeRule, *, guard: int = DEFAULT_GUARD) -> Word:
    """Change every source occurrence, then undo extra target occurrences until none remain.

    Only valid when both patterns are non-overlapping; there it agrees with
    :func:`phi_eq`.
    """
    if rule.kind is not RuleKind.GENERIC or not (
            is_nonoverlapping(rule.source) and is_nonoverlapping(rule.target)):
        raise RuleNotNonOverlapping(
            f"the iterative map needs non-overlapping patterns, got {rule.source}/{rule.target}")
    return _iterate(tuple(s), rule, guard)


def _iterate(s: Word, rule: ChangeRule, guard: int) -> Word:
    back = rule.reversed()
    T = occurrences(rule.source, s)
    cur = phi_geq(s, T, rule)
    for _ in range(guard):
        extra = sorted(set(occurrences(rule.target, cur)) - set(T))
        if not extra:
            return cur
        cur = phi_geq(cur, extra, back)
    raise TerminationGuardExceeded(f"iteration did not settle within {guard} rounds")


def naive_iteration_collision_demo() -> tuple[Word, Word, Word]:
    """Two inputs that the iterative steps send to one output under 0102 -> 0112."""
    rule = rule_for("0102", "0112")
    first, second = (0, 1, 0, 2, 2, 3), (0, 1, 0, 2, 1, 3)
    image = _iterate(first, rule, DEFAULT_GUARD)
    assert image == _iterate(second, rule, DEFAULT_GUARD)
    return first, second, image


# ---------------------------------------------------------------------------
# text rendering
# ---------------------------------------------------------------------------

BAR = "  | "


def _map_name(inverse: bool, kind: str, level: OccurrenceSet) -> str:
    head = "φ⁻¹" if inverse else "φ"
    return f"{head}_{{{kind}{format_positions(level)}}}"


def render_trace(trace: TraceNode) -> str:
    """Indented text of a recursive computation, one bar unit per depth level."""
    lines = [f"We currently have p at {format_positions(trace.level_set)}; "
             f"we want q at {format_positions(trace.level_set)}."]
    _render_node(trace, 0, lines)
    lines.append(f"We finally obtain {format_word(trace.start)} ↦ {format_word(trace.final)}.")
    return "\n".join(lines) + "\n"


def _render_node(node: TraceNode, depth: int, lines: list[str]) -> None:
    outer = BAR * depth
    inner = BAR * (depth + 1)
    lines.append(f"{outer}{_map_name(node.inverse, '=', node.level_set)}({format_word(node.start)}):")
    found_letter = "p" if node.inverse else "q"
    for step in node.steps:
        if isinstance(step, TraceNode):
            _render_node(step, depth + 1, lines)
            continue
        lines.append(f"{inner}{_map_name(step.inverse, '≥', step.level_set)}"
                     f"({format_word(step.before)}) = {format_word(step.after)}")
        if step.found == step.level_set:
            lines.append(f"{inner}{found_letter} occurs at {format_positions(step.found)}, so we are done.")
        else:
            lines.append(f"{inner}{found_letter} occurs at {format_positions(step.found)}, "
                         f"so apply {_map_name(not step.inverse, '=', step.found)}")
    lines.append(f"{outer}{format_word(node.final)}")
