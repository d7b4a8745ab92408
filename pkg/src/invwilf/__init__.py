"""Consecutive patterns in inversion sequences: bijections and exhaustive checks."""
from __future__ import annotations

from .bijections import PhiResult, TraceNode, iterative_map, phi_eq, render_trace
from .changeops import ChangeRule, RuleKind, change_occurrence, is_changeable, phi_geq, rule_for
from .core import (
    Pattern,
    Word,
    as_invseq,
    enumerate_invseqs,
    format_word,
    is_invseq,
    is_nonoverlapping,
    mutually_nonoverlapping,
    occurrences,
    parse_word,
    reduction,
)
from .exchange import Family, audit_pass, exchange, exchange_2010_2110
from .render import PathDiagram, render_diagram, render_exchange_diagram
from .verify import (
    all_patterns,
    bijection_crosscheck,
    check_reciprocal,
    check_super_strong,
    classify_length4,
    joint_distribution,
)

__version__ = "0.1.0"

__all__ = [
    "ChangeRule", "Family", "PathDiagram", "Pattern", "PhiResult", "RuleKind", "TraceNode", "Word",
    "all_patterns", "as_invseq", "audit_pass", "bijection_crosscheck", "change_occurrence",
    "check_reciprocal", "check_super_strong", "classify_length4", "enumerate_invseqs", "exchange",
    "exchange_2010_2110", "format_word", "is_changeable", "is_invseq", "is_nonoverlapping",
    "iterative_map", "joint_distribution", "mutually_nonoverlapping", "occurrences", "parse_word",
    "phi_eq", "phi_geq", "reduction", "render_diagram", "render_exchange_diagram", "render_trace",
    "rule_for",
]
