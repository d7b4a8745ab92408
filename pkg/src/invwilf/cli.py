"""Command-line front end.

Exit codes: 0 success, 1 malformed input or other error, 2 incompatible
pattern pair or method, 3 a verification failed (a witness is printed).
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from typing import Optional, Sequence

from . import verify
from .bijections import DEFAULT_GUARD, iterative_map, phi_eq, render_trace
from .changeops import rule_for
from .core import (
    DEFAULT_MAX_N,
    as_invseq,
    as_pattern,
    enumerate_invseqs,
    format_word,
    max_n_from_env,
    occurrences,
)
from .errors import InvalidInput, InvWilfError, MismatchWitness, UnsupportedPair
from .exchange import Family, exchange, family_for
from .render import render_exchange_diagram, render_sequence

EXIT_OK, EXIT_ERROR, EXIT_INCOMPATIBLE, EXIT_FAILED = 0, 1, 2, 3


@dataclass
class CliConfig:
    max_n: int = DEFAULT_MAX_N
    guard: int = DEFAULT_GUARD
    workers: int = 1
    json: bool = False

    def __post_init__(self):
        if self.max_n < 1 or self.guard < 1:
            raise InvalidInput("caps must be positive")
        if self.workers < 1:
            raise InvalidInput("worker count must be at least 1")


def _emit(cfg: CliConfig, text: str, payload: dict) -> None:
    if cfg.json:
        print(json.dumps(payload, indent=2, ensure_ascii=False))
    else:
        print(text)


def cmd_map(args, cfg: CliConfig) -> int:
    s = as_invseq(args.seq)
    src, dst = as_pattern(args.source), as_pattern(args.target)
    calls = depth = None
    if args.method == "recursive":
        res = phi_eq(s, rule_for(src, dst), guard=cfg.guard, record=False)
        image, calls, depth = res.image, res.calls, res.depth
    elif args.method == "iterative":
        image = iterative_map(s, rule_for(src, dst), guard=cfg.guard)
    else:
        image = verify.exchange_map(src, dst)(s)
    payload = {
        "input": format_word(s), "output": format_word(image), "method": args.method,
        "from": str(src), "to": str(dst),
        "occurrences_before": {str(src): list(occurrences(src, s)), str(dst): list(occurrences(dst, s))},
        "occurrences_after": {str(src): list(occurrences(src, image)),
                              str(dst): list(occurrences(dst, image))},
    }
    if calls is not None:
        payload.update(calls=calls, depth=depth)
    _emit(cfg, format_word(image), payload)
    return EXIT_OK


def cmd_trace(args, cfg: CliConfig) -> int:
    s = as_invseq(args.seq)
    res = phi_eq(s, rule_for(args.source, args.target), guard=cfg.guard)
    payload = {"calls": res.calls, "depth": res.depth, "trace": res.trace.to_dict()}
    _emit(cfg, render_trace(res.trace).rstrip("\n"), payload)
    return EXIT_OK


def cmd_verify(args, cfg: CliConfig) -> int:
    check = verify.check_reciprocal if args.check == "reciprocal" else verify.check_super_strong
    report = check(args.p, args.q, args.n, workers=cfg.workers, max_n=cfg.max_n)
    _emit(cfg, report.summary(), report.to_json())
    return EXIT_OK if report.holds else EXIT_FAILED


def cmd_classify(args, cfg: CliConfig) -> int:
    result = verify.classify_length4(args.n, workers=cfg.workers, max_n=cfg.max_n)
    lines = [f"resolution n<={result.n}: {len(result.multi_classes)} multi-pattern classes, "
             f"{len(result.singletons)} singletons (finite-n evidence)"]
    lines += ["  {" + ", ".join(c) + "}" for c in result.multi_classes]
    if result.matches_expected:
        lines.append("matches the expected 14 classes")
    else:
        diff = result.difference()
        lines.append("differs from the expected classes:")
        lines += ["  unexpected {" + ", ".join(c) + "}" for c in diff["unexpected"]]
        lines += ["  missing    {" + ", ".join(c) + "}" for c in diff["missing"]]
    _emit(cfg, "\n".join(lines), result.to_json())
    return EXIT_OK if result.matches_expected else EXIT_FAILED


def cmd_enumerate(args, cfg: CliConfig) -> int:
    avoid = as_pattern(args.avoid) if args.avoid else None
    if args.list:
        seqs = [s for s in enumerate_invseqs(args.n, cfg.max_n)
                if avoid is None or not occurrences(avoid, s)]
        payload = {"n": args.n, "avoid": args.avoid, "count": len(seqs),
                   "sequences": [format_word(s) for s in seqs]}
        _emit(cfg, "\n".join(format_word(s) for s in seqs), payload)
        return EXIT_OK
    if avoid is None:
        count = sum(1 for _ in enumerate_invseqs(args.n, cfg.max_n))
    else:
        dist = verify.joint_distribution(avoid, avoid, args.n, workers=cfg.workers, max_n=cfg.max_n)
        count = dist.marginal("p").get((), 0)
    _emit(cfg, str(count), {"n": args.n, "avoid": args.avoid, "count": count})
    return EXIT_OK


def cmd_render(args, cfg: CliConfig) -> int:
    s = as_invseq(args.seq)
    if args.exchange:
        fam = family_for(*args.exchange.split("/")) if "/" in args.exchange else Family[args.exchange]
        mid = exchange(s, fam)
        text = render_exchange_diagram(s, mid, exchange(mid, fam), fam, args.format)
    else:
        text = render_sequence(s, args.patterns or (), args.format)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
        _emit(cfg, f"wrote {args.output}", {"output": args.output, "format": args.format})
    else:
        sys.stdout.write(text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="invwilf",
        description="Bijections and brute-force checks for consecutive patterns in inversion sequences.")
    parser.add_argument("--json", action="store_true", help="structured output")
    parser.add_argument("--workers", type=int, default=None,
                        help="processes for exhaustive scans (default: all CPUs)")
    parser.add_argument("--max-n", type=int, default=None,
                        help="enumeration cap (default 9, or $INVWILF_MAX_N)")
    parser.add_argument("--guard", type=int, default=DEFAULT_GUARD,
                        help="maximum change-map applications per computation")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("map", help="apply a bijection to one sequence")
    p.add_argument("seq")
    p.add_argument("--from", dest="source", required=True)
    p.add_argument("--to", dest="target", required=True)
    p.add_argument("--method", choices=("recursive", "iterative", "exchange"), default="recursive")
    p.set_defaults(func=cmd_map)

    p = sub.add_parser("trace", help="show the recursive computation")
    p.add_argument("seq")
    p.add_argument("--from", dest="source", default="0102")
    p.add_argument("--to", dest="target", default="0112")
    p.set_defaults(func=cmd_trace)

    p = sub.add_parser("verify", help="check an equivalence by exhaustive enumeration")
    p.add_argument("--p", required=True)
    p.add_argument("--q", required=True)
    p.add_argument("--check", choices=("superstrong", "reciprocal"), default="superstrong")
    p.add_argument("--n", type=int, default=8)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("classify", help="group the length-4 patterns by distribution")
    p.add_argument("--n", type=int, default=8)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("enumerate", help="count or list inversion sequences")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--avoid", help="only sequences with no occurrence of this pattern")
    p.add_argument("--list", action="store_true", help="print the sequences, not just the count")
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("render", help="draw a lattice-path or replacement diagram")
    p.add_argument("seq")
    p.add_argument("--patterns", nargs="*", help="up to two patterns to highlight (p, then q)")
    p.add_argument("--exchange", metavar="FAMILY",
                   help="draw the replacement diagram instead, e.g. 0102/0112")
    p.add_argument("--format", choices=("svg", "tikz"), default="svg")
    p.add_argument("--output", "-o")
    p.set_defaults(func=cmd_render)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = CliConfig(
            max_n=args.max_n if args.max_n is not None else max_n_from_env(),
            guard=args.guard,
            workers=args.workers if args.workers is not None else verify.default_workers(),
            json=args.json,
        )
        return args.func(args, cfg)
    except (UnsupportedPair, KeyError) as exc:
        print(f"error: incompatible pair or method: {exc}", file=sys.stderr)
        return EXIT_INCOMPATIBLE
    except MismatchWitness as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAILED
    except (InvWilfError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
