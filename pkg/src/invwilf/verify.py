"""Brute-force verification over all inversion sequences of a given length.

I_n is split into shards by fixing a prefix; each shard is materialised as a
numpy block (prefix broadcast against a shared suffix grid) and reduced to a
private count vector.  Shards are merged by addition, so any number of worker
processes can be used.

Occurrence sets are encoded as bitmasks: bit ``i - 1`` set means the pattern
occurs at 1-based position ``i``.  All verdicts are finite-n evidence only;
every report records the lengths that were examined.
"""
from __future__ import annotations

import itertools
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from math import factorial
from typing import Callable, Iterable, Optional, Sequence

import numpy as np

from .bijections import phi_eq
from .changeops import rule_for
from .core import (
    OccurrenceSet,
    Pattern,
    PatternLike,
    Word,
    as_pattern,
    check_cap,
    enumerate_invseqs,
    format_word,
    is_invseq,
    occurrences,
    reduced_words,
)
from .errors import InvalidInput, MismatchWitness, UnsupportedPair
from .exchange import exchange, exchange_2010_2110, family_for

BLOCK_ROWS = 60_480

# the generalized Wilf-equivalence classes of length-4 patterns with more than one member
EXPECTED_CLASSES: tuple[tuple[str, ...], ...] = (
    ("0102", "0112"),
    ("0021", "0121"),
    ("1002", "1012", "1102"),
    ("0100", "0110"),
    ("2013", "2103"),
    ("1200", "1210", "1220"),
    ("0211", "0221"),
    ("1000", "1110"),
    ("1001", "1011", "1101"),
    ("2100", "2210"),
    ("2001", "2011", "2101", "2201"),
    ("2012", "2102"),
    ("2010", "2110", "2120"),
    ("3012", "3102"),
)


def all_patterns(r: int) -> list[Pattern]:
    """Every consecutive pattern of length ``r``, in lexicographic order."""
    if r < 1:
        raise InvalidInput("pattern length must be positive")
    return [Pattern(w) for w in reduced_words(r)]


def mask_to_positions(mask: int) -> OccurrenceSet:
    return tuple(i + 1 for i in range(mask.bit_length()) if mask >> i & 1)


def positions_to_mask(positions: Iterable[int]) -> int:
    return sum(1 << (i - 1) for i in positions)


def default_workers() -> int:
    return os.cpu_count() or 1


# ---------------------------------------------------------------------------
# sharded scan
# ---------------------------------------------------------------------------

def _prefix_length(n: int) -> int:
    k = 0
    while factorial(n) // factorial(k) > BLOCK_ROWS:
        k += 1
    return k


@lru_cache(maxsize=8)
def _suffix_grid(n: int, k: int) -> np.ndarray:
    if k == n:
        return np.zeros((1, 0), dtype=np.int8)
    axes = [np.arange(i, dtype=np.int8) for i in range(k + 1, n + 1)]
    grid = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1)
    return grid.reshape(-1, n - k)


def _block(n: int, k: int, prefix: Sequence[int]) -> np.ndarray:
    suffix = _suffix_grid(n, k)
    block = np.empty((len(suffix), n), dtype=np.int8)
    block[:, :k] = prefix
    block[:, k:] = suffix
    return block


def _sign(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return np.sign(a.astype(np.int16) - b)


def occurrence_masks(block: np.ndarray, p: Pattern) -> np.ndarray:
    """Bitmask of occurrences of ``p`` for every row of ``block``."""
    r = p.r
    n = block.shape[1]
    masks = np.zeros(len(block), dtype=np.int64)
    pairs = [(a, b, np.sign(p[a] - p[b])) for a, b in itertools.combinations(range(r), 2)]
    for i in range(n - r + 1):
        hit = np.ones(len(block), dtype=bool)
        for a, b, want in pairs:
            hit &= _sign(block[:, i + a], block[:, i + b]) == want
        masks |= hit.astype(np.int64) << i
    return masks


@lru_cache(maxsize=4)
def _code_table(r: int) -> tuple[np.ndarray, tuple[Pattern, ...]]:
    """Lookup from pairwise-comparison code to pattern index."""
    pats = tuple(all_patterns(r))
    index = {p.entries: j for j, p in enumerate(pats)}
    pairs = list(itertools.combinations(range(r), 2))
    table = np.full(3 ** len(pairs), -1, dtype=np.int16)
    for w in pats:
        code = sum((1 + int(np.sign(w[a] - w[b]))) * 3 ** e for e, (a, b) in enumerate(pairs))
        table[code] = index[w.entries]
    return table, pats


def window_pattern_ids(block: np.ndarray, r: int) -> np.ndarray:
    """Index (into ``all_patterns(r)``) of the reduction of every length-r window."""
    table, _ = _code_table(r)
    pairs = list(itertools.combinations(range(r), 2))
    n = block.shape[1]
    ids = np.empty((len(block), n - r + 1), dtype=np.int16)
    for i in range(n - r + 1):
        code = np.zeros(len(block), dtype=np.int64)
        for e, (a, b) in enumerate(pairs):
            code += (1 + _sign(block[:, i + a], block[:, i + b])) * 3 ** e
        ids[:, i] = table[code]
    return ids


def _joint_kernel(block: np.ndarray, p: Pattern, q: Pattern) -> np.ndarray:
    width = max(block.shape[1] - p.r + 1, 0)
    key = (occurrence_masks(block, p) << width) | occurrence_masks(block, q)
    return np.bincount(key, minlength=1 << (2 * width))


def _all_kernel(block: np.ndarray, r: int) -> np.ndarray:
    _, pats = _code_table(r)
    width = max(block.shape[1] - r + 1, 0)
    rows = np.arange(len(block))
    masks = np.zeros((len(block), len(pats)), dtype=np.int64)
    if width:
        ids = window_pattern_ids(block, r)
        for i in range(width):
            masks[rows, ids[:, i]] |= 1 << i
    key = masks + (np.arange(len(pats), dtype=np.int64) << width)
    return np.bincount(key.ravel(), minlength=len(pats) << width)


def _run_shards(args) -> np.ndarray:
    n, k, prefixes, kind, payload = args
    total = None
    for prefix in prefixes:
        block = _block(n, k, prefix)
        if kind == "joint":
            counts = _joint_kernel(block, *payload)
        else:
            counts = _all_kernel(block, payload)
        total = counts if total is None else total + counts
    return total


def _scan(n: int, kind: str, payload, workers: Optional[int]) -> np.ndarray:
    k = _prefix_length(n)
    prefixes = list(itertools.product(*(range(i) for i in range(1, k + 1))))
    workers = workers or default_workers()
    chunks = [prefixes[j::workers] for j in range(min(workers, len(prefixes)))]
    jobs = [(n, k, c, kind, payload) for c in chunks]
    if len(jobs) == 1:
        return _run_shards(jobs[0])
    with ProcessPoolExecutor(max_workers=len(jobs)) as pool:
        return sum(pool.map(_run_shards, jobs))


def _first_row(n: int, p: Pattern, q: Pattern, mask_p: int, mask_q: int) -> Optional[Word]:
    """Lexicographically first sequence in I_n with the given occurrence masks."""
    k = _prefix_length(n)
    for prefix in itertools.product(*(range(i) for i in range(1, k + 1))):
        block = _block(n, k, prefix)
        hit = np.flatnonzero((occurrence_masks(block, p) == mask_p)
                             & (occurrence_masks(block, q) == mask_q))
        if len(hit):
            return tuple(int(v) for v in block[hit[0]])
    return None


# ---------------------------------------------------------------------------
# distributions and reports
# ---------------------------------------------------------------------------

@dataclass
class JointDistribution:
    n: int
    p: Pattern
    q: Pattern
    counts: dict[tuple[OccurrenceSet, OccurrenceSet], int]

    @property
    def total(self) -> int:
        return sum(self.counts.values())

    def marginal(self, which: str = "p") -> dict[OccurrenceSet, int]:
        out: dict[OccurrenceSet, int] = {}
        for (S, T), c in self.counts.items():
            key = S if which == "p" else T
            out[key] = out.get(key, 0) + c
        return out

    def to_json(self) -> dict:
        return {
            "p": str(self.p),
            "q": str(self.q),
            "n": self.n,
            "counts": [{"S": list(S), "T": list(T), "count": c}
                       for (S, T), c in sorted(self.counts.items())],
        }


def joint_distribution(p: PatternLike, q: PatternLike, n: int, *,
                       workers: Optional[int] = None, max_n: Optional[int] = None) -> JointDistribution:
    """Exact counts of ``(Em(p, e), Em(q, e))`` over every ``e`` in I_n."""
    p, q = as_pattern(p), as_pattern(q)
    check_cap(n, max_n)
    width = max(n - p.r + 1, 0)
    raw = _scan(n, "joint", (p, q), workers)
    counts = {}
    for key in np.flatnonzero(raw):
        key = int(key)
        counts[(mask_to_positions(key >> width), mask_to_positions(key & ((1 << width) - 1)))] = int(raw[key])
    return JointDistribution(n, p, q, counts)


def pattern_distributions(n: int, r: int = 4, *, workers: Optional[int] = None,
                          max_n: Optional[int] = None) -> dict[Pattern, np.ndarray]:
    """For every pattern of length ``r``, counts indexed by occurrence mask over I_n."""
    check_cap(n, max_n)
    _, pats = _code_table(r)
    width = max(n - r + 1, 0)
    raw = _scan(n, "all", r, workers).reshape(len(pats), 1 << width)
    return {p: raw[j] for j, p in enumerate(pats)}


@dataclass
class Witness:
    S: OccurrenceSet
    T: OccurrenceSet
    n: int
    count_forward: int
    count_backward: int
    example: Optional[Word] = None

    def to_json(self) -> dict:
        return {"S": list(self.S), "T": list(self.T), "n": self.n,
                "count_forward": self.count_forward, "count_backward": self.count_backward,
                "example": None if self.example is None else format_word(self.example)}


@dataclass
class EquivalenceReport:
    relation: str
    p: Pattern
    q: Pattern
    holds: bool
    n_checked: tuple[int, ...]
    witness: Optional[Witness] = None

    def summary(self) -> str:
        span = f"n={self.n_checked[0]}..{self.n_checked[-1]}" if self.n_checked else "n=()"
        verdict = "holds" if self.holds else "fails"
        text = f"{self.relation} {self.p} / {self.q}: {verdict} ({span}, finite-n evidence)"
        if self.witness is not None:
            w = self.witness
            text += (f"\nwitness at n={w.n}: S={list(w.S)} T={list(w.T)} "
                     f"forward={w.count_forward} backward={w.count_backward}")
            if w.example is not None:
                text += f" example={format_word(w.example)}"
        return text

    def to_json(self) -> dict:
        return {"relation": self.relation, "p": str(self.p), "q": str(self.q),
                "holds": self.holds, "n_checked": list(self.n_checked),
                "witness": None if self.witness is None else self.witness.to_json()}


def _lengths(n: int, n_min: Optional[int]) -> range:
    return range(1 if n_min is None else n_min, n + 1)


def _witness_order(key):
    S, T = key
    return (len(S) + len(T), S, T)


def check_super_strong(p: PatternLike, q: PatternLike, n: int, *, n_min: Optional[int] = None,
                       workers: Optional[int] = None, max_n: Optional[int] = None) -> EquivalenceReport:
    """Compare the distributions of ``Em(p)`` and ``Em(q)`` at every length up to ``n``."""
    p, q = as_pattern(p), as_pattern(q)
    checked = []
    for m in _lengths(n, n_min):
        dist = joint_distribution(p, q, m, workers=workers, max_n=max_n)
        checked.append(m)
        mp, mq = dist.marginal("p"), dist.marginal("q")
        bad = sorted((T for T in set(mp) | set(mq) if mp.get(T, 0) != mq.get(T, 0)),
                     key=lambda T: (len(T), T))
        if bad:
            T = bad[0]
            fwd, back = mp.get(T, 0), mq.get(T, 0)
            example = None
            for (S1, T1), c in sorted(dist.counts.items()):
                src = S1 if fwd > 0 else T1
                if src == T:
                    example = _first_row(m, p, q, positions_to_mask(S1), positions_to_mask(T1))
                    break
            return EquivalenceReport("super-strong", p, q, False, tuple(checked),
                                     Witness(T, T, m, fwd, back, example))
    return EquivalenceReport("super-strong", p, q, True, tuple(checked))


def check_reciprocal(p: PatternLike, q: PatternLike, n: int, *, n_min: Optional[int] = None,
                     workers: Optional[int] = None, max_n: Optional[int] = None) -> EquivalenceReport:
    """Test whether ``(Em(p), Em(q))`` is symmetric in distribution at every length up to ``n``.

    A failing report carries the asymmetric key with the fewest positions,
    preferring keys whose mirror image never occurs, and the lexicographically
    first sequence realising it.
    """
    p, q = as_pattern(p), as_pattern(q)
    checked = []
    for m in _lengths(n, n_min):
        dist = joint_distribution(p, q, m, workers=workers, max_n=max_n)
        checked.append(m)
        counts = dist.counts
        bad = [key for key, c in counts.items() if counts.get((key[1], key[0]), 0) != c]
        if bad:
            bad.sort(key=lambda k: (counts.get((k[1], k[0]), 0) != 0,) + _witness_order(k))
            S, T = bad[0]
            example = _first_row(m, p, q, positions_to_mask(S), positions_to_mask(T))
            return EquivalenceReport("reciprocal", p, q, False, tuple(checked),
                                     Witness(S, T, m, counts[(S, T)], counts.get((T, S), 0), example))
    return EquivalenceReport("reciprocal", p, q, True, tuple(checked))


@dataclass
class ClassificationResult:
    n: int
    classes: list[tuple[str, ...]]
    expected: tuple[tuple[str, ...], ...] = EXPECTED_CLASSES

    @property
    def multi_classes(self) -> list[tuple[str, ...]]:
        return sorted(c for c in self.classes if len(c) > 1)

    @property
    def singletons(self) -> list[str]:
        return sorted(c[0] for c in self.classes if len(c) == 1)

    @property
    def matches_expected(self) -> bool:
        return self.multi_classes == sorted(tuple(sorted(c)) for c in self.expected)

    def difference(self) -> dict:
        got = set(self.multi_classes)
        want = {tuple(sorted(c)) for c in self.expected}
        return {"unexpected": sorted(got - want), "missing": sorted(want - got)}

    def to_json(self) -> dict:
        return {"n": self.n, "resolution": f"n<={self.n}", "matches_expected": self.matches_expected,
                "classes": [list(c) for c in self.multi_classes],
                "singletons": self.singletons, **self.difference()}


def classify_length4(n: int, *, workers: Optional[int] = None,
                     max_n: Optional[int] = None) -> ClassificationResult:
    """Group the 75 length-4 patterns by their occurrence-set distributions at lengths 4..n."""
    check_cap(n, max_n)
    pats = all_patterns(4)
    signature: dict[Pattern, list[bytes]] = {p: [] for p in pats}
    for m in range(4, n + 1):
        dists = pattern_distributions(m, 4, workers=workers, max_n=max_n)
        for p in pats:
            signature[p].append(dists[p].tobytes())
    groups: dict[tuple, list[str]] = {}
    for p in pats:
        groups.setdefault(tuple(signature[p]), []).append(str(p))
    classes = sorted(tuple(sorted(g)) for g in groups.values())
    return ClassificationResult(n, classes)


# ---------------------------------------------------------------------------
# constructive cross-checks
# ---------------------------------------------------------------------------

@dataclass
class CrosscheckReport:
    p: Pattern
    q: Pattern
    n: int
    method: str
    checked: int
    consistent: bool = True

    def summary(self) -> str:
        return (f"{self.method} {self.p}->{self.q} on I_{self.n}: "
                f"{self.checked} sequences, {'consistent' if self.consistent else 'INCONSISTENT'}")


def exchange_map(p: PatternLike, q: PatternLike) -> Callable[[Sequence[int]], Word]:
    p, q = str(as_pattern(p)), str(as_pattern(q))
    if {p, q} == {"2010", "2110"}:
        return exchange_2010_2110
    try:
        fam = family_for(p, q)
    except KeyError:
        raise UnsupportedPair(f"no exchange is defined for {p}/{q}") from None
    return lambda s: exchange(s, fam)


def bijection_crosscheck(p: PatternLike, q: PatternLike, n: int, method: str = "recursive", *,
                         max_n: Optional[int] = None) -> CrosscheckReport:
    """Confirm a constructive map realises the counted bijection on I_n.

    ``recursive`` checks ``Em(q, image) = Em(p, e)``; ``exchange`` also checks
    ``Em(p, image) = Em(q, e)``.  Both check the image is an inversion sequence
    and that the map is injective.
    """
    p, q = as_pattern(p), as_pattern(q)
    if method == "recursive":
        rule = rule_for(p, q)

        def image_of(s):
            return phi_eq(s, rule, record=False).image
    elif method == "exchange":
        image_of = exchange_map(p, q)
    else:
        raise InvalidInput(f"unknown method {method!r}")
    seen = set()
    count = 0
    for s in enumerate_invseqs(n, max_n):
        img = image_of(s)
        if not is_invseq(img):
            raise MismatchWitness(s, "image is not an inversion sequence")
        if occurrences(q, img) != occurrences(p, s):
            raise MismatchWitness(s, f"Em({q}) of the image differs from Em({p}) of the input")
        if method == "exchange" and occurrences(p, img) != occurrences(q, s):
            raise MismatchWitness(s, f"Em({p}) of the image differs from Em({q}) of the input")
        if img in seen:
            raise MismatchWitness(s, "map is not injective")
        seen.add(img)
        count += 1
    return CrosscheckReport(p, q, n, method, count)


# ---------------------------------------------------------------------------
# generic exhaustive sweep
# ---------------------------------------------------------------------------

def _sweep_shard(args):
    n, k, prefixes, check = args
    failures = []
    checked = 0
    tails = list(itertools.product(*(range(i) for i in range(k + 1, n + 1))))
    for prefix in prefixes:
        for tail in tails:
            s = prefix + tail
            checked += 1
            problem = check(s)
            if problem:
                failures.append((s, problem))
    return checked, failures


def sweep(n: int, check: Callable[[Word], Optional[str]], *, workers: Optional[int] = None,
          max_n: Optional[int] = None) -> tuple[int, list[tuple[Word, str]]]:
    """Run ``check`` on every sequence in I_n; return (count, failures).

    ``check`` must be a picklable module-level callable returning a falsy value
    on success or a description of the problem.
    """
    check_cap(n, max_n)
    k = min(n, 3)
    prefixes = list(itertools.product(*(range(i) for i in range(1, k + 1))))
    workers = workers or default_workers()
    chunks = [prefixes[j::workers] for j in range(min(workers, len(prefixes)))]
    jobs = [(n, k, c, check) for c in chunks]
    if len(jobs) == 1:
        return _sweep_shard(jobs[0])
    total, failures = 0, []
    with ProcessPoolExecutor(max_workers=len(jobs)) as pool:
        for c, f in pool.map(_sweep_shard, jobs):
            total += c
            failures += f
    return total, sorted(failures)
