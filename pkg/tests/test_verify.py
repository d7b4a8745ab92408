from __future__ import annotations

import itertools
import json
from collections import Counter
from math import factorial

import numpy as np
import pytest

from invwilf.core import Pattern, enumerate_invseqs, occurrences, parse_word, reduction
from invwilf.errors import EnumerationCapExceeded, InvalidInput, MismatchWitness, UnsupportedPair
from invwilf.verify import (
    EXPECTED_CLASSES,
    all_patterns,
    bijection_crosscheck,
    check_reciprocal,
    check_super_strong,
    classify_length4,
    joint_distribution,
    mask_to_positions,
    occurrence_masks,
    pattern_distributions,
    positions_to_mask,
    sweep,
    window_pattern_ids,
)


def tally(p, q, n):
    return Counter((occurrences(p, s), occurrences(q, s)) for s in enumerate_invseqs(n))


def no_failure(s):
    return None


def odd_last_entry(s):
    return "odd" if s and s[-1] % 2 else None


class TestPatterns:
    def test_counts(self):
        assert [str(p) for p in all_patterns(1)] == ["0"]
        assert len(all_patterns(3)) == 13
        assert len(all_patterns(4)) == 75
        assert all_patterns(4) == sorted(all_patterns(4))

    def test_bad_length(self):
        with pytest.raises(InvalidInput):
            all_patterns(0)


class TestEngine:
    def test_masks_round_trip(self):
        assert mask_to_positions(0b10101) == (1, 3, 5)
        assert positions_to_mask((1, 3, 5)) == 0b10101

    def test_occurrence_masks_agree_with_core(self):
        seqs = list(enumerate_invseqs(7))
        block = np.array(seqs, dtype=np.int8)
        for p in ("0102", "2120", "1000", "0000", "3210"):
            masks = occurrence_masks(block, Pattern.parse(p))
            assert [mask_to_positions(int(m)) for m in masks] == [occurrences(p, s) for s in seqs]

    def test_window_ids(self):
        pats = all_patterns(4)
        block = np.array([parse_word("0102230")], dtype=np.int8)
        ids = window_pattern_ids(block, 4)[0]
        s = parse_word("0102230")
        assert [str(pats[i]) for i in ids] == [str(reduction(s[i:i + 4])) for i in range(4)]
        assert [str(pats[i]) for i in ids] == ["0102", "1022", "0112", "1120"]

    @pytest.mark.parametrize("p, q", [("1000", "1110"), ("0102", "0112"), ("2010", "2120")])
    @pytest.mark.parametrize("n", [1, 4, 6, 7])
    def test_joint_distribution_matches_tally(self, p, q, n):
        dist = joint_distribution(p, q, n, workers=1)
        assert dist.counts == dict(tally(p, q, n))
        assert dist.total == factorial(n)

    def test_workers_do_not_change_the_answer(self):
        one = joint_distribution("0102", "0112", 8, workers=1)
        two = joint_distribution("0102", "0112", 8, workers=2)
        assert one.counts == two.counts

    def test_pattern_distributions_match_tally(self):
        n = 6
        seqs = list(enumerate_invseqs(n))
        dists = pattern_distributions(n, 4, workers=1)
        for p, counts in dists.items():
            want = Counter(occurrences(p, s) for s in seqs)
            got = {mask_to_positions(m): int(c) for m, c in enumerate(counts) if c}
            assert got == dict(want), str(p)

    def test_examples(self):
        assert joint_distribution("1000", "1110", 1).counts == {((), ()): 1}
        dist = joint_distribution("1000", "1110", 4)
        assert dist.counts == {((), ()): 24}
        marginal = joint_distribution("0102", "0112", 7).marginal("p")
        assert marginal == dict(Counter(occurrences("0102", s) for s in enumerate_invseqs(7)))

    def test_totals_up_to_nine(self):
        for n in range(1, 10):
            assert joint_distribution("2120", "2110", n).total == factorial(n)

    def test_cap(self):
        with pytest.raises(EnumerationCapExceeded):
            joint_distribution("0102", "0112", 10)

    def test_json_shape(self):
        data = json.loads(json.dumps(joint_distribution("0102", "0112", 5).to_json()))
        assert set(data) == {"p", "q", "n", "counts"}
        assert sum(row["count"] for row in data["counts"]) == 120
        assert set(data["counts"][0]) == {"S", "T", "count"}


class TestSuperStrong:
    @pytest.mark.parametrize("p, q", [("1000", "1110"), ("2001", "2011")])
    def test_holds(self, p, q):
        report = check_super_strong(p, q, 8)
        assert report.holds and report.n_checked == tuple(range(1, 9))
        assert "finite-n evidence" in report.summary()

    def test_fails_across_classes(self):
        report = check_super_strong("0102", "0021", 7)
        assert not report.holds
        w = report.witness
        assert w is not None and w.count_forward != w.count_backward
        assert w.example is not None
        assert (occurrences("0102", w.example) == w.T) or (occurrences("0021", w.example) == w.T)

    def test_symmetric_and_reflexive(self):
        assert check_super_strong("0102", "0102", 7).holds
        for p, q in [("0102", "0021"), ("1000", "1110"), ("0100", "0110"), ("3012", "3021")]:
            assert check_super_strong(p, q, 7).holds == check_super_strong(q, p, 7).holds


class TestReciprocal:
    def test_holds(self):
        assert check_reciprocal("0102", "0112", 8).holds

    def test_witness_from_the_figure_sequence(self):
        report = check_reciprocal("2010", "2120", 8)
        assert not report.holds and report.n_checked[-1] == 8
        w = report.witness
        assert (w.S, w.T) == ((5,), (3,))
        assert w.count_backward == 0 and w.count_forward > 0
        assert w.example == parse_word("00212010")

    @pytest.mark.parametrize("p, q", [("1000", "1110"), ("2100", "2210")])
    def test_minimal_failing_length_is_seven(self, p, q):
        report = check_reciprocal(p, q, 9)
        assert not report.holds and report.witness.n == 7
        w = report.witness
        assert occurrences(p, w.example) == w.S and occurrences(q, w.example) == w.T
        assert w.count_backward == 0

    def test_reciprocity_implies_super_strong(self):
        n = 7
        dists = pattern_distributions(n, 4)
        symmetric_pairs = 0
        for p, q in itertools.combinations(all_patterns(4), 2):
            joint = joint_distribution(p, q, n, workers=1)
            counts = joint.counts
            if all(counts.get((T, S), 0) == c for (S, T), c in counts.items()):
                symmetric_pairs += 1
                assert joint.marginal("p") == joint.marginal("q")
                assert np.array_equal(dists[p], dists[q])
        assert symmetric_pairs > 0


class TestClassification:
    def test_expected_class_sizes(self):
        sizes = Counter(len(c) for c in EXPECTED_CLASSES)
        assert sizes == {2: 9, 3: 4, 4: 1}
        assert 75 - sum(len(c) for c in EXPECTED_CLASSES) == 41

    def test_low_resolution_is_coarser(self):
        result = classify_length4(4)
        assert sum(len(c) for c in result.classes) == 75
        assert len(result.classes) < 14 + 41

    def test_n8_partition(self):
        result = classify_length4(8)
        assert sorted(sum(map(list, result.classes), [])) == sorted(str(p) for p in all_patterns(4))
        for expected in [("1002", "1012", "1102"), ("1000", "1110"), ("0102", "0112")]:
            assert expected in result.classes
        # patterns starting with their maximum cannot have two occurrences sharing an entry,
        # so their distributions stay equal until n is large
        assert ("3012", "3021", "3102", "3120", "3201", "3210") in result.classes
        assert not result.matches_expected
        assert result.to_json()["resolution"] == "n<=8"


class TestCrosscheck:
    def test_recursive(self):
        report = bijection_crosscheck("1000", "1110", 7)
        assert report.consistent and report.checked == 5040

    def test_exchange(self):
        assert bijection_crosscheck("0102", "0112", 7, "exchange").consistent
        assert bijection_crosscheck("2010", "2110", 7, "exchange").consistent
        assert bijection_crosscheck("2120", "2110", 6, "exchange").consistent

    def test_unsupported(self):
        with pytest.raises(UnsupportedPair):
            bijection_crosscheck("1000", "1110", 5, "exchange")
        with pytest.raises(InvalidInput):
            bijection_crosscheck("1000", "1110", 5, "bogus")

    def test_mismatch_is_reported(self, monkeypatch):
        import invwilf.verify as verify
        monkeypatch.setattr(verify, "exchange_map", lambda p, q: (lambda s: s))
        with pytest.raises(MismatchWitness) as exc:
            bijection_crosscheck("0102", "0112", 5, "exchange")
        assert occurrences("0102", exc.value.sequence) != occurrences("0112", exc.value.sequence)


class TestSweep:
    def test_counts_and_failures(self):
        total, failures = sweep(6, no_failure, workers=1)
        assert total == 720 and failures == []
        total, failures = sweep(5, odd_last_entry, workers=2)
        assert total == 120
        assert len(failures) == sum(1 for s in enumerate_invseqs(5) if s[-1] % 2)
