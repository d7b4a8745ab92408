from __future__ import annotations

import itertools
import warnings
from math import factorial

import pytest
from hypothesis import given

from invwilf.core import (
    MAX_N_ENV,
    Pattern,
    as_invseq,
    check_cap,
    contains_classical,
    enumerate_invseqs,
    format_positions,
    format_word,
    invseq_from_permutation,
    is_invseq,
    is_nonoverlapping,
    is_reversed_invseq,
    mutually_nonoverlapping,
    occurrences,
    overlap_witness,
    parse_word,
    reduction,
    reverse,
)
from invwilf.errors import EmptyWord, EnumerationCapExceeded, InvalidInput, InvalidPattern, InvalidSequence

from strategies import invseqs, words


def naive_reduce(w):
    return tuple(sorted(set(w)).index(v) for v in w)


def naive_occurrences(p, s):
    r = len(p)
    return tuple(i + 1 for i in range(len(s) - r + 1) if naive_reduce(s[i:i + r]) == tuple(p))


class TestParsing:
    def test_compact_and_comma_forms(self):
        assert parse_word("002111110") == (0, 0, 2, 1, 1, 1, 1, 1, 0)
        assert parse_word("0,1,10") == (0, 1, 10)
        assert parse_word("0 1 2") == (0, 1, 2)
        assert parse_word("") == ()

    def test_format_switches_to_commas_above_nine(self):
        assert format_word((0, 1, 0, 2)) == "0102"
        assert format_word((0, 1, 10)) == "0,1,10"
        assert parse_word(format_word((0, 1, 10))) == (0, 1, 10)

    @pytest.mark.parametrize("bad", ["01a", "0,-1", "x"])
    def test_rejects_garbage(self, bad):
        with pytest.raises(InvalidInput):
            parse_word(bad)

    def test_format_positions(self):
        assert format_positions(()) == "{}"
        assert format_positions((1, 3, 5)) == "{1, 3, 5}"


class TestReduction:
    @pytest.mark.parametrize("w, expected", [
        ((3, 2, 1), (2, 1, 0)),
        ((0, 1, 2), (0, 1, 2)),
        ((2, 5, 2, 7), (0, 1, 0, 2)),
    ])
    def test_examples(self, w, expected):
        assert reduction(w).entries == expected

    def test_empty(self):
        with pytest.raises(EmptyWord):
            reduction(())

    @given(words())
    def test_matches_naive_and_is_idempotent(self, w):
        r = reduction(w)
        assert r.entries == naive_reduce(w)
        assert reduction(r.entries) == r

    def test_pattern_must_be_reduced(self):
        with pytest.raises(InvalidPattern):
            Pattern((0, 2))
        with pytest.raises(InvalidPattern):
            Pattern(())
        assert Pattern.parse("0102").d == 2 and Pattern.parse("0102").r == 4


class TestOccurrences:
    def test_examples(self):
        assert occurrences("0102", parse_word("0101213")) == (4,)
        assert occurrences("1000", parse_word("002111110")) == (3,)
        assert occurrences("0102", (0, 0, 0)) == ()

    @given(invseqs(max_size=9))
    def test_matches_naive(self, s):
        for p in ("0102", "1000", "2120", "0000"):
            assert occurrences(p, s) == naive_occurrences(Pattern.parse(p).entries, s)

    def test_classical_versus_consecutive(self):
        s = parse_word("00123021")
        assert contains_classical("210", s)
        assert occurrences("210", s) == ()
        assert not contains_classical("0", ())


class TestSequences:
    def test_is_invseq(self):
        assert is_invseq((0, 1, 0, 2))
        assert not is_invseq((0, 1, 3))
        assert is_invseq(())

    def test_as_invseq_rejects(self):
        with pytest.raises(InvalidSequence):
            as_invseq("02")

    def test_reverse(self):
        assert reverse((0, 1, 0, 2)) == (2, 0, 1, 0)
        assert reverse(()) == ()
        assert is_reversed_invseq(reverse((0, 1, 0, 2)))

    @pytest.mark.parametrize("perm, expected", [
        ((1, 2, 3), (0, 0, 0)),
        ((3, 2, 1), (0, 1, 2)),
        ((2, 1, 3), (0, 1, 0)),
    ])
    def test_from_permutation(self, perm, expected):
        assert invseq_from_permutation(perm) == expected

    def test_from_permutation_is_a_bijection(self):
        images = {invseq_from_permutation(p) for p in itertools.permutations(range(1, 7))}
        assert images == set(enumerate_invseqs(6))


class TestEnumeration:
    @pytest.mark.parametrize("n", range(0, 9))
    def test_counts(self, n):
        seqs = list(enumerate_invseqs(n))
        assert len(seqs) == factorial(n)
        assert seqs == sorted(seqs)
        assert all(is_invseq(s) for s in seqs)

    def test_small(self):
        assert list(enumerate_invseqs(1)) == [(0,)]

    def test_cap(self, monkeypatch):
        with pytest.raises(EnumerationCapExceeded):
            enumerate_invseqs(10)
        monkeypatch.setenv(MAX_N_ENV, "4")
        with pytest.raises(EnumerationCapExceeded):
            enumerate_invseqs(5)
        monkeypatch.setenv(MAX_N_ENV, "nope")
        with pytest.raises(InvalidInput):
            enumerate_invseqs(2)

    def test_raised_cap_warns(self):
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            check_cap(10, max_n=12)
        assert any(issubclass(w.category, RuntimeWarning) for w in caught)


class TestOverlap:
    def test_examples(self):
        assert is_nonoverlapping("1000")
        assert not is_nonoverlapping("0102")
        assert overlap_witness("0102", "0102") is not None
        assert not is_nonoverlapping("2120")
        assert not mutually_nonoverlapping("0102", "0112")

    def test_1000_and_1110_overlap_each_other(self):
        # 1000 then 1110 one step later, e.g. 21110
        w = overlap_witness("1000", "1110")
        assert w is not None
        assert occurrences("1000", w)[0] == 1
        assert 2 in occurrences("1110", w) or 3 in occurrences("1110", w)
        assert not mutually_nonoverlapping("1000", "1110")
        assert occurrences("1000", (2, 1, 1, 1, 0)) == (1,)
        assert occurrences("1110", (2, 1, 1, 1, 0)) == (2,)

    def test_self_pair_reduces_to_single(self):
        for p in ("1000", "1110", "2100", "0102"):
            assert mutually_nonoverlapping(p, p) == is_nonoverlapping(p)

    def test_against_brute_force_on_words(self):
        # an overlap at shift k exists iff some word over a small alphabet realises it
        for p in ("1000", "0102", "2120", "2100", "0000", "1001"):
            pat = Pattern.parse(p)
            found = False
            for k in range(1, pat.r - 1):
                for w in itertools.product(range(pat.r + k), repeat=pat.r + k):
                    occ = naive_occurrences(pat.entries, w)
                    if 1 in occ and 1 + k in occ:
                        found = True
                        break
                if found:
                    break
            assert found == (not is_nonoverlapping(p)), p
