"""Clopen-set algebra: canonical forms, Boolean laws, refinement.

The independent oracle throughout is brute enumeration of depth-n
cylinders (n past every word length involved) and comparison of
membership vectors.
"""

import random

import pytest

from fullgroups import ClopenSet, SequenceSpace, SpaceMismatch, refine
from fullgroups.cylinder import canonical_words

BIN = SequenceSpace.full_shift("01")
TRI = SequenceSpace.full_shift("123")
GOLDEN = SequenceSpace.sft("ab", [("a", "a"), ("a", "b"), ("b", "a")])


def w(space, text):
    return space.parse_word(text)


def members(space, cset, depth):
    return frozenset(c for c in space.cylinders(depth) if cset.contains_cylinder(c))


def as_set(space, *texts):
    return ClopenSet(space, [w(space, t) for t in texts])


def test_canonicalize_complete_sibling_merge():
    assert as_set(BIN, "0", "1") == ClopenSet.whole(BIN)


def test_canonicalize_prefix_absorption():
    assert as_set(BIN, "01", "0") == as_set(BIN, "0")


def test_canonicalize_depth2_oracle():
    # enumerate depth-2 cylinders: {00,01,10} covers the same points as {0,10}
    got = as_set(BIN, "00", "01", "10")
    expected = as_set(BIN, "0", "10")
    assert got == expected
    assert members(BIN, got, 2) == frozenset({("0", "0"), ("0", "1"), ("1", "0")})


def test_canonicalize_idempotent_and_normal_form():
    rng = random.Random(7)
    for _ in range(200):
        words = [tuple(rng.choice("01") for _ in range(rng.randint(0, 4))) for _ in range(rng.randint(0, 6))]
        a = ClopenSet(BIN, words)
        assert ClopenSet(BIN, a.words) == a
        # normal form: any word set with the same depth-5 membership canonicalizes identically
        blown_up = [c for c in BIN.cylinders(5) if a.contains_cylinder(c)]
        assert ClopenSet(BIN, blown_up) == a


def test_involution_and_basic_identities():
    u = as_set(BIN, "01")
    assert u.complement().complement() == u
    assert as_set(BIN, "0").intersect(as_set(BIN, "1")).is_empty()
    assert as_set(BIN, "0").union(as_set(BIN, "1")).is_whole()


def test_boolean_laws_randomized():
    rng = random.Random(2024)
    for _ in range(150):
        def rand_set():
            words = [tuple(rng.choice("01") for _ in range(rng.randint(1, 3))) for _ in range(rng.randint(0, 4))]
            return ClopenSet(BIN, words)

        a, b, c = rand_set(), rand_set(), rand_set()
        depth = 4
        ma, mb, mc = members(BIN, a, depth), members(BIN, b, depth), members(BIN, c, depth)
        assert members(BIN, a.union(b), depth) == ma | mb
        assert members(BIN, a.intersect(b), depth) == ma & mb
        assert members(BIN, a.complement(), depth) == frozenset(BIN.cylinders(depth)) - ma
        # distributivity and De Morgan
        assert a.intersect(b.union(c)) == a.intersect(b).union(a.intersect(c))
        assert a.union(b).complement() == a.complement().intersect(b.complement())
        # subset/disjoint agree with membership
        assert a.is_subset(b) == (ma <= mb)
        assert a.is_disjoint(b) == (not ma & mb)


def test_sft_respects_transitions():
    # golden mean: no "bb"
    assert GOLDEN.valid_word(w(GOLDEN, "aba"))
    assert not GOLDEN.valid_word(("b", "b"))
    assert len(GOLDEN.cylinders(3)) == 5
    # sibling merge uses allowed extensions only: {ba} is everything below b
    assert as_set(GOLDEN, "ba") == as_set(GOLDEN, "b")


def test_bratteli_space_and_clopen():
    # stationary diagram, one vertex, two loops: path space is the binary shift
    space = SequenceSpace.bratteli([["v"]], [[("x", "v", "v"), ("y", "v", "v")]])
    assert len(space.cylinders(3)) == 8
    u = ClopenSet(space, [("x", "x"), ("x", "y")])
    assert u == ClopenSet(space, [("x",)])


def test_refine_examples():
    assert refine([as_set(BIN, "0")]) == sorted(
        [as_set(BIN, "0"), as_set(BIN, "1")], key=lambda c: sorted(c.words)
    )
    got = refine([as_set(BIN, "0"), as_set(BIN, "00", "10")])
    expected = [as_set(BIN, t) for t in ("00", "01", "10", "11")]
    assert sorted(map(repr, got)) == sorted(map(repr, expected))
    assert refine([], space=BIN) == [ClopenSet.whole(BIN)]


def test_refine_properties_randomized():
    rng = random.Random(5)
    for _ in range(40):
        inputs = []
        for _ in range(rng.randint(0, 3)):
            words = [tuple(rng.choice("01") for _ in range(rng.randint(1, 3))) for _ in range(rng.randint(0, 3))]
            inputs.append(ClopenSet(BIN, words))
        parts = refine(inputs, space=BIN)
        whole = ClopenSet.empty(BIN)
        for i, p in enumerate(parts):
            assert not p.is_empty()
            whole = whole.union(p)
            for q in parts[i + 1:]:
                assert p.is_disjoint(q)
        assert whole.is_whole()
        for u in inputs:
            rebuilt = ClopenSet.empty(BIN)
            for p in parts:
                if p.is_subset(u):
                    rebuilt = rebuilt.union(p)
            assert rebuilt == u


def test_space_mismatch_raises():
    with pytest.raises(SpaceMismatch):
        as_set(BIN, "0").union(as_set(TRI, "1"))


def test_canonical_words_direct():
    got = canonical_words(BIN, [("0", "0"), ("0", "1"), ("1", "0")])
    assert got == frozenset({("0",), ("1", "0")})
