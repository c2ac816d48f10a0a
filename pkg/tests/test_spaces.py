import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from choicelab import spaces, streams
from choicelab.spaces import (
    BOTTOM,
    ALL,
    CantorClosedSet,
    PointName,
    Undefined,
    ball_code,
    ball_semantics,
    binary_word_index,
    cantor_pair,
    completion,
    complement_of_balls,
    covers_space,
    cylinder_code,
    descriptor_ball_codes,
    interval_bounds,
    interval_code,
    jump_decode,
    make_space,
    measure_upper,
    nat_singleton_code,
    nat_word_index,
    precompletion,
    set_members,
    word_index_binary,
    word_index_nat,
)
from choicelab.streams import StreamFamily, ep, parse_stream

ep_streams = st.builds(
    ep,
    st.lists(st.integers(0, 6), max_size=5),
    st.lists(st.integers(0, 6), min_size=1, max_size=4),
)


class TestEnumerations:
    def test_binary_words_bijective(self):
        words = [word_index_binary(n) for n in range(40)]
        assert len(set(words)) == 40
        for n in range(40):
            assert binary_word_index(word_index_binary(n)) == n

    def test_nat_words_bijective(self):
        words = [word_index_nat(n) for n in range(60)]
        assert len(set(words)) == 60
        for n in range(60):
            assert nat_word_index(word_index_nat(n)) == n

    def test_rational_enum_hits_all_small_fractions(self):
        got = {spaces.rational_index(n) for n in range(500)}
        for q in range(1, 6):
            for p in range(q + 1):
                assert Fraction(p, q) in got


class TestBallSemantics:
    def test_nat_singleton(self):
        # radius 1 around 5 in the discrete metric
        assert ball_semantics("N", cantor_pair(5, cantor_pair(1, 0))) == frozenset({5})

    def test_any_zero_radius_is_empty(self):
        for n in range(5):
            assert ball_semantics("N", ball_code(n, 0, 3)) is None
            assert ball_semantics("2N", ball_code(n, 0, 1)) is None

    def test_interval_ball(self):
        # rationals: radius 1/2 around 1/2 is (0, 1)
        n = cantor_pair(1, 1)  # alpha = min(1,2)/2 = 1/2
        got = ball_semantics("I", ball_code(n, 1, 1))
        assert got == (Fraction(0), Fraction(1))

    def test_cylinder_codes_decode_to_their_word(self):
        for w in [(0,), (1,), (0, 1), (1, 1, 0)]:
            assert ball_semantics("2N", cylinder_code("2N", w)) == w
        for w in [(3,), (0, 7), (2, 1, 4)]:
            assert ball_semantics("NN", cylinder_code("NN", w)) == w

    def test_radius_above_one_covers_discrete_space(self):
        assert ball_semantics("N", ball_code(0, 2, 0)) is ALL


class TestClosedSets:
    def test_cantor_complement_of_one_cylinder(self):
        rep = make_space("A-(2N)")
        name = ep((), (cylinder_code("2N", (0,)),))
        got = rep.decode_ep(name)
        assert got == CantorClosedSet.from_words(1, [(1,)])
        assert got.contains(streams.const(1))
        assert not got.contains(streams.const(0))

    def test_nat_complement(self):
        rep = make_space("A-(N)")
        codes = [nat_singleton_code(k) for k in (0, 1, 2)]
        name = ep(tuple(codes), (codes[-1],))
        got = rep.decode_ep(name)
        assert not got.contains(0) and not got.contains(2) and got.contains(3)
        assert got.least() == 3

    def test_empty_enumeration_denotes_full_space(self):
        rep = make_space("A-(2N)")
        got = rep.decode_ep(ep((), (spaces.empty_ball_code(),)))
        assert got == CantorClosedSet.full()

    def test_range_coding_of_full_N(self):
        rep = make_space("A-(N)/range")
        got = rep.decode_ep(parse_stream("0;0"))
        assert got == spaces.NatClosedSet(frozenset())
        assert got.least() == 0

    def test_range_coding_excludes_listed(self):
        rep = make_space("A-(N)/range")
        got = rep.decode_ep(ep((1, 3), (0,)))
        assert not got.contains(0) and not got.contains(2) and got.contains(1)

    @settings(max_examples=40)
    @given(st.lists(st.integers(0, 40), max_size=5))
    def test_members_agree_with_bruteforce_nat(self, codes):
        rep = make_space("A-(N)")
        if not codes:
            codes = [spaces.empty_ball_code()]
        name = ep(tuple(codes[:-1]), (codes[-1],))
        got = set_members(rep, name)
        # brute force: point-by-point membership up to 100
        balls = [ball_semantics("N", c) for c in codes]
        for n in range(100):
            in_union = any(
                b is ALL or (b is not None and n in b) for b in balls
            )
            assert got.contains(n) == (not in_union)

    @settings(max_examples=40)
    @given(st.lists(st.integers(0, 200), max_size=5))
    def test_members_agree_with_bruteforce_cantor(self, codes):
        rep = make_space("A-(2N)")
        if not codes:
            codes = [spaces.empty_ball_code()]
        name = ep(tuple(codes[:-1]), (codes[-1],))
        got = set_members(rep, name)
        balls = [ball_semantics("2N", c) for c in codes]
        # brute force over all cylinders of depth 6
        for idx in range(64):
            w = tuple((idx >> (5 - b)) & 1 for b in range(6))
            point = ep(w, (0,))
            in_union = any(
                b is ALL or (b is not None and w[: len(b)] == b) for b in balls
            )
            assert got.contains(point) == (not in_union)

    def test_encode_round_trip(self):
        rng = random.Random(0)
        for space in ["A-(N)", "A-(2N)", "A-(fin(3))", "A-(I)", "A-(NN)"]:
            rep = make_space(space)
            for _ in range(25):
                codes = [rng.randrange(120) for _ in range(rng.randrange(1, 5))]
                name = ep(tuple(codes[:-1]), (codes[-1],))
                desc = rep.decode_ep(name)
                again = rep.decode_ep(rep.encode(desc))
                assert again == desc, (space, codes)


class TestCovers:
    def test_cantor_two_cylinders(self):
        assert covers_space("2N", [cylinder_code("2N", (0,)), cylinder_code("2N", (1,))])

    def test_fin_uncovered(self):
        assert not covers_space("fin(2)", [nat_singleton_code(0)])

    def test_interval_overlapping_cover(self):
        # (-0.1, 0.55) and (0.45, 1.1)
        c1 = interval_code(Fraction(-1, 10), Fraction(55, 100))
        c2 = interval_code(Fraction(45, 100), Fraction(11, 10))
        assert covers_space("I", [c1, c2])
        # touching open intervals miss the midpoint
        c3 = interval_code(Fraction(-1, 10), Fraction(1, 2))
        c4 = interval_code(Fraction(1, 2), Fraction(11, 10))
        assert not covers_space("I", [c3, c4])

    def test_non_compact_rejected(self):
        with pytest.raises(ValueError):
            covers_space("N", [nat_singleton_code(0)])


class TestIntervalBounds:
    def test_two_gaps(self):
        codes = spaces.interval_gap_codes(Fraction(3, 10), Fraction(7, 10))
        left, right = interval_bounds(codes)
        assert (left, right) == (Fraction(3, 10), Fraction(7, 10))

    def test_empty_list(self):
        assert interval_bounds([]) == (Fraction(0), Fraction(1))

    def test_covered_flips_bounds(self):
        c1 = interval_code(Fraction(-1, 10), Fraction(55, 100))
        c2 = interval_code(Fraction(45, 100), Fraction(11, 10))
        left, right = interval_bounds([c1, c2])
        assert left == 1 and right == 0 and left > right


class TestMeasure:
    def test_half(self):
        name = ep((), (cylinder_code("2N", (0,)),))
        assert measure_upper(name, 5) == Fraction(1, 2)

    def test_two_depth2_equal_half(self):
        name = ep(
            (cylinder_code("2N", (0, 0)),), (cylinder_code("2N", (0, 1)),)
        )
        assert measure_upper(name, 5) == Fraction(1, 2)

    def test_full_space(self):
        name = ep((), (spaces.empty_ball_code(),))
        assert measure_upper(name, 3) == 1

    @settings(max_examples=40)
    @given(st.lists(st.integers(0, 200), min_size=1, max_size=6))
    def test_monotone_and_stabilizes(self, codes):
        name = ep(tuple(codes[:-1]), (codes[-1],))
        vals = [measure_upper(name, s) for s in range(10)]
        assert all(a >= b for a, b in zip(vals, vals[1:]))
        distinct = len(set(codes))
        exact = complement_of_balls(
            "2N", (ball_semantics("2N", c) for c in set(codes))
        ).measure()
        for s in range(distinct, 10):
            assert vals[s] == exact


class TestPrecompletionCompletion:
    def test_precompletion_example(self):
        r = precompletion(make_space("N"))
        assert r.decode_ep(ep((0, 0, 3), (1,))) == 2

    def test_precompletion_undefined_on_zero_tail(self):
        r = precompletion(make_space("S"))
        with pytest.raises(Undefined):
            r.decode_ep(streams.const(0))

    @given(ep_streams)
    def test_precompletion_equivalent_via_embedding(self, q):
        base = make_space("N")
        pre = precompletion(base)
        x = base.decode_ep(q)
        assert pre.decode_ep(streams.plus_one_embed(q)) == x

    def test_completion_bottom(self):
        r = completion(make_space("N"))
        assert r.decode_ep(streams.const(0)) is BOTTOM

    def test_completion_value(self):
        r = completion(make_space("N"))
        assert r.decode_ep(ep((0, 6), (1,))) == 5

    @given(ep_streams)
    def test_completion_total(self, s):
        r = completion(make_space("fin(3)"))
        x = r.decode_ep(s)
        assert x is BOTTOM or 0 <= x < 3
        obs = r.decode(s, r.commit_bound(s))
        assert obs[0] == "point" and obs[1] == x

    @given(ep_streams, st.integers(0, 14))
    def test_monotone_observations(self, s, d):
        for rep in [
            make_space("N"),
            completion(make_space("N")),
            make_space("S"),
        ]:
            first = rep.decode(s, d)
            later = rep.decode(s, d + 3)
            if first[0] == "point":
                assert later == first


class TestJump:
    def test_constant_family(self):
        r = make_space("N")
        fam = streams.constant_family(ep((7,), (0,)))
        assert jump_decode(r, fam) == 7

    def test_switching_family(self):
        r = make_space("N")
        fam = StreamFamily((ep((3,), (0,)),) * 4, (ep((9,), (0,)),))
        assert jump_decode(r, fam) == 9

    def test_non_convergent_rejected(self):
        r = make_space("N")
        fam = StreamFamily((), (ep((0,), (1,)), ep((1,), (0,))))
        with pytest.raises(Undefined):
            jump_decode(r, fam)

    def test_flat_stream_name(self):
        # a flat EP stream decodes through its tupled rows
        p = streams.const(5)
        assert jump_decode(make_space("N"), p) == 5
        # rows of (4,5)^w: every row is EP, and here every row limit exists
        q = ep((), (4,))
        assert jump_decode(make_space("N"), q) == 4


class TestEncodeVariants:
    @settings(max_examples=30)
    @given(st.integers(0, 9), st.integers(0, 5))
    def test_nat_variants_decode_alike(self, n, seed):
        rng = random.Random(seed)
        rep = make_space("N")
        for name in rep.encode_variants(n, rng):
            assert rep.decode_ep(name) == n

    @settings(max_examples=30)
    @given(st.integers(0, 6), st.integers(0, 5))
    def test_completed_variants_decode_alike(self, n, seed):
        rng = random.Random(seed)
        rep = completion(make_space("N"))
        for point in [n, BOTTOM]:
            for name in rep.encode_variants(point, rng):
                assert rep.decode_ep(name) == point
