import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from choicelab import streams
from choicelab.streams import (
    StreamFamily,
    cantor_pair,
    cantor_unpair,
    ep,
    family_from_stream,
    from_gen,
    minus_one,
    pair_streams,
    parse_stream,
    plus_one_embed,
    project_component,
    project_left,
    project_right,
    row_of_stream,
    tuple_infinite,
)


def brute_minus_one(p, n):
    """Oracle: unfold n digits of p and concatenate the decremented nonzeros."""
    return tuple(d - 1 for d in p.digits(n) if d > 0)


ep_streams = st.builds(
    ep,
    st.lists(st.integers(0, 6), max_size=5),
    st.lists(st.integers(0, 6), min_size=1, max_size=4),
)


class TestCanonical:
    def test_primitive_period(self):
        assert ep((), (1, 2, 1, 2)).period == (1, 2)

    def test_prefix_absorbed(self):
        # 1 (2,1)^w = (1,2)^w
        s = ep((1,), (2, 1))
        assert s.prefix == () and s.period == (1, 2)

    def test_full_period_copy_dropped(self):
        s = ep((3, 1, 2), (1, 2))
        assert s == ep((3,), (1, 2))

    @given(ep_streams)
    def test_idempotent(self, s):
        assert ep(s.prefix, s.period) == s

    @given(ep_streams, st.integers(0, 3), st.integers(1, 3))
    def test_same_digits(self, s, pad, reps):
        # any repackaging of the same digit sequence canonicalizes equally
        u = s.digits(len(s.prefix) + pad)
        v = tuple(
            s.digit(len(s.prefix) + pad + i) for i in range(len(s.period) * reps)
        )
        assert ep(u, v) == s


class TestLiterals:
    def test_parse(self):
        s = parse_stream("2,0,4,1;0")
        assert s.digits(6) == (2, 0, 4, 1, 0, 0)

    def test_round_trip(self):
        for text in ["1,2;3", ";7", "0;1,2"]:
            s = parse_stream(text)
            assert parse_stream(s.literal()) == s

    def test_bad_literals(self):
        for text in ["1,2", "a;b", "1;"]:
            with pytest.raises(ValueError):
                parse_stream(text)


class TestMinusOne:
    def test_zero_tail_gives_finite_word(self):
        r = minus_one(parse_stream("2,0,4,1;0"))
        assert r.kind == "finite" and r.word == (1, 3, 0)

    def test_all_zero(self):
        r = minus_one(streams.const(0))
        assert r.kind == "finite" and r.word == ()

    def test_periodic_case(self):
        # digits 3 1 2 1 2 ... drop to 2 0 1 0 1 ...
        r = minus_one(ep((3,), (1, 2)))
        assert r.kind == "infinite"
        assert r.stream == ep((2,), (0, 1))

    @given(ep_streams)
    def test_against_brute_force(self, s):
        r = minus_one(s)
        if r.kind == "finite":
            n = len(s.prefix) + len(s.period)
            assert brute_minus_one(s, n + 20) == r.word
        else:
            want = brute_minus_one(s, 120)
            assert r.stream.digits(len(want)) == want

    @given(ep_streams)
    def test_plus_one_round_trip(self, q):
        r = minus_one(plus_one_embed(q))
        assert r.kind == "infinite" and r.stream == q
        assert r.stream.digits(100) == q.digits(100)

    def test_plus_one_examples(self):
        assert plus_one_embed(streams.const(0)) == streams.const(1)
        assert plus_one_embed(ep((2,), (0, 1))) == ep((3,), (1, 2))


class TestPairing:
    def test_nat_pairing_bijective(self):
        for i in range(51):
            for j in range(51):
                assert cantor_unpair(cantor_pair(i, j)) == (i, j)

    def test_interleave_constants(self):
        assert pair_streams(streams.const(0), streams.const(1)) == ep((), (0, 1))

    def test_interleave_periods(self):
        got = pair_streams(ep((), (1, 2)), streams.const(0))
        # unfold by hand: 1 0 2 0 1 0 2 0
        assert got.digits(8) == (1, 0, 2, 0, 1, 0, 2, 0)
        assert got == ep((), (1, 0, 2, 0))

    @given(ep_streams, ep_streams)
    def test_projections_invert(self, p, q):
        both = pair_streams(p, q)
        assert project_left(both) == p
        assert project_right(both) == q


class TestFamilies:
    def test_constant_family_tuples_to_constant(self):
        fam = streams.constant_family(streams.const(0))
        assert tuple_infinite(fam) == streams.const(0)

    def test_two_valued_family_positions(self):
        fam = StreamFamily((streams.const(1),), (streams.const(2),))
        t = tuple_infinite(fam)
        ones = {m for m in range(60) if t.digit(m) == 1}
        assert ones == {cantor_pair(0, j) for j in range(60) if cantor_pair(0, j) < 60}

    def test_project_component_recovers_rows(self):
        rows = (ep((), (1, 2)), streams.const(5))
        fam = StreamFamily(rows, (streams.const(3),))
        t = tuple_infinite(fam)
        for i in range(5):
            assert project_component(t, i) == fam.row(i)

    @settings(max_examples=60)
    @given(ep_streams, st.integers(0, 10))
    def test_rows_of_stream_brute(self, p, n):
        row = row_of_stream(p, n)
        for k in range(40):
            assert row.digit(k) == p.digit(cantor_pair(n, k))

    @settings(max_examples=60)
    @given(ep_streams)
    def test_family_from_stream_brute(self, p):
        fam = family_from_stream(p)
        for n in range(14):
            row = fam.row(n)
            for k in range(20):
                assert row.digit(k) == p.digit(cantor_pair(n, k))

    def test_limit_detection(self):
        fam = StreamFamily((streams.const(3),) * 4, (streams.const(9),))
        assert fam.limit() == streams.const(9)
        alternating = StreamFamily((), (streams.const(0), streams.const(1)))
        assert alternating.limit() is None
        assert set(alternating.cluster_streams()) == {
            streams.const(0),
            streams.const(1),
        }


class TestDigitStatistics:
    def test_occurrences(self):
        p = ep((0, 3), (1, 2))
        assert streams.occurrences(p, 0) == 1
        assert streams.occurrences(p, 1) == streams.INFINITE

    @given(ep_streams, st.integers(0, 6))
    def test_occurrences_brute(self, p, d):
        occ = streams.occurrences(p, d)
        counted = p.digits(200).count(d)
        if occ == streams.INFINITE:
            assert counted > p.digits(60).count(d) or counted >= 20
            assert d in p.period
        else:
            assert counted == occ

    @given(ep_streams, st.integers(1, 12))
    def test_position_of_nth_zero(self, p, n):
        pos = streams.position_of_nth(p, 0, n)
        zeros = [i for i in range(300) if p.digit(i) == 0]
        if pos is None:
            assert len(zeros) < n
        else:
            assert pos == zeros[n - 1]

    def test_eventual_value(self):
        assert streams.eventual_value(ep((9, 9), (5,))) == 5
        assert streams.eventual_value(ep((), (0, 1))) is None


class TestGeneratorStreams:
    def test_digit_access(self):
        g = from_gen(lambda i: i % 3)
        assert g.digits(5) == (0, 1, 2, 0, 1)
        assert not g.is_ep

    def test_exact_ops_reject_generators(self):
        g = from_gen(lambda i: 1)
        with pytest.raises(ValueError):
            minus_one(g)
        with pytest.raises(ValueError):
            g.literal()
