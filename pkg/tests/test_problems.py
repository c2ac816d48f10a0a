import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from choicelab import problems, spaces, streams
from choicelab.problems import (
    ProblemVariant,
    catalog,
    check_membership,
    cluster_points,
    lookup,
    solve,
)
from choicelab.spaces import BOTTOM, NatClosedSet, Undefined, make_space
from choicelab.streams import StreamFamily, ep, parse_stream

binary_streams = st.builds(
    ep,
    st.lists(st.integers(0, 1), max_size=5),
    st.lists(st.integers(0, 1), min_size=1, max_size=4),
)
ep_streams = st.builds(
    ep,
    st.lists(st.integers(0, 5), max_size=5),
    st.lists(st.integers(0, 5), min_size=1, max_size=4),
)


class TestCatalogPresence:
    def test_ships_the_named_problems(self):
        names = set(catalog())
        for want in [
            "LPO", "LPO_S", "INF", "INF_S", "lim", "limN", "SORT",
            "WBWT_2", "BWT_2", "NEG", "C_0", "C_1", "C_2", "C_3", "C_4",
            "C_5", "C_N", "K_N", "C_2N", "PC_2N", "ConC_I", "PCC_I",
            "C_NN", "WFT", "WFT_S",
        ]:
            assert want in names

    def test_lookup_variants(self):
        assert lookup("bar(C_N)").variant == "completion"
        assert lookup("T(SORT)").variant == "totalization"
        assert lookup("LPO'").variant == "jump"
        assert lookup("WBWT2").base.name == "WBWT_2"
        assert lookup("C_fin(3)").base.name == "C_3"
        with pytest.raises(KeyError):
            lookup("NOPE")


class TestPointOracles:
    def test_sort_example(self):
        p = lookup("SORT")
        x = parse_stream("1,1,0;1")
        assert solve(p, x) == ep((0,), (1,))

    def test_sort_infinitely_many_zeros(self):
        assert solve(lookup("SORT"), ep((), (0, 3 - 2))) == streams.const(0)

    def test_inf_on_periodic_zeros(self):
        assert solve(lookup("INF"), ep((), (0, 3))) == 1

    def test_lpo(self):
        assert solve(lookup("LPO"), streams.const(1)) == 1
        assert solve(lookup("LPO"), ep((1, 0), (2,))) == 0

    def test_neg_on_clopen_sets(self):
        rep = make_space("A-(2N)")
        empty = rep.decode_ep(ep((), (spaces.full_ball_code(),)))
        half = rep.decode_ep(ep((), (spaces.cylinder_code("2N", (0,)),)))
        assert solve(lookup("NEG"), empty) == 1
        assert solve(lookup("NEG"), half) == 0

    def test_cluster_points(self):
        assert cluster_points(ep((), (0, 1))) == {0, 1}
        assert cluster_points(ep((0, 1, 1), (1,))) == {1}

    @given(binary_streams)
    def test_cluster_points_brute(self, p):
        # digits occurring beyond every index n <= 200
        tail = p.digits(400)[200:]
        assert cluster_points(p) == frozenset(tail)

    def test_wbwt_solver_least_cluster_point(self):
        y = solve(lookup("WBWT_2"), ep((), (0, 1)))
        assert y == streams.const(0)

    def test_lim_eventually_constant_family(self):
        fam = StreamFamily((streams.const(1),), (streams.const(5),))
        p = lookup("lim")
        assert solve(p, p.in_rep.decode_ep(fam)) == streams.const(5)

    def test_limn(self):
        p = lookup("limN")
        assert solve(p, ep((9, 4), (7,))) == 7
        assert not p.dom(ep((), (1, 2)))


class TestMembership:
    def test_fin3_accepts_members_only(self):
        p = lookup("C_fin(3)")
        A = spaces.FinClosedSet(3, frozenset({1, 2}))
        assert check_membership(p, A, 2)
        assert not check_membership(p, A, 0)

    def test_completion_accepts_everything_off_domain(self):
        p = lookup("bar(C_N)")
        empty = NatClosedSet(frozenset(), empty=True)
        assert check_membership(p, BOTTOM, BOTTOM)
        assert check_membership(p, empty, 17)
        assert check_membership(p, empty, BOTTOM)

    def test_completion_rejects_bottom_on_domain(self):
        p = lookup("bar(C_N)")
        A = NatClosedSet(frozenset({0}))
        assert not check_membership(p, A, BOTTOM)
        assert check_membership(p, A, 1)
        assert not check_membership(p, A, 0)

    def test_sort_mismatch_raises(self):
        p = lookup("C_N")
        A = NatClosedSet(frozenset())
        with pytest.raises(ValueError):
            check_membership(p, A, streams.const(0))

    def test_totalization_extends_domain(self):
        p = lookup("T(C_N)")
        empty = NatClosedSet(frozenset(), empty=True)
        assert p.dom(empty)
        assert check_membership(p, empty, 3)
        assert solve(p, empty) == 0

    def test_plain_solver_raises_off_domain(self):
        p = lookup("C_N")
        empty = NatClosedSet(frozenset(), empty=True)
        with pytest.raises(Undefined):
            solve(p, empty)


class TestSolverSoundness:
    @settings(max_examples=200, deadline=None)
    @given(st.data())
    def test_membership_accepts_solver_output(self, data):
        rng = random.Random(data.draw(st.integers(0, 10 ** 6)))
        name = data.draw(
            st.sampled_from(
                [
                    "LPO", "LPO_S", "INF", "INF_S", "SORT", "WBWT_2", "BWT_2",
                    "NEG", "C_2", "C_3", "C_N", "K_N", "C_2N", "PC_2N",
                    "ConC_I", "PCC_I", "C_NN", "WFT", "WFT_S", "limN", "lim",
                ]
            )
        )
        p = lookup(name)
        x = _random_domain_point(p, rng)
        if x is None:
            return
        y = solve(p, x)
        assert check_membership(p, x, y), (name, x, y)


def _random_domain_point(p: ProblemVariant, rng: random.Random):
    """Sample a point of dom(p) by decoding random EP names, or None."""
    for _ in range(40):
        name = _random_name(p, rng)
        try:
            x = p.in_rep.decode_ep(name)
        except Undefined:
            continue
        if p.dom(x) and p.in_base_domain(x):
            return x
    return None


def _random_name(p: ProblemVariant, rng: random.Random):
    space = p.in_rep.space
    if space == "NN'":
        rows = [_random_ep(rng, 3) for _ in range(rng.randrange(3))]
        return StreamFamily(tuple(rows), (_random_ep(rng, 3),))
    if space == "(A-(2))*":
        k = rng.randrange(1, 4)
        comps = tuple(
            spaces.FinClosedSet(2, frozenset(rng.sample([0, 1], rng.randrange(1, 3))))
            for _ in range(k)
        )
        return p.in_rep.encode(comps)
    if space == "2N":
        return _random_ep(rng, 1)
    return _random_ep(rng, 60)


def _random_ep(rng: random.Random, hi: int):
    u = tuple(rng.randrange(hi + 1) for _ in range(rng.randrange(4)))
    v = tuple(rng.randrange(hi + 1) for _ in range(rng.randrange(1, 4)))
    return ep(u, v)


class TestInfLpoJumpCoherence:
    @settings(max_examples=120, deadline=None)
    @given(binary_streams)
    def test_inf_equals_lpo_of_limit_rows(self, p):
        # the row family of the classical zero-counting preprocessor:
        # row n is 1^(z(n)+1) 0^w where z(n) counts zeros among p(0..n)
        zs = 0
        rows = []
        for n in range(p.size * 3 + 4):
            if p.digit(n) == 0:
                zs += 1
            rows.append(ep((1,) * (zs + 1), (0,)))
        inf = solve(lookup("INF"), p)
        if streams.occurrences(p, 0) == streams.INFINITE:
            # rows grow without bound; the pointwise limit is all ones
            limit = streams.const(1)
            assert rows[-1] != rows[len(rows) // 2] or p.prefix == ()
        else:
            limit = rows[-1]
        assert solve(lookup("LPO"), limit) == inf


class TestWftAgainstEmptiness:
    @settings(max_examples=60)
    @given(st.lists(st.integers(0, 80), min_size=1, max_size=4))
    def test_wft_matches_set_members(self, codes):
        rep = make_space("A-(NN)")
        name = ep(tuple(codes[:-1]), (codes[-1],))
        A = spaces.set_members(rep, name)
        assert solve(lookup("WFT"), A) == (1 if A.is_empty() else 0)
