"""Named realizer constructions.

Each construction ships as an honest prefix machine (for step-bounded runs
and transcripts) and, where the machine's literal output has no eventually
periodic description, an exact EP-level evaluator used by the verification
harness.  Exact evaluators may return :class:`~choicelab.spaces.PointName`
values carrying the decoded point directly.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .. import spaces, streams
from ..spaces import (
    CantorClosedSet,
    NatClosedSet,
    PointName,
    ball_semantics,
    complement_of_balls,
    covers_space,
    cylinder_code,
    empty_ball_code,
    interval_bounds,
    interval_gap_codes,
)
from ..streams import NameStream, StreamFamily, Word, cantor_unpair, ep, minus_one
from .machines import (
    RESET,
    FnLimitMachine,
    FnTransducer,
    LimitMachine,
    Transducer,
    digitwise,
)


# ---------------------------------------------------------------------------
# elementary machines


def identity_transducer() -> Transducer:
    return FnTransducer("identity", None, lambda st, d: (st, (d,)), map_ep=lambda p: p)


def minus_one_transducer() -> Transducer:
    """Emits d-1 for nonzero d, nothing for zeros (the raw p-1 machine)."""
    return FnTransducer(
        "minus_one",
        None,
        lambda st, d: (st, (d - 1,) if d > 0 else ()),
    )


def retraction_double_completion() -> Transducer:
    """Retraction from the double completion onto the completion.

    The machine writes p-1; when the input stops providing nonzero content
    the output is filled up with zeros, which the consuming representation
    ignores under its own digit shift.
    """

    def map_ep(p: NameStream):
        m = minus_one(p)
        if m.kind == "finite":
            return ep(m.word, (0,))
        return m.stream

    return FnTransducer(
        "retraction_double_completion",
        None,
        lambda st, d: (st, (d - 1,) if d > 0 else ()),
        map_ep=map_ep,
    )


# ---------------------------------------------------------------------------
# compactness codings


def compactness_compress() -> Transducer:
    """Parses 0^k0 1^(n0+1) 0^(k1+1) 1^(n1+1) ... and emits n0 n1 n2 ..."""

    def step(state, d):
        phase, count = state
        if d == 1:
            return ("ones", count + 1), ()
        if phase == "ones":
            return ("zeros", 0), (count - 1,)
        return ("zeros", 0), ()

    return FnTransducer("compactness_compress", ("zeros", 0), step)


def compactness_expand() -> Transducer:
    """Emits 1^(d+1) 0 per input digit d."""
    return digitwise("compactness_expand", lambda d: (1,) * (d + 1) + (0,))


# ---------------------------------------------------------------------------
# special retractions


def retraction_nbar() -> Transducer:
    """Mind-change retraction from completed N onto N: names 0 until the
    first nonzero entry n+1 appears, then resets to a name of n."""

    def step(state, d):
        if state == "done0":
            return "done0", (0,)
        if d > 0:
            return "done0", (RESET, d - 1)
        return "search", (0,)

    return FnTransducer("retraction_Nbar", "search", step, mind_change=True)


class _BaireBarStage(Transducer):
    """Stage s: writes (p(0..s-1) - 1) and then zeros forever."""

    def __init__(self, s):
        self.s = s
        self.name = f"retraction_Bairebar[{s}]"

    def start(self):
        return 0

    def step(self, state, d):
        if state < self.s:
            return state + 1, (d - 1,) if d > 0 else ()
        return state + 1, (0,)


def retraction_bairebar() -> LimitMachine:
    """Limit-computable retraction from completed Baire space onto it:
    overwrite a name of the zero stream with p-1 as content shows up."""

    def limit(p: NameStream):
        m = minus_one(p)
        return ep(m.word, (0,)) if m.kind == "finite" else m.stream

    return FnLimitMachine(
        "retraction_Bairebar",
        stage=_BaireBarStage,
        stabilization=lambda p: p.size,
        limit=limit,
    )


# ---------------------------------------------------------------------------
# infinity problem witnesses


class _InfToLpoJump(Transducer):
    """Preprocessor: output position <n,k> reads 1 iff p(0..n) has >= k zeros.

    Row n of the output is then 1^(z(n)+1) 0^w, and the row limit exists with
    LPO(limit) equal to the infinity answer for p.
    """

    name = "inf_to_lpojump"

    def start(self):
        return (0, ())  # next output position, zero counts per consumed prefix

    def step(self, state, d):
        m, zs = state
        zs = zs + ((zs[-1] if zs else 0) + (1 if d == 0 else 0),)
        out = []
        while True:
            n, k = cantor_unpair(m)
            if n >= len(zs):
                break
            out.append(1 if zs[n] >= k else 0)
            m += 1
        return (m, zs), tuple(out)

    def map_ep(self, p: NameStream):
        z = streams.occurrences(p, 0)
        if z == streams.INFINITE:
            limit = streams.const(1)
        else:
            limit = ep((1,) * (int(z) + 1), (0,))
        return PointName(limit)


def inf_to_lpojump() -> Transducer:
    return _InfToLpoJump()


class _LpoJumpToInf(Transducer):
    """Preprocessor: consumes a tupled name, discharges pairs <n,k> by finding
    some i >= k with row_i(n) nonzero, and writes a zero per discharge between
    growing filler numbers."""

    name = "lpojump_to_inf"

    def start(self):
        # received digits by position, current pair m, search index i, filler
        return ((), 0, None, 1)

    def step(self, state, d):
        got, m, i, filler = state
        got = got + (d,)
        out = []
        for _ in range(8):  # bounded work per step
            n, k = cantor_unpair(m)
            if i is None or i < k:
                i = k
            pos = streams.cantor_pair(i, n)
            if pos >= len(got):
                break
            if got[pos] != 0:
                out.append(0)
                m += 1
                i = None
            else:
                i += 1
        if not out:
            out.append(filler)
            filler += 1
        return (got, m, i, filler), tuple(out)

    def map_ep(self, name):
        fam = streams.as_family(name)
        limit = fam.limit()
        if limit is None:
            raise spaces.Undefined("name sequence does not converge")
        entries = fam.entries
        if 0 not in limit.prefix and 0 not in limit.period:
            # every pair discharges: infinitely many zeros in the output
            return ep((), (1, 0))
        # find the first stuck pair <n,k> in pairing order
        m = 0
        guard = 0
        while True:
            n, k = cantor_unpair(m)
            if not _discharges(entries, limit, n, k):
                break
            m += 1
            guard += 1
            if guard > 100000:
                raise AssertionError("discharge scan failed to terminate")
        return ep((1, 0) * m, (1,))


def _discharges(entries, limit: NameStream, n: int, k: int) -> bool:
    if limit.digit(n) != 0:
        return True
    return any(entries[i].digit(n) != 0 for i in range(k, len(entries)))


def lpojump_to_inf() -> Transducer:
    return _LpoJumpToInf()


# ---------------------------------------------------------------------------
# negligibility witnesses


class _InfToNeg(Transducer):
    """Emits the ball list of 2^N minus union(1^i 0 cylinders, i < zeros seen)."""

    name = "inf_to_neg"

    def start(self):
        return 0

    def step(self, zs, d):
        if d == 0:
            return zs + 1, (cylinder_code("2N", (1,) * zs + (0,)),)
        return zs, (empty_ball_code(),)

    def map_ep(self, p: NameStream):
        z = streams.occurrences(p, 0)
        if z == streams.INFINITE:
            raise ValueError(
                "inf_to_neg: infinitely many zeros yield a non-EP ball list"
            )
        codes = [cylinder_code("2N", (1,) * i + (0,)) for i in range(int(z))]
        codes.append(empty_ball_code())
        return ep(tuple(codes), (empty_ball_code(),))


def inf_to_neg() -> Transducer:
    return _InfToNeg()


class _NegStage(Transducer):
    """Stage s: reads ball codes and repeats the current answer digit, which
    is 1 iff the measure upper bound after s absorbed codes is zero."""

    def __init__(self, s):
        self.s = s
        self.name = f"neg_via_measure[{s}]"

    def start(self):
        return (frozenset(), CantorClosedSet.full())

    def step(self, state, code):
        seen, desc = state
        if code not in seen and len(seen) < self.s:
            seen = seen | {code}
            desc = complement_of_balls(
                "2N", [ball_semantics("2N", c) for c in seen]
            )
        return (seen, desc), (1 if desc.measure() == 0 else 0,)


def neg_via_measure() -> LimitMachine:
    def limit(name: NameStream):
        codes = set(name.prefix) | set(name.period)
        desc = complement_of_balls("2N", [ball_semantics("2N", c) for c in codes])
        return streams.const(1 if desc.measure() == 0 else 0)

    return FnLimitMachine(
        "neg_via_measure",
        stage=_NegStage,
        stabilization=lambda p: len(set(p.prefix) | set(p.period)),
        limit=limit,
    )


# ---------------------------------------------------------------------------
# weak Bolzano-Weierstrass witnesses (range-coded completed choice over N)


class _WbwtPre(Transducer):
    """Lists 0,1,2,... into a range-coded set name while zeros arrive; on a
    one it repeats the previous digit (or writes a zero first)."""

    name = "wbwt_to_barCN.K"

    def start(self):
        return (0, 0)  # counter, previous emitted digit

    def step(self, state, d):
        counter, prev = state
        if d == 0:
            out = counter + 1
            return (counter + 1, out), (out,)
        return (counter, prev), (prev,)

    def map_ep(self, p: NameStream):
        z = streams.occurrences(p, 0)
        if z == streams.INFINITE:
            return PointName(NatClosedSet(frozenset(), empty=True))
        z = int(z)
        point = NatClosedSet(frozenset(range(z)))
        digits = []
        counter, prev = 0, 0
        for i in range(p.size + 1):
            if p.digit(i) == 0:
                counter += 1
                prev = counter
            digits.append(prev)
        return PointName(point, ep(tuple(digits), (digits[-1],)))


class WbwtPost(Transducer):
    """Reads the interleaved pair of original input and oracle answer;
    outputs zeros while the answer value is unknown, ones while the answered
    number is still in the coded set, zeros forever once it got excluded."""

    name = "wbwt_to_barCN.H"

    def start(self):
        # consumed count, zeros-in-p count, answer value, excluded flag
        return (0, 0, None, False)

    def step(self, state, d):
        i, zs, val, excluded = state
        from_p = i % 2 == 0
        if from_p and d == 0:
            zs += 1
        if not from_p and val is None and d > 0:
            val = d - 1
            if zs > val:
                excluded = True
        if val is not None and zs > val:
            excluded = True
        if val is None:
            out = 0
        elif excluded:
            out = 0
        else:
            out = 1
        return (i + 1, zs, val, excluded), (out,) if i % 2 == 1 else ()

    def exact(self, p: NameStream, answer: NameStream) -> NameStream:
        """Exact output for EP p and an EP answer name."""
        first = None
        for j in range(answer.size + 1):
            if answer.digit(j) > 0:
                first = j
                break
        if first is None and 0 not in answer.period:
            first = len(answer.prefix)
        if first is None:
            return streams.const(0)
        n = answer.digit(first) - 1
        t = streams.position_of_nth(p, 0, n + 1)
        if t is None:
            return ep((0,) * first, (1,))
        ones = max(t + 1 - first, 0)
        return ep((0,) * first + (1,) * ones, (0,))


def wbwt_pre() -> Transducer:
    return _WbwtPre()


def wbwt_post() -> WbwtPost:
    return WbwtPost()


# ---------------------------------------------------------------------------
# choice retractions on compact spaces


class _CoverRetraction(Transducer):
    """Echoes ball codes until they cover the space, then freezes on the last
    code before the cover (or on an empty ball if the first code covers)."""

    def __init__(self, space: str):
        self.space = space
        self.name = f"choice_retraction_{'cantor' if space == '2N' else space}"

    def start(self):
        # remaining (uncovered) set, previous code, frozen output code
        return (complement_of_balls(self.space, []), None, None)

    def step(self, state, code):
        remaining, prev, frozen = state
        if frozen is not None:
            return state, (frozen,)
        remaining2 = spaces.remove_ball(
            self.space, remaining, ball_semantics(self.space, code)
        )
        if remaining2.is_empty():
            frozen = prev if prev is not None else empty_ball_code()
            return (remaining, prev, frozen), (frozen,)
        return (remaining2, code, None), (code,)


def choice_retraction_cantor() -> Transducer:
    return _CoverRetraction("2N")


def choice_retraction_finite(n: int) -> Transducer:
    return _CoverRetraction(f"fin({n})")


class _ConcRetraction(Transducer):
    """Connected choice retraction on the unit interval: emits codes of
    [0, l) and (r, 1] for the running bounds while l <= r, then freezes."""

    name = "conc_retraction_interval"

    def start(self):
        return ((), None)  # codes so far, frozen pair

    def step(self, state, code):
        codes, frozen = state
        if frozen is not None:
            return state, frozen
        new_codes = codes + (code,)
        lo, hi = interval_bounds(new_codes)
        pair = tuple(interval_gap_codes(lo, hi))
        if lo > hi:
            prev_lo, prev_hi = interval_bounds(codes)
            frozen = tuple(interval_gap_codes(prev_lo, prev_hi))
            return (codes, frozen), frozen
        return (new_codes, None), pair


def conc_retraction_interval() -> Transducer:
    return _ConcRetraction()


# ---------------------------------------------------------------------------
# jumps of choice


def jump_choice_zero_replace() -> Transducer:
    """Replaces zeros by k+1 for an empty ball k, keeping limits intact."""
    k_empty = empty_ball_code()

    def fn(d):
        return (k_empty + 1,) if d == 0 else (d,)

    t = digitwise("jump_choice_zero_replace", fn)

    def map_ep(name):
        if isinstance(name, StreamFamily):
            rows = tuple(_map_stream(r, fn) for r in name.entries)
            cycle = tuple(_map_stream(r, fn) for r in name.cycle)
            return StreamFamily(rows, cycle)
        return _map_stream(name, fn)

    t._map_ep = map_ep
    return t


def _map_stream(s: NameStream, fn) -> NameStream:
    pre = tuple(x for d in s.prefix for x in fn(d))
    per = tuple(x for d in s.period for x in fn(d))
    return ep(pre, per)


# ---------------------------------------------------------------------------
# sorting


class _SortStage(Transducer):
    """Stage s: counts zeros among the first s digits, then spells 0^z 1^w."""

    def __init__(self, s):
        self.s = s
        self.name = f"sort_machine[{s}]"

    def start(self):
        return (0, 0, 0)  # consumed, zeros among first s, emitted

    def step(self, state, d):
        i, z, emitted = state
        if i < self.s:
            return (i + 1, z + (1 if d == 0 else 0), emitted), ()
        out = 0 if emitted < z else 1
        return (i + 1, z, emitted + 1), (out,)


def sort_machine() -> LimitMachine:
    def limit(p: NameStream):
        z = streams.occurrences(p, 0)
        if z == streams.INFINITE:
            return streams.const(0)
        return ep((0,) * int(z), (1,))

    return FnLimitMachine(
        "sort_machine",
        stage=_SortStage,
        stabilization=lambda p: p.size,
        limit=limit,
    )


# ---------------------------------------------------------------------------
# finite-mind-change solvers for completed choice over N (range coding)


class _CnSolver(Transducer):
    """Commits the least unexcluded value; resets whenever the committed
    value gets excluded by the incoming range-coded digits."""

    name = "cn_fmc_solver"

    def pick(self, excluded, committed):
        n = 0
        while n in excluded:
            n += 1
        return n

    def start(self):
        return (frozenset(), None)

    def step(self, state, d):
        excluded, committed = state
        out = []
        if d > 0:
            excluded = excluded | {d - 1}
        if committed is None:
            committed = self.pick(excluded, committed)
            out.append(committed)
        elif committed in excluded:
            committed = self.pick(excluded, committed)
            out.extend([RESET, committed])
        else:
            out.append(committed)
        return (excluded, committed), tuple(out)


class _CnSolverJump(_CnSolver):
    """Variant: after an exclusion, jumps to one past the largest excluded value."""

    name = "cn_fmc_jump"

    def pick(self, excluded, committed):
        if not excluded:
            return 0
        return max(excluded) + 1


class _CnSolverLazy(_CnSolver):
    """Variant: defers its first commitment for a few steps."""

    name = "cn_fmc_lazy"

    def start(self):
        return (frozenset(), None, 0)

    def step(self, state, d):
        excluded, committed, wait = state
        if d > 0:
            excluded = excluded | {d - 1}
        out = []
        if committed is None:
            if wait < 3:
                return (excluded, None, wait + 1), ()
            committed = self.pick(excluded, None)
            out.append(committed)
        elif committed in excluded:
            committed = self.pick(excluded, committed)
            out.extend([RESET, committed])
        else:
            out.append(committed)
        return (excluded, committed, wait), tuple(out)


def cn_fmc_solver() -> Transducer:
    return _CnSolver()


def cn_fmc_jump() -> Transducer:
    return _CnSolverJump()


def cn_fmc_lazy() -> Transducer:
    return _CnSolverLazy()


# ---------------------------------------------------------------------------
# projections


@dataclass
class _PathNode:
    path: tuple[int, ...]  # pair digits from the root
    word: Word  # first components along the path
    children: dict = None

    def __post_init__(self):
        if self.children is None:
            self.children = {}


class ProjectionTree:
    """Bookkeeping of the projection construction.

    The enumerated output describes the complement of the set B of all
    streams that follow an infinite skip path; the first components along
    those paths are exactly the input's recurring points.
    """

    def __init__(self):
        self.root = _PathNode((), ())
        self.stage = 0

    def feed(self, point: NameStream):
        """One stage: extend the skip path along the point by one level."""
        node = self.root
        d = 0
        while True:
            a = point.digit(d)
            child = node.children.get(a)
            if child is None:
                k = self.stage + 1  # fresh second component, never enumerated
                pair_digit = streams.cantor_pair(a, k)
                child = _PathNode(node.path + (pair_digit,), node.word + (a,))
                node.children[a] = child
                break
            node = child
            d += 1
        self.stage += 1

    def live_words(self, depth: int, min_depth: int) -> set[Word]:
        """First-component words (truncated to ``depth``) of paths that grew
        beyond ``min_depth`` levels."""
        out: set[Word] = set()

        def walk(node):
            if len(node.word) >= min_depth:
                out.add(node.word[:depth])
            for ch in node.children.values():
                walk(ch)

        walk(self.root)
        return out

    def skipped_pairs(self) -> set[tuple[int, ...]]:
        pairs = set()

        def walk(node):
            for ch in node.children.values():
                pairs.add(ch.path)
                walk(ch)

        walk(self.root)
        return pairs

    def ball_codes(self, count: int) -> list[int]:
        """A prefix of the dovetailed enumeration of non-skipped balls: round
        r emits the r-th child ball under every node of the skip tree."""
        skipped = self.skipped_pairs()
        nodes: list[_PathNode] = []

        def walk(node):
            nodes.append(node)
            for ch in node.children.values():
                walk(ch)

        walk(self.root)
        out: list[int] = []
        r = 0
        while len(out) < count and r <= 8 * count + 64:
            for node in nodes:
                pp = node.path + (r,)
                if pp not in skipped:
                    out.append(cylinder_code("NN", pp))
                    if len(out) >= count:
                        break
            r += 1
        return out


class _ProjectLift:
    """Exact layer of the projection construction, driven by a stream family."""

    name = "project_lift"

    def run_family(self, fam: StreamFamily, cycles: int = 8) -> ProjectionTree:
        tree = ProjectionTree()
        stages = len(fam.entries) + cycles * len(fam.cycle)
        for i in range(stages):
            tree.feed(fam.row(i))
        return tree


def project_lift() -> _ProjectLift:
    return _ProjectLift()


# ---------------------------------------------------------------------------
# the library table


def library() -> dict[str, object]:
    return {
        "identity": identity_transducer(),
        "minus_one": minus_one_transducer(),
        "retraction_double_completion": retraction_double_completion(),
        "compactness_compress": compactness_compress(),
        "compactness_expand": compactness_expand(),
        "retraction_Nbar": retraction_nbar(),
        "retraction_Bairebar": retraction_bairebar(),
        "inf_to_lpojump": inf_to_lpojump(),
        "lpojump_to_inf": lpojump_to_inf(),
        "inf_to_neg": inf_to_neg(),
        "neg_via_measure": neg_via_measure(),
        "wbwt_to_barCN.K": wbwt_pre(),
        "wbwt_to_barCN.H": wbwt_post(),
        "choice_retraction_cantor": choice_retraction_cantor(),
        "choice_retraction_finite_2": choice_retraction_finite(2),
        "choice_retraction_finite_3": choice_retraction_finite(3),
        "choice_retraction_finite_4": choice_retraction_finite(4),
        "conc_retraction_interval": conc_retraction_interval(),
        "jump_choice_zero_replace": jump_choice_zero_replace(),
        "sort_machine": sort_machine(),
        "cn_fmc_solver": cn_fmc_solver(),
        "cn_fmc_jump": cn_fmc_jump(),
        "cn_fmc_lazy": cn_fmc_lazy(),
        "project_lift": project_lift(),
    }
