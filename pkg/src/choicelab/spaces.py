"""Represented spaces and constructions on representations.

A representation decodes name streams into points.  On the EP fragment every
decode here is exact.  Negative-information closed sets are complements of
finite ball unions and are kept as exact finite descriptors per space.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Optional

from . import streams
from .streams import (
    NameStream,
    StreamFamily,
    Word,
    as_family,
    cantor_pair,
    cantor_unpair,
    ep,
    minus_one,
    plus_one_embed,
)


class Undefined(Exception):
    """Raised when a name denotes no point of the space."""


class _BottomType:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "bot"


BOTTOM = _BottomType()


@dataclass(frozen=True)
class PointName:
    """An exact name: the decoded point plus, when EP-expressible, a stream.

    Constructions whose literal output stream has no finite periodic
    description return these; the harness then works at the point level while
    the machine layer demonstrates the stream behaviour prefix-wise.
    """

    point: object
    stream: Optional[NameStream] = None


Name = object  # NameStream | StreamFamily | PointName


# ---------------------------------------------------------------------------
# dense enumerations and ball codes


def word_index_binary(n: int) -> Word:
    """Bijection N -> {0,1}*: 0 -> empty, else binary digits of n+1 sans lead."""
    if n == 0:
        return ()
    bits = bin(n + 1)[3:]
    return tuple(int(b) for b in bits)


def binary_word_index(w: Word) -> int:
    """Inverse of :func:`word_index_binary`."""
    return int("1" + "".join(str(b) for b in w), 2) - 1


def word_index_nat(n: int) -> Word:
    """Bijection N -> N*: 0 -> empty, n+1 -> (i,) + word(j) for <i,j> = n."""
    out = []
    while n > 0:
        i, n = cantor_unpair(n - 1)
        out.append(i)
    return tuple(out)


def nat_word_index(w: Word) -> int:
    """Inverse of :func:`word_index_nat`."""
    n = 0
    for d in reversed(w):
        n = cantor_pair(d, n) + 1
    return n


def rational_index(n: int) -> Fraction:
    """Surjection N -> Q intersect [0,1]; <p, q-1> maps to p/q."""
    i, j = cantor_unpair(n)
    return Fraction(min(i, j + 1), j + 1)


def ball_code(n: int, i: int, k: int) -> int:
    """Code <n, <i, k>> for the ball around alpha(n) of radius i/(k+1)."""
    return cantor_pair(n, cantor_pair(i, k))


def split_ball_code(m: int) -> tuple[int, Fraction]:
    n, ik = cantor_unpair(m)
    i, k = cantor_unpair(ik)
    return n, Fraction(i, k + 1)


def cylinder_depth(radius: Fraction) -> int:
    """Smallest m with 2^-m < radius (ultrametric 2^-(first difference))."""
    m = 0
    while Fraction(1, 2 ** m) >= radius:
        m += 1
    return m


# Ball values: None = empty, ALL = whole space, or a space-specific payload.
ALL = "ALL"


# ---------------------------------------------------------------------------
# closed-set descriptors


@dataclass(frozen=True)
class NatClosedSet:
    """Subset of N of the form N minus a finite set, or empty."""

    excluded: frozenset[int]
    empty: bool = False

    def is_empty(self) -> bool:
        return self.empty

    def contains(self, n: int) -> bool:
        return not self.empty and n not in self.excluded

    def least(self) -> int:
        if self.empty:
            raise Undefined("empty set")
        n = 0
        while n in self.excluded:
            n += 1
        return n

    def members_upto(self, bound: int) -> list[int]:
        if self.empty:
            return []
        return [n for n in range(bound) if n not in self.excluded]


@dataclass(frozen=True)
class FinClosedSet:
    size: int
    members: frozenset[int]

    def is_empty(self) -> bool:
        return not self.members

    def contains(self, n: int) -> bool:
        return n in self.members

    def least(self) -> int:
        if not self.members:
            raise Undefined("empty set")
        return min(self.members)


@dataclass(frozen=True)
class CantorClosedSet:
    """Clopen subset of 2^N: union of the cylinders ``words`` at ``depth``.

    Canonical form: minimal depth, words as a sorted mask over {0,1}^depth.
    """

    depth: int
    mask: int  # bit i set <=> word with value i (MSB-first digits) included

    @staticmethod
    def full() -> "CantorClosedSet":
        return CantorClosedSet(0, 1)

    @staticmethod
    def empty_set() -> "CantorClosedSet":
        return CantorClosedSet(0, 0)

    @staticmethod
    def from_words(depth: int, words) -> "CantorClosedSet":
        mask = 0
        for w in words:
            mask |= 1 << _word_value(w, depth)
        return canon_cantor(depth, mask)

    def is_empty(self) -> bool:
        return self.mask == 0

    def words(self) -> list[Word]:
        return [
            tuple((i >> (self.depth - 1 - b)) & 1 for b in range(self.depth))
            for i in range(2 ** self.depth)
            if self.mask >> i & 1
        ]

    def contains(self, p: NameStream) -> bool:
        idx = 0
        for b in p.digits(self.depth):
            idx = idx * 2 + b
        return bool(self.mask >> idx & 1)

    def least(self) -> NameStream:
        if self.mask == 0:
            raise Undefined("empty set")
        idx = (self.mask & -self.mask).bit_length() - 1
        w = tuple((idx >> (self.depth - 1 - b)) & 1 for b in range(self.depth))
        return ep(w, (0,))

    def measure(self) -> Fraction:
        return Fraction(bin(self.mask).count("1"), 2 ** self.depth)


def _word_value(w: Word, depth: int) -> int:
    if len(w) > depth:
        raise ValueError("word longer than depth")
    v = 0
    for b in w:
        v = v * 2 + b
    # a shorter word stands for all its depth-extensions; callers expand
    return v << (depth - len(w))


@lru_cache(maxsize=None)
def canon_cantor(depth: int, mask: int) -> CantorClosedSet:
    # merge sibling pairs: bits 2i,2i+1 of the depth mask are the children of
    # word i at depth-1; reduce while every pair is 00 or 11
    while depth > 0:
        half = 2 ** (depth - 1)
        merged = 0
        ok = True
        for i in range(half):
            pair = (mask >> (2 * i)) & 3
            if pair == 3:
                merged |= 1 << i
            elif pair != 0:
                ok = False
                break
        if not ok:
            break
        mask = merged
        depth -= 1
    return CantorClosedSet(depth, mask)


@dataclass(frozen=True)
class BaireClosedSet:
    """Complement of finitely many cylinders w.N^N; kept as a word antichain."""

    excluded: frozenset[Word]

    def __post_init__(self):
        # minimal antichain: drop words with a proper prefix also excluded
        words = sorted(self.excluded, key=len)
        keep: list[Word] = []
        for w in words:
            if not any(w[: len(v)] == v for v in keep):
                keep.append(w)
        object.__setattr__(self, "excluded", frozenset(keep))

    def is_empty(self) -> bool:
        # over an infinite alphabet only the empty word covers everything
        return () in self.excluded

    def contains(self, p: NameStream) -> bool:
        if self.is_empty():
            return False
        return not any(p.digits(len(w)) == w for w in self.excluded)

    def least(self) -> NameStream:
        if self.is_empty():
            raise Undefined("empty set")
        prefix: list[int] = []
        horizon = max((len(w) for w in self.excluded), default=0)
        while len(prefix) < horizon:
            d = 0
            while tuple(prefix + [d]) in self.excluded:
                d += 1
            prefix.append(d)
            if not any(
                w[: len(prefix)] == tuple(prefix) for w in self.excluded
            ):
                break
        return ep(tuple(prefix), (0,))


@dataclass(frozen=True)
class IntervalClosedSet:
    """Finite union of disjoint closed rational segments inside [0,1]."""

    segments: tuple[tuple[Fraction, Fraction], ...]

    @staticmethod
    def from_segments(segs) -> "IntervalClosedSet":
        segs = sorted((Fraction(a), Fraction(b)) for a, b in segs if a <= b)
        merged: list[list[Fraction]] = []
        for a, b in segs:
            if merged and a <= merged[-1][1]:
                merged[-1][1] = max(merged[-1][1], b)
            else:
                merged.append([a, b])
        return IntervalClosedSet(tuple((a, b) for a, b in merged))

    def is_empty(self) -> bool:
        return not self.segments

    def connected(self) -> bool:
        return len(self.segments) <= 1

    def contains(self, x: Fraction) -> bool:
        return any(a <= x <= b for a, b in self.segments)

    def least(self) -> Fraction:
        if not self.segments:
            raise Undefined("empty set")
        return self.segments[0][0]

    def measure(self) -> Fraction:
        return sum((b - a for a, b in self.segments), Fraction(0))


# ---------------------------------------------------------------------------
# ball semantics per space


@lru_cache(maxsize=None)
def ball_semantics(space: str, code: int):
    """Exact description of the coded basic open ball.

    Returns None for the empty ball, ALL for the whole space, and otherwise a
    space-specific payload: a point set (discrete spaces), a cylinder word
    (2^N, N^N) or an open rational interval (the unit interval).
    """
    n, radius = split_ball_code(code)
    if radius == 0:
        return None
    if space == "N":
        if radius > 1:
            return ALL
        return frozenset({n})
    if space.startswith("fin("):
        size = _fin_size(space)
        if radius > 1:
            return ALL
        return frozenset({n % size})
    if space in ("2N", "NN"):
        depth = cylinder_depth(radius)
        if depth == 0:
            return ALL
        w = word_index_binary(n) if space == "2N" else word_index_nat(n)
        padded = (w + (0,) * depth)[:depth]
        return padded
    if space == "I":
        c = rational_index(n)
        return (c - radius, c + radius)
    raise ValueError(f"no ball semantics for space {space}")


def _fin_size(space: str) -> int:
    return int(space[4:-1])


def complement_of_balls(space: str, balls):
    """Closed-set descriptor for ``space minus union(balls)``."""
    balls = list(balls)
    if space == "N":
        if any(b is ALL for b in balls):
            return NatClosedSet(frozenset(), empty=True)
        sets = [b for b in balls if b is not None]
        excluded = frozenset().union(*sets) if sets else frozenset()
        return NatClosedSet(excluded)
    if space.startswith("fin("):
        size = _fin_size(space)
        universe = frozenset(range(size))
        if any(b is ALL for b in balls):
            return FinClosedSet(size, frozenset())
        sets = [b for b in balls if b is not None]
        excluded = frozenset().union(*sets) if sets else frozenset()
        return FinClosedSet(size, universe - excluded)
    if space == "2N":
        if any(b is ALL for b in balls):
            return CantorClosedSet.empty_set()
        words = [b for b in balls if b is not None]
        depth = max((len(w) for w in words), default=0)
        mask = 0
        for w in words:
            for t in range(2 ** (depth - len(w))):
                mask |= 1 << (_word_value(w, depth) + t)
        full = (1 << 2 ** depth) - 1
        return canon_cantor(depth, full & ~mask)
    if space == "NN":
        if any(b is ALL for b in balls):
            return BaireClosedSet(frozenset({()}))
        return BaireClosedSet(frozenset(b for b in balls if b is not None))
    if space == "I":
        ivals = [b for b in balls if b is not None and b is not ALL]
        if any(b is ALL for b in balls):
            return IntervalClosedSet(())
        merged = _merge_open(ivals)
        # sweep: [0, lo) is covered so far; a component starting at a >= lo
        # leaves the closed segment [lo, a] uncovered (endpoints are open)
        segs = []
        lo = Fraction(0)
        for a, b in merged:
            if lo > 1:
                break
            if a >= lo:
                segs.append((lo, min(a, Fraction(1))))
            lo = max(lo, b)
        if lo <= 1:
            segs.append((lo, Fraction(1)))
        return IntervalClosedSet.from_segments(s for s in segs if s[0] <= s[1])
    raise ValueError(f"no closed sets over {space}")


def _merge_open(intervals):
    """Merge strictly overlapping open intervals (open sets: touching stays split)."""
    out: list[list[Fraction]] = []
    for a, b in sorted(intervals):
        if a >= b:
            continue
        if out and a < out[-1][1]:
            out[-1][1] = max(out[-1][1], b)
        else:
            out.append([a, b])
    return [(a, b) for a, b in out]


@lru_cache(maxsize=None)
def complement_of_ball_codes(space: str, codes: frozenset) -> object:
    """Cached closed-set descriptor for space minus the coded balls."""
    return complement_of_balls(space, (ball_semantics(space, c) for c in codes))


def covers_space(space: str, codes) -> bool:
    """Exact test whether the coded balls cover the (compact) space."""
    if space not in ("2N", "I") and not space.startswith("fin("):
        raise ValueError(f"covers_space needs a compact space, got {space}")
    return complement_of_balls(
        space, (ball_semantics(space, c) for c in codes)
    ).is_empty()


def _mask_at_depth(desc: CantorClosedSet, depth: int) -> int:
    k = depth - desc.depth
    if k == 0:
        return desc.mask
    mask = 0
    m = desc.mask
    i = 0
    block = (1 << (1 << k)) - 1
    while m:
        if m & 1:
            mask |= block << (i << k)
        m >>= 1
        i += 1
    return mask


@lru_cache(maxsize=None)
def _remove_cylinder(depth0: int, mask0: int, ball: tuple) -> "CantorClosedSet":
    desc = CantorClosedSet(depth0, mask0)
    depth = max(depth0, len(ball))
    mask = _mask_at_depth(desc, depth)
    width = 1 << (depth - len(ball))
    clear = ((1 << width) - 1) << _word_value(ball, depth)
    return canon_cantor(depth, mask & ~clear)


def remove_ball(space: str, desc, ball):
    """``desc`` minus one ball, exactly (discrete spaces and Cantor space)."""
    if ball is None:
        return desc
    if space == "2N":
        if ball is ALL:
            return CantorClosedSet.empty_set()
        return _remove_cylinder(desc.depth, desc.mask, ball)
    if space.startswith("fin("):
        if ball is ALL:
            return FinClosedSet(desc.size, frozenset())
        return FinClosedSet(desc.size, desc.members - ball)
    if space == "N":
        if ball is ALL:
            return NatClosedSet(frozenset(), empty=True)
        if desc.is_empty():
            return desc
        return NatClosedSet(desc.excluded | ball)
    raise ValueError(f"no incremental ball removal for {space}")


def interval_bounds(codes) -> tuple[Fraction, Fraction]:
    """The pair (l, r): l = sup{x : [0,x] covered}, r = inf{y : [y,1] covered},
    with l = 0 resp. r = 1 when the respective set is empty."""
    ivals = []
    for c in codes:
        b = ball_semantics("I", c)
        if b is ALL:
            ivals.append((Fraction(-1), Fraction(2)))
        elif b is not None:
            ivals.append(b)
    merged = _merge_open(ivals)
    l = Fraction(0)
    r = Fraction(1)
    for a, b in merged:
        if a < 0 < b:
            l = min(b, Fraction(1))
        if a < 1 < b:
            r = max(a, Fraction(0))
    return l, r


def interval_gap_codes(lo: Fraction, hi: Fraction) -> list[int]:
    """Ball codes for the relative-open intervals [0, lo) and (hi, 1]."""
    out = []
    if lo > 0:
        out.append(_interval_code(Fraction(0), lo))
    if hi < 1:
        out.append(_interval_code(Fraction(1), 1 - hi))
    if not out:
        out.append(empty_ball_code())
    return out


def _interval_code(center: Fraction, radius: Fraction) -> int:
    n = cantor_pair(center.numerator, center.denominator - 1)
    return ball_code(n, radius.numerator, radius.denominator - 1)


def interval_code(a: Fraction, b: Fraction) -> int:
    """Ball code for the open interval (a, b) with rational midpoint in [0,1]."""
    center = (a + b) / 2
    radius = (b - a) / 2
    if center < 0 or center > 1:
        raise ValueError("ball centers live in [0,1]")
    return _interval_code(center, radius)


def empty_ball_code() -> int:
    return ball_code(0, 0, 0)


def cylinder_code(space: str, word: Word) -> int:
    """Ball code whose ball is exactly the cylinder word.2^N (or word.N^N)."""
    if space == "2N":
        n = binary_word_index(word)
    elif space == "NN":
        n = nat_word_index(word)
    else:
        raise ValueError(space)
    depth = len(word)
    # radius with cylinder_depth(radius) == depth: 2^-depth < r <= 2^-(depth-1)
    r = Fraction(1, 2 ** depth) + Fraction(1, 2 ** (depth + 2)) if depth else Fraction(2)
    return ball_code(n, r.numerator, r.denominator - 1)


def nat_singleton_code(n: int) -> int:
    return ball_code(n, 1, 0)


def full_ball_code() -> int:
    return ball_code(0, 2, 0)


# ---------------------------------------------------------------------------
# representations


class Representation:
    """A named partial surjection from name streams onto a point set."""

    space: str
    total: bool
    precomplete: bool

    def decode_ep(self, name: Name):
        """Exact decode of an EP name (or family/point name); may raise Undefined."""
        raise NotImplementedError

    def decode(self, name: Name, depth: int):
        """Budgeted monotone observation: ("point", x), ("pending",) or
        ("undefined",).  Commits are final."""
        if isinstance(name, NameStream) and not name.is_ep:
            return ("pending",)
        if isinstance(name, NameStream) and depth < name.size:
            return ("pending",)
        try:
            return ("point", self.decode_ep(name))
        except Undefined:
            return ("undefined",)

    def encode(self, point) -> Name:
        raise NotImplementedError

    def encode_variants(self, point, rng) -> list[Name]:
        """The canonical name plus adversarially shaped names of ``point``."""
        return [self.encode(point)]

    def contains_point(self, point) -> bool:
        raise NotImplementedError

    def sort_ok(self, point) -> bool:
        """Whether ``point`` has the right payload kind for this space (it may
        still lie outside the space, e.g. an out-of-range digit)."""
        return self.contains_point(point)

    def commit_bound(self, name: NameStream) -> int:
        """Depth at which decode commits on an EP name (total reps only)."""
        return name.size


def _resolve(name: Name) -> NameStream:
    if isinstance(name, PointName):
        if name.stream is None:
            raise Undefined("symbolic name without a concrete stream")
        return name.stream
    if isinstance(name, NameStream):
        return name
    raise Undefined(f"expected a plain stream name, got {type(name).__name__}")


class NatRep(Representation):
    space = "N"
    total = True
    precomplete = False

    def decode_ep(self, name):
        return _resolve(name).digit(0)

    def encode(self, point):
        return ep((point,), (0,))

    def encode_variants(self, point, rng):
        return [
            self.encode(point),
            ep((point,), (rng.randrange(1, 5),)),
            ep((point, rng.randrange(7)), (0,)),
        ]

    def contains_point(self, point):
        return isinstance(point, int) and point >= 0


class FinRep(Representation):
    total = False
    precomplete = False

    def __init__(self, size: int):
        self.size = size
        self.space = f"fin({size})"

    def decode_ep(self, name):
        d = _resolve(name).digit(0)
        if d >= self.size:
            raise Undefined(f"digit {d} outside fin({self.size})")
        return d

    def encode(self, point):
        return ep((point,), (0,))

    def encode_variants(self, point, rng):
        return [self.encode(point), ep((point,), (rng.randrange(9),))]

    def contains_point(self, point):
        return isinstance(point, int) and 0 <= point < self.size

    def sort_ok(self, point):
        return isinstance(point, int) and point >= 0


class SierpRep(Representation):
    space = "S"
    total = True
    precomplete = True

    def decode_ep(self, name):
        s = _resolve(name)
        s._require_ep()
        return 0 if (not any(s.prefix) and s.period == (0,)) else 1

    def decode(self, name, depth):
        if isinstance(name, NameStream) and not name.is_ep:
            # a nonzero digit commits 1; silence stays pending
            if any(name.digit(i) for i in range(depth)):
                return ("point", 1)
            return ("pending",)
        return super().decode(name, depth)

    def encode(self, point):
        return streams.const(0) if point == 0 else streams.const(1)

    def encode_variants(self, point, rng):
        if point == 0:
            return [streams.const(0)]
        return [streams.const(1), ep((0,) * rng.randrange(1, 4) + (1,), (0,))]

    def contains_point(self, point):
        return point in (0, 1)

    def sort_ok(self, point):
        return isinstance(point, int) and point >= 0


class CantorRep(Representation):
    space = "2N"
    total = False
    precomplete = False

    def decode_ep(self, name):
        s = _resolve(name)
        s._require_ep()
        if any(d > 1 for d in s.prefix + s.period):
            raise Undefined("not a binary stream")
        return s

    def encode(self, point):
        return point

    def contains_point(self, point):
        return (
            isinstance(point, NameStream)
            and point.is_ep
            and all(d <= 1 for d in point.prefix + point.period)
        )

    def sort_ok(self, point):
        return isinstance(point, NameStream)


class BaireRep(Representation):
    space = "NN"
    total = True
    precomplete = False

    def decode_ep(self, name):
        s = _resolve(name)
        s._require_ep()
        return s

    def encode(self, point):
        return point

    def contains_point(self, point):
        return isinstance(point, NameStream) and point.is_ep


class IntervalRep(Representation):
    """Unit interval restricted to rational points: a name's first digit is an
    index into the fixed rational enumeration."""

    space = "I"
    total = True
    precomplete = False

    def decode_ep(self, name):
        return rational_index(_resolve(name).digit(0))

    def encode(self, point):
        f = Fraction(point)
        return ep((cantor_pair(f.numerator, f.denominator - 1),), (0,))

    def encode_variants(self, point, rng):
        f = Fraction(point)
        k = rng.randrange(1, 4)
        alt = cantor_pair(f.numerator * k, f.denominator * k - 1)
        return [self.encode(point), ep((alt,), (1,))]

    def contains_point(self, point):
        try:
            f = Fraction(point)
        except (TypeError, ValueError):
            return False
        return 0 <= f <= 1


class ClosedRep(Representation):
    """Negative-information closed sets: names enumerate ball codes."""

    total = True
    precomplete = True

    def __init__(self, base_space: str):
        if base_space not in ("N", "2N", "NN", "I") and not base_space.startswith("fin("):
            raise ValueError(f"unsupported closed-set base space {base_space}")
        self.base = base_space
        self.space = f"A-({base_space})"

    def decode_ep(self, name):
        if isinstance(name, PointName):
            return name.point
        s = name
        s._require_ep()
        codes = set(s.prefix) | set(s.period)
        return complement_of_balls(
            self.base, (ball_semantics(self.base, c) for c in codes)
        )

    def encode(self, point):
        codes = descriptor_ball_codes(self.base, point)
        if not codes:
            codes = [empty_ball_code()]
        return ep(tuple(codes[:-1]), (codes[-1],))

    def encode_variants(self, point, rng):
        codes = descriptor_ball_codes(self.base, point)
        base = self.encode(point)
        shuffled = list(codes)
        rng.shuffle(shuffled)
        padded = shuffled + [empty_ball_code()]
        return [base, ep(tuple(padded[:-1]), (padded[-1],))]

    def contains_point(self, point):
        expected = {
            "N": NatClosedSet,
            "2N": CantorClosedSet,
            "NN": BaireClosedSet,
            "I": IntervalClosedSet,
        }.get(self.base, FinClosedSet)
        return isinstance(point, expected)


def descriptor_ball_codes(space: str, desc) -> list[int]:
    """Ball codes whose union is the complement of ``desc``."""
    if space == "N":
        if desc.is_empty():
            return [full_ball_code()]
        return [nat_singleton_code(n) for n in sorted(desc.excluded)]
    if space.startswith("fin("):
        size = _fin_size(space)
        if not desc.members:
            return [full_ball_code()]
        return [nat_singleton_code(n) for n in sorted(frozenset(range(size)) - desc.members)]
    if space == "2N":
        if desc.is_empty():
            return [full_ball_code()]
        comp = canon_cantor(desc.depth, ((1 << 2 ** desc.depth) - 1) & ~desc.mask)
        return [cylinder_code("2N", w) for w in comp.words()]
    if space == "NN":
        return [cylinder_code("NN", w) for w in sorted(desc.excluded)]
    if space == "I":
        if desc.is_empty():
            return [full_ball_code()]
        # complement gaps: [0, first.lo), (seg.hi, next.lo), (last.hi, 1]
        codes = []
        segs = desc.segments
        if segs[0][0] > 0:
            codes.append(_interval_code(Fraction(0), segs[0][0]))
        for (_, b1), (a2, _) in zip(segs, segs[1:]):
            codes.append(interval_code(b1, a2))
        if segs[-1][1] < 1:
            codes.append(_interval_code(Fraction(1), 1 - segs[-1][1]))
        return codes
    raise ValueError(space)


class RangeRep(Representation):
    """A-(N) by range coding: a name q denotes N minus range(q-1)."""

    space = "A-(N)/range"
    total = True
    precomplete = True

    def decode_ep(self, name):
        if isinstance(name, PointName):
            return name.point
        m = minus_one(name)
        listed = frozenset(m.word) if m.kind == "finite" else streams.digit_range(m.stream)
        return NatClosedSet(listed)

    def encode(self, point):
        if point.is_empty():
            raise Undefined("empty set has no EP range-coded name")
        return ep(tuple(n + 1 for n in sorted(point.excluded)), (0,))

    def encode_variants(self, point, rng):
        if point.is_empty():
            return [PointName(point)]
        listed = [n + 1 for n in sorted(point.excluded)]
        rng.shuffle(listed)
        noisy = []
        for d in listed:
            noisy.extend([0] * rng.randrange(2) + [d])
        return [self.encode(point), ep(tuple(noisy), (0,))]

    def contains_point(self, point):
        return isinstance(point, NatClosedSet)


def range_to_ball(desc: NatClosedSet) -> NameStream:
    """Converter: range-coded set to a ball-coded name of the same set."""
    return ClosedRep("N").encode(desc)


def ball_to_range(name: NameStream) -> NameStream:
    """Converter: ball-coded A-(N) name to a range-coded name (EP, non-empty sets)."""
    desc = ClosedRep("N").decode_ep(name)
    return RangeRep().encode(desc)


class PrecompletionRep(Representation):
    """decode'(p) = decode(p-1) where defined."""

    def __init__(self, inner: Representation):
        self.inner = inner
        self.space = inner.space
        self.total = False
        self.precomplete = True

    def decode_ep(self, name):
        m = minus_one(_resolve(name))
        if m.kind == "finite":
            raise Undefined("p-1 is a finite word")
        return self.inner.decode_ep(m.stream)

    def encode(self, point):
        return plus_one_embed(self.inner.encode(point))

    def encode_variants(self, point, rng):
        outs = []
        for v in self.inner.encode_variants(point, rng):
            outs.append(plus_one_embed(v))
        return outs

    def contains_point(self, point):
        return self.inner.contains_point(point)


class CompletedRep(Representation):
    """Total precomplete representation of X plus a bottom point."""

    def __init__(self, inner: Representation):
        self.inner = inner
        self.space = f"bar({inner.space})"
        self.total = True
        self.precomplete = True

    def decode_ep(self, name):
        if isinstance(name, PointName):
            return name.point
        m = minus_one(name)
        if m.kind == "finite":
            return BOTTOM
        try:
            return self.inner.decode_ep(m.stream)
        except Undefined:
            return BOTTOM

    def encode(self, point):
        if point is BOTTOM:
            return streams.const(0)
        return plus_one_embed(self.inner.encode(point))

    def encode_variants(self, point, rng):
        if point is BOTTOM:
            return [streams.const(0), ep((0, 0, 0), (0,))]
        outs = []
        for v in self.inner.encode_variants(point, rng):
            emb = plus_one_embed(v)
            outs.append(emb)
            outs.append(ep((0,) * rng.randrange(1, 4) + emb.prefix, emb.period))
        return outs

    def contains_point(self, point):
        return point is BOTTOM or self.inner.contains_point(point)

    def sort_ok(self, point):
        return point is BOTTOM or self.inner.sort_ok(point)

    def commit_bound(self, name: NameStream) -> int:
        return len(name.prefix) + 2 * len(name.period) + 1


class JumpedRep(Representation):
    """Input-side jump: names are limits of name sequences (stream families)."""

    def __init__(self, inner: Representation):
        self.inner = inner
        self.space = f"{inner.space}'"
        self.total = False
        self.precomplete = inner.precomplete

    def decode_ep(self, name):
        if isinstance(name, PointName):
            return name.point
        fam = as_family(name)
        lim = fam.limit()
        if lim is None:
            raise Undefined("the name sequence does not converge")
        return self.inner.decode_ep(lim)

    def encode(self, point):
        return streams.constant_family(self.inner.encode(point))

    def encode_variants(self, point, rng):
        inner_names = self.inner.encode_variants(point, rng)
        outs: list[Name] = [streams.constant_family(n) for n in inner_names]
        junk = ep((rng.randrange(5),), (rng.randrange(3),))
        outs.append(StreamFamily((junk,) * rng.randrange(1, 4), (inner_names[0],)))
        return outs

    def contains_point(self, point):
        return self.inner.contains_point(point)


# ---------------------------------------------------------------------------
# space construction and operations named in the module contract


_BASE_REPS = {
    "N": NatRep,
    "S": SierpRep,
    "2N": CantorRep,
    "NN": BaireRep,
    "I": IntervalRep,
}


def make_space(kind: str) -> Representation:
    """Canonical representation for a named space.

    Kinds: ``N``, ``S``, ``2N``, ``NN``, ``I``, ``fin(k)``, ``A-(X)`` for a
    base space X, and ``A-(N)/range`` for the range coding of A-(N).
    """
    if kind in _BASE_REPS:
        return _BASE_REPS[kind]()
    if kind.startswith("fin("):
        return FinRep(_fin_size(kind))
    if kind == "A-(N)/range":
        return RangeRep()
    if kind.startswith("A-(") and kind.endswith(")"):
        return ClosedRep(kind[3:-1])
    raise ValueError(f"unknown space kind {kind!r}")


def precompletion(r: Representation) -> Representation:
    return PrecompletionRep(r)


def completion(r: Representation) -> Representation:
    return CompletedRep(r)


def jump(r: Representation) -> Representation:
    return JumpedRep(r)


def jump_decode(r: Representation, name: Name):
    """Decode a name of the jumped representation (family or tupled stream)."""
    return JumpedRep(r).decode_ep(name)


def set_members(rep: ClosedRep, name: NameStream, depth: int = 0):
    """Exact set denoted by an EP ball enumeration."""
    if isinstance(name, NameStream) and not name.is_ep:
        raise ValueError("set_members requires an EP enumeration")
    return rep.decode_ep(name)


def measure_upper(name: NameStream, stage: int) -> Fraction:
    """Upper approximation of the uniform measure of a coded closed A in 2^N.

    A stage absorbs one newly seen distinct ball code, so the value is
    non-increasing in ``stage`` and equals the exact measure for every stage
    >= the number of distinct codes in the description.
    """
    name._require_ep()
    codes_in_order = list(name.prefix) + list(name.period)
    seen: list[int] = []
    for c in codes_in_order:
        if c not in seen:
            seen.append(c)
            if len(seen) >= stage:
                break
    taken = seen[:stage]
    return complement_of_balls("2N", (ball_semantics("2N", c) for c in taken)).measure()
