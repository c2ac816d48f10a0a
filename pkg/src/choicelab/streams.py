"""Eventually periodic name streams over Baire space.

A name stream is an element of ``N^N``.  The decidable fragment used by all
exact oracles is the set of eventually periodic (EP) streams ``u . v^omega``
with ``u, v`` finite words of naturals.  Streams may alternatively be backed
by a digit generator; such streams only support step-bounded inspection and
are rejected by every exact operation.

Canonical form of an EP stream: the period is primitive (not a proper power)
and the prefix is as short as possible, so two EP streams denote the same
element of Baire space iff their canonical forms are equal.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional

Word = tuple[int, ...]


# ---------------------------------------------------------------------------
# pairing on naturals


def cantor_pair(i: int, j: int) -> int:
    """Bijection N^2 -> N, ``<i,j> = (i+j)(i+j+1)/2 + j``."""
    return (i + j) * (i + j + 1) // 2 + j


def cantor_unpair(n: int) -> tuple[int, int]:
    w = (math.isqrt(8 * n + 1) - 1) // 2
    j = n - w * (w + 1) // 2
    return w - j, j


def triangle(m: int) -> int:
    return m * (m + 1) // 2


# ---------------------------------------------------------------------------
# canonicalization


def _primitive(word: Word) -> Word:
    """Shortest word whose power equals ``word``."""
    n = len(word)
    for d in range(1, n + 1):
        if n % d == 0 and word == word[:d] * (n // d):
            return word[:d]
    return word


def _canon(prefix: Word, period: Word) -> tuple[Word, Word]:
    period = _primitive(period)
    prefix = list(prefix)
    period = list(period)
    # absorb the prefix tail into the period by rotating; this yields the
    # minimal prefix, and rotations keep the period primitive
    while prefix and prefix[-1] == period[-1]:
        period.insert(0, period.pop())
        prefix.pop()
    return tuple(prefix), tuple(period)


@dataclass(frozen=True)
class NameStream:
    """A point of Baire space, either EP (``u . v^omega``) or generator-backed.

    ``gen`` is a total digit source used only for step-bounded runs; when it
    is present ``prefix``/``period`` are ignored.  ``origin`` optionally keeps
    the finite description a generator stream was built from (e.g. the stream
    family behind an infinite tupling).
    """

    prefix: Word = ()
    period: Word = (0,)
    gen: Optional[Callable[[int], int]] = field(default=None, compare=False)
    origin: object = field(default=None, compare=False)

    @property
    def is_ep(self) -> bool:
        return self.gen is None

    def digit(self, i: int) -> int:
        if self.gen is not None:
            return self.gen(i)
        if i < len(self.prefix):
            return self.prefix[i]
        return self.period[(i - len(self.prefix)) % len(self.period)]

    def digits(self, n: int) -> Word:
        return tuple(self.digit(i) for i in range(n))

    @property
    def size(self) -> int:
        """Description size |u| + |v| of an EP stream."""
        self._require_ep()
        return len(self.prefix) + len(self.period)

    def _require_ep(self) -> None:
        if not self.is_ep:
            raise ValueError("operation requires an eventually periodic stream")

    def literal(self) -> str:
        self._require_ep()
        u = ",".join(str(d) for d in self.prefix)
        v = ",".join(str(d) for d in self.period)
        return f"{u};{v}"

    def __str__(self) -> str:  # pragma: no cover - debugging aid
        return self.literal() if self.is_ep else "<generator stream>"


def ep(prefix: Iterable[int] = (), period: Iterable[int] = (0,)) -> NameStream:
    """Canonical EP stream ``u . v^omega``."""
    u, v = tuple(prefix), tuple(period)
    if not v:
        raise ValueError("period must be non-empty")
    if any(d < 0 for d in u + v):
        raise ValueError("digits must be naturals")
    u, v = _canon(u, v)
    return NameStream(u, v)


def const(d: int) -> NameStream:
    return ep((), (d,))


def from_gen(fn: Callable[[int], int], origin: object = None) -> NameStream:
    return NameStream((), (0,), gen=fn, origin=origin)


def parse_stream(text: str) -> NameStream:
    """Parse the ``"u;v"`` literal, e.g. ``"2,0,4,1;0"``."""
    if ";" not in text:
        raise ValueError(f"stream literal needs a ';' separator: {text!r}")
    left, right = text.split(";", 1)

    def digits(part: str) -> Word:
        part = part.strip()
        if not part:
            return ()
        try:
            return tuple(int(tok) for tok in part.split(","))
        except ValueError as exc:
            raise ValueError(f"bad digit in stream literal {text!r}") from exc

    u, v = digits(left), digits(right)
    if not v:
        raise ValueError(f"stream literal needs a non-empty period: {text!r}")
    return ep(u, v)


# ---------------------------------------------------------------------------
# the digit-shift p-1 and its section


@dataclass(frozen=True)
class MinusOneResult:
    """Outcome of the p-1 concatenation: a finite word or an EP stream."""

    kind: str  # "finite" | "infinite"
    word: Word = ()
    stream: Optional[NameStream] = None


def minus_one(p: NameStream) -> MinusOneResult:
    """Concatenate ``p(i) - 1`` over all digits, zeros contributing nothing.

    Decidably finite for EP input (finite iff the period is all-zero).
    """
    p._require_ep()
    head = tuple(d - 1 for d in p.prefix if d > 0)
    body = tuple(d - 1 for d in p.period if d > 0)
    if not body:
        return MinusOneResult("finite", word=head)
    return MinusOneResult("infinite", stream=ep(head, body))


def plus_one_embed(q: NameStream) -> NameStream:
    """Digit-wise ``d -> d + 1``; section of :func:`minus_one`."""
    q._require_ep()
    return ep(tuple(d + 1 for d in q.prefix), tuple(d + 1 for d in q.period))


# ---------------------------------------------------------------------------
# pairing of two streams (strict interleaving)


def pair_streams(p: NameStream, q: NameStream) -> NameStream:
    """Interleave: result(2n) = p(n), result(2n+1) = q(n)."""
    if p.is_ep and q.is_ep:
        o = max(len(p.prefix), len(q.prefix))
        lcm = math.lcm(len(p.period), len(q.period))
        pre = []
        for n in range(o):
            pre += [p.digit(n), q.digit(n)]
        per = []
        for n in range(o, o + lcm):
            per += [p.digit(n), q.digit(n)]
        return ep(pre, per)
    return from_gen(lambda i: p.digit(i // 2) if i % 2 == 0 else q.digit(i // 2))


def _half(s: NameStream, parity: int) -> NameStream:
    if s.is_ep:
        u = len(s.prefix)
        need = (u + 1) // 2
        pre = [s.digit(2 * n + parity) for n in range(need)]
        per = [s.digit(2 * (need + k) + parity) for k in range(len(s.period))]
        return ep(pre, per)
    return from_gen(lambda n: s.digit(2 * n + parity))


def project_left(s: NameStream) -> NameStream:
    return _half(s, 0)


def project_right(s: NameStream) -> NameStream:
    return _half(s, 1)


# ---------------------------------------------------------------------------
# stream families (desk-scale names for jumped representations)


@dataclass(frozen=True)
class StreamFamily:
    """A sequence of streams that is eventually cyclic: ``entries`` followed
    by ``cycle`` repeated forever.  The pointwise limit exists iff the cycle
    has collapsed to a single row."""

    entries: tuple[NameStream, ...]
    cycle: tuple[NameStream, ...]

    def __post_init__(self):
        if not self.cycle:
            raise ValueError("cycle must be non-empty")
        object.__setattr__(self, "cycle", _primitive(self.cycle))

    def row(self, i: int) -> NameStream:
        if i < len(self.entries):
            return self.entries[i]
        return self.cycle[(i - len(self.entries)) % len(self.cycle)]

    def limit(self) -> Optional[NameStream]:
        """Pointwise limit of the rows, or None if it does not exist."""
        return self.cycle[0] if len(self.cycle) == 1 else None

    def cluster_streams(self) -> tuple[NameStream, ...]:
        """Rows occurring infinitely often (= the cycle, deduplicated)."""
        seen: list[NameStream] = []
        for s in self.cycle:
            if s not in seen:
                seen.append(s)
        return tuple(seen)


def constant_family(s: NameStream) -> StreamFamily:
    return StreamFamily((), (s,))


def row_of_stream(p: NameStream, n: int) -> NameStream:
    """Row ``n`` of ``p`` read as a tupled family: ``k -> p(<n,k>)``.

    For EP ``p`` the positions ``<n,k>`` are eventually periodic mod the
    period length with period ``2|v|`` in ``k``, so the row is EP.
    """
    p._require_ep()
    u, v = len(p.prefix), len(p.period)
    per = 2 * v
    k0 = 0
    while cantor_pair(n, k0) < u:
        k0 += 1
    pre = [p.digit(cantor_pair(n, k)) for k in range(k0)]
    cyc = [p.digit(cantor_pair(n, k)) for k in range(k0, k0 + per)]
    return ep(pre, cyc)


def family_from_stream(p: NameStream) -> StreamFamily:
    """Read an EP stream as the family of its tupled rows.

    Rows ``n`` and ``n + 2|v|`` agree once every position ``<n,k>`` lies in
    the periodic part, which holds as soon as ``triangle(n) >= |u|``; hence
    the row sequence is eventually cyclic with cycle length dividing ``2|v|``.
    """
    p._require_ep()
    u, v = len(p.prefix), len(p.period)
    q = 2 * v
    n0 = 0
    while triangle(n0) < u:
        n0 += 1
    entries = tuple(row_of_stream(p, n) for n in range(n0))
    cycle = tuple(row_of_stream(p, n) for n in range(n0, n0 + q))
    return StreamFamily(entries, cycle)


def tuple_infinite(fam: StreamFamily) -> NameStream:
    """Tupling ``<p_0, p_1, ...>``: digit at ``<i,j>`` is ``row_i(j)``.

    Families of a single constant row tuple to an EP stream; other families
    yield a generator stream carrying the family as its finite description.
    """
    rows = set(fam.entries) | set(fam.cycle)
    if len(rows) == 1:
        (r,) = rows
        if not r.prefix and len(r.period) == 1:
            return r
    def digit(m: int) -> int:
        i, j = cantor_unpair(m)
        return fam.row(i).digit(j)
    return from_gen(digit, origin=fam)


def project_component(s: NameStream, i: int) -> NameStream:
    """Component ``i`` of a tupled stream."""
    if isinstance(s.origin, StreamFamily):
        return s.origin.row(i)
    if s.is_ep:
        return row_of_stream(s, i)
    return from_gen(lambda j: s.digit(cantor_pair(i, j)))


def as_family(name: NameStream | StreamFamily) -> StreamFamily:
    if isinstance(name, StreamFamily):
        return name
    if isinstance(name.origin, StreamFamily):
        return name.origin
    return family_from_stream(name)


# ---------------------------------------------------------------------------
# digit statistics used by problem oracles


INFINITE = math.inf


def count_in_period(p: NameStream, d: int) -> int:
    p._require_ep()
    return p.period.count(d)


def occurrences(p: NameStream, d: int):
    """Number of occurrences of digit ``d``: an int or ``INFINITE``."""
    p._require_ep()
    if d in p.period:
        return INFINITE
    return p.prefix.count(d)


def position_of_nth(p: NameStream, d: int, n: int) -> Optional[int]:
    """Position of the ``n``-th occurrence (1-based) of digit ``d``, or None."""
    p._require_ep()
    seen = 0
    in_prefix = p.prefix.count(d)
    if n <= in_prefix:
        for i, x in enumerate(p.prefix):
            if x == d:
                seen += 1
                if seen == n:
                    return i
    per = p.period.count(d)
    if per == 0:
        return None
    rest = n - in_prefix
    full, k = divmod(rest - 1, per)
    seen = 0
    for j, x in enumerate(p.period):
        if x == d:
            if seen == k:
                return len(p.prefix) + full * len(p.period) + j
            seen += 1
    raise AssertionError("unreachable")


def eventual_value(p: NameStream) -> Optional[int]:
    """The limit of the digit sequence, or None if the digits do not settle."""
    p._require_ep()
    vals = set(p.period)
    return p.period[0] if len(vals) == 1 else None


def digit_range(p: NameStream) -> frozenset[int]:
    p._require_ep()
    return frozenset(p.prefix) | frozenset(p.period)
