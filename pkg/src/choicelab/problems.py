"""The catalog of multivalued problems as executable specifications.

Each problem carries a domain test, an output-membership checker and a
deterministic canonical solver, all exact on the EP fragment.  Variants
(totalization, completion, jump) wrap a base problem and adjust the input
representation and the accept/solve behaviour off the original domain.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Callable, Optional

from . import spaces, streams
from .spaces import (
    BOTTOM,
    CantorClosedSet,
    IntervalClosedSet,
    NatClosedSet,
    PointName,
    Representation,
    Undefined,
    make_space,
)
from .streams import NameStream, StreamFamily, as_family, ep


@dataclass(frozen=True)
class Problem:
    name: str
    in_rep: Representation
    out_rep: Representation
    dom: Callable[[object], bool]
    member: Callable[[object, object], bool]
    solver: Callable[[object], object]
    # least point of the output space, used by totalized variants off-domain
    least_out: Callable[[], object]

    def with_input_rep(self, rep: Representation) -> "Problem":
        return replace(self, in_rep=rep)


@dataclass(frozen=True)
class ProblemVariant:
    """A problem together with one of the variant transformations.

    ``in_rep_override`` replaces the derived input representation; used for
    the completed choice over N presented directly in the (already total and
    precomplete) range coding.
    """

    base: Problem
    variant: str = "plain"  # plain | totalization | completion | jump
    in_rep_override: Optional[Representation] = None

    @property
    def name(self) -> str:
        if self.variant == "plain":
            return self.base.name
        if self.variant == "totalization":
            return f"T({self.base.name})"
        if self.variant == "completion":
            return f"bar({self.base.name})"
        return f"{self.base.name}'"

    @property
    def in_rep(self) -> Representation:
        if self.in_rep_override is not None:
            return self.in_rep_override
        if self.variant == "completion":
            return spaces.completion(self.base.in_rep)
        if self.variant == "jump":
            return spaces.jump(self.base.in_rep)
        return self.base.in_rep

    @property
    def out_rep(self) -> Representation:
        if self.variant == "completion":
            return spaces.completion(self.base.out_rep)
        return self.base.out_rep

    def dom(self, x) -> bool:
        if self.variant in ("totalization", "completion"):
            return True
        return x is not BOTTOM and self.base.dom(x)

    def in_base_domain(self, x) -> bool:
        return x is not BOTTOM and self.base.dom(x)

    def member(self, x, y) -> bool:
        if self.variant == "completion":
            if y is BOTTOM:
                return not self.in_base_domain(x)
            if not self.base.out_rep.sort_ok(y):
                raise ValueError(f"output sort mismatch for {self.name}: {y!r}")
            if not self.in_base_domain(x):
                return True
            if not self.base.out_rep.contains_point(y):
                return False
            return self.base.member(x, y)
        if not self.base.out_rep.sort_ok(y):
            raise ValueError(f"output sort mismatch for {self.name}: {y!r}")
        if not self.base.out_rep.contains_point(y):
            return False
        if not self.in_base_domain(x):
            # totalization off the base domain accepts anything in the output
            # space; plain/jump membership is vacuous off the domain
            return True
        return self.base.member(x, y)

    def solve(self, x):
        if self.in_base_domain(x):
            return self.base.solver(x)
        if self.variant == "completion":
            return BOTTOM
        if self.variant == "totalization":
            return self.base.least_out()
        raise Undefined(f"{self.name}: input outside the domain")


def plain(p: Problem) -> ProblemVariant:
    return ProblemVariant(p, "plain")


# ---------------------------------------------------------------------------
# oracles on EP streams


def cluster_points(p: NameStream) -> frozenset[int]:
    """Digits of p occurring infinitely often (= digits of the period)."""
    p._require_ep()
    return frozenset(p.period)


def has_infinitely_many(p: NameStream, d: int) -> bool:
    return streams.occurrences(p, d) == streams.INFINITE


def zeros_total(p: NameStream):
    return streams.occurrences(p, 0)


def _is_binary(p: NameStream) -> bool:
    return p.is_ep and all(d <= 1 for d in p.prefix + p.period)


def _limit_of_binary(q: NameStream) -> Optional[int]:
    return streams.eventual_value(q)


# ---------------------------------------------------------------------------
# catalog


def _lpo_value(p: NameStream) -> int:
    return 0 if (0 in p.prefix or 0 in p.period) else 1


def _sort_value(p: NameStream) -> NameStream:
    z = zeros_total(p)
    if z == streams.INFINITE:
        return streams.const(0)
    return ep((0,) * int(z), (1,))


def _catalog() -> dict[str, Problem]:
    N = make_space("N")
    NN = make_space("NN")
    C2N = make_space("2N")
    S = make_space("S")
    I = make_space("I")

    problems: dict[str, Problem] = {}

    def add(p: Problem):
        problems[p.name] = p

    add(
        Problem(
            "LPO",
            in_rep=NN,
            out_rep=make_space("fin(2)"),
            dom=lambda p: True,
            member=lambda p, y: y == _lpo_value(p),
            solver=_lpo_value,
            least_out=lambda: 0,
        )
    )
    add(
        Problem(
            "LPO_S",
            in_rep=NN,
            out_rep=S,
            dom=lambda p: True,
            member=lambda p, y: y == _lpo_value(p),
            solver=_lpo_value,
            least_out=lambda: 0,
        )
    )
    add(
        Problem(
            "INF",
            in_rep=NN,
            out_rep=make_space("fin(2)"),
            dom=lambda p: True,
            member=lambda p, y: y == (1 if has_infinitely_many(p, 0) else 0),
            solver=lambda p: 1 if has_infinitely_many(p, 0) else 0,
            least_out=lambda: 0,
        )
    )
    add(
        Problem(
            "INF_S",
            in_rep=NN,
            out_rep=S,
            dom=lambda p: True,
            member=lambda p, y: y == (1 if has_infinitely_many(p, 0) else 0),
            solver=lambda p: 1 if has_infinitely_many(p, 0) else 0,
            least_out=lambda: 0,
        )
    )
    add(
        Problem(
            "lim",
            in_rep=spaces.jump(NN),
            out_rep=NN,
            dom=lambda p: True,
            member=lambda p, y: y == p,
            solver=lambda p: p,
            least_out=lambda: streams.const(0),
        )
    )
    add(
        Problem(
            "limN",
            in_rep=NN,
            out_rep=N,
            dom=lambda p: streams.eventual_value(p) is not None,
            member=lambda p, y: y == streams.eventual_value(p),
            solver=lambda p: streams.eventual_value(p),
            least_out=lambda: 0,
        )
    )
    add(
        Problem(
            "SORT",
            in_rep=C2N,
            out_rep=C2N,
            dom=lambda p: True,
            member=lambda p, y: y == _sort_value(p),
            solver=_sort_value,
            least_out=lambda: streams.const(0),
        )
    )
    add(
        Problem(
            "WBWT_2",
            in_rep=C2N,
            out_rep=C2N,
            dom=lambda p: True,
            member=lambda p, y: _limit_of_binary(y) in cluster_points(p),
            solver=lambda p: streams.const(min(cluster_points(p))),
            least_out=lambda: streams.const(0),
        )
    )
    add(
        Problem(
            "BWT_2",
            in_rep=C2N,
            out_rep=make_space("fin(2)"),
            dom=lambda p: True,
            member=lambda p, y: y in cluster_points(p),
            solver=lambda p: min(cluster_points(p)),
            least_out=lambda: 0,
        )
    )
    add(
        Problem(
            "NEG",
            in_rep=make_space("A-(2N)"),
            out_rep=make_space("fin(2)"),
            dom=lambda A: True,
            member=lambda A, y: y == (1 if A.measure() == 0 else 0),
            solver=lambda A: 1 if A.measure() == 0 else 0,
            least_out=lambda: 0,
        )
    )
    for n in range(6):
        add(
            Problem(
                f"C_{n}",
                in_rep=make_space(f"A-(fin({n}))"),
                out_rep=make_space(f"fin({n})"),
                dom=lambda A: not A.is_empty(),
                member=lambda A, y: A.contains(y),
                solver=lambda A: A.least(),
                least_out=lambda: 0,
            )
        )
    add(
        Problem(
            "C_N",
            in_rep=make_space("A-(N)"),
            out_rep=N,
            dom=lambda A: not A.is_empty(),
            member=lambda A, y: A.contains(y),
            solver=lambda A: A.least(),
            least_out=lambda: 0,
        )
    )
    add(_kn_problem())
    add(
        Problem(
            "C_2N",
            in_rep=make_space("A-(2N)"),
            out_rep=C2N,
            dom=lambda A: not A.is_empty(),
            member=lambda A, y: A.contains(y),
            solver=lambda A: A.least(),
            least_out=lambda: streams.const(0),
        )
    )
    add(
        Problem(
            "PC_2N",
            in_rep=make_space("A-(2N)"),
            out_rep=C2N,
            dom=lambda A: A.measure() > 0,
            member=lambda A, y: A.contains(y),
            solver=lambda A: A.least(),
            least_out=lambda: streams.const(0),
        )
    )
    add(
        Problem(
            "ConC_I",
            in_rep=make_space("A-(I)"),
            out_rep=I,
            dom=lambda A: not A.is_empty() and A.connected(),
            member=lambda A, y: A.contains(y),
            solver=lambda A: A.least(),
            least_out=lambda: Fraction(0),
        )
    )
    add(
        Problem(
            "PCC_I",
            in_rep=make_space("A-(I)"),
            out_rep=I,
            dom=lambda A: A.connected() and A.measure() > 0,
            member=lambda A, y: A.contains(y),
            solver=lambda A: A.least(),
            least_out=lambda: Fraction(0),
        )
    )
    add(
        Problem(
            "C_NN",
            in_rep=make_space("A-(NN)"),
            out_rep=NN,
            dom=lambda A: not A.is_empty(),
            member=lambda A, y: A.contains(y),
            solver=lambda A: A.least(),
            least_out=lambda: streams.const(0),
        )
    )
    add(
        Problem(
            "WFT",
            in_rep=make_space("A-(NN)"),
            out_rep=make_space("fin(2)"),
            dom=lambda A: True,
            member=lambda A, y: y == (1 if A.is_empty() else 0),
            solver=lambda A: 1 if A.is_empty() else 0,
            least_out=lambda: 0,
        )
    )
    add(
        Problem(
            "WFT_S",
            in_rep=make_space("A-(NN)"),
            out_rep=S,
            dom=lambda A: True,
            member=lambda A, y: y == (1 if A.is_empty() else 0),
            solver=lambda A: 1 if A.is_empty() else 0,
            least_out=lambda: 0,
        )
    )
    return problems


class _TupleOfFin2Sets(Representation):
    """Input space of K_N: a length then that many A-(fin(2)) codes, round-robin."""

    space = "(A-(2))*"
    total = False
    precomplete = False

    def decode_ep(self, name):
        if isinstance(name, PointName):
            return name.point
        s = name
        s._require_ep()
        k = s.digit(0)
        rep = make_space("A-(fin(2))")
        comps = []
        for r in range(k):
            comps.append(rep.decode_ep(_round_robin(s, 1, k, r)))
        return tuple(comps)

    def encode(self, point):
        k = len(point)
        rep = make_space("A-(fin(2))")
        names = [rep.encode(c) for c in point]
        if k == 0:
            return streams.const(0)
        digits = [k]
        for j in range(8):
            for r in range(k):
                digits.append(names[r].digit(j))
        period = []
        for j in range(8, 8 + 4):
            for r in range(k):
                period.append(names[r].digit(j))
        return ep(tuple(digits), tuple(period))

    def contains_point(self, point):
        return isinstance(point, tuple)


def _round_robin(s: NameStream, offset: int, k: int, r: int) -> NameStream:
    if s.is_ep:
        u = len(s.prefix)
        need = max((u - offset - r + k - 1) // k, 0) + 1
        pre = [s.digit(offset + k * j + r) for j in range(need)]
        per = [s.digit(offset + k * (need + t) + r) for t in range(len(s.period))]
        return ep(pre, per)
    return streams.from_gen(lambda j: s.digit(offset + k * j + r))


class _BitTupleRep(Representation):
    """Output space of K_N: a length then that many bits."""

    space = "2*"
    total = False
    precomplete = False

    def decode_ep(self, name):
        if isinstance(name, PointName):
            return name.point
        s = name
        k = s.digit(0)
        bits = tuple(s.digit(1 + i) for i in range(k))
        if any(b > 1 for b in bits):
            raise Undefined("not a bit tuple")
        return bits

    def encode(self, point):
        return ep((len(point),) + tuple(point), (0,))

    def contains_point(self, point):
        return isinstance(point, tuple) and all(b in (0, 1) for b in point)


def _kn_problem() -> Problem:
    return Problem(
        "K_N",
        in_rep=_TupleOfFin2Sets(),
        out_rep=_BitTupleRep(),
        dom=lambda comps: all(not c.is_empty() for c in comps),
        member=lambda comps, bits: len(bits) == len(comps)
        and all(c.contains(b) for c, b in zip(comps, bits)),
        solver=lambda comps: tuple(c.least() for c in comps),
        least_out=lambda: (),
    )


_CATALOG: Optional[dict[str, Problem]] = None


def catalog() -> dict[str, Problem]:
    global _CATALOG
    if _CATALOG is None:
        _CATALOG = _catalog()
    return _CATALOG


def lookup(expr: str) -> ProblemVariant:
    """Resolve a problem expression: NAME, bar(NAME), T(NAME), NAME'."""
    expr = expr.strip()
    if expr.endswith("'"):
        return ProblemVariant(lookup(expr[:-1]).base_must_be_plain(), "jump")
    if expr.startswith("bar(") and expr.endswith(")"):
        return ProblemVariant(lookup(expr[4:-1]).base_must_be_plain(), "completion")
    if expr.startswith("T(") and expr.endswith(")"):
        return ProblemVariant(lookup(expr[2:-1]).base_must_be_plain(), "totalization")
    cat = catalog()
    alias = {"WBWT2": "WBWT_2", "BWT2": "BWT_2"}
    name = alias.get(expr, expr)
    if name.startswith("C_fin(") and name.endswith(")"):
        name = f"C_{name[6:-1]}"
    if name not in cat:
        raise KeyError(f"unknown problem {expr!r}")
    return plain(cat[name])


def _base_must_be_plain(self: ProblemVariant) -> Problem:
    if self.variant != "plain":
        raise ValueError("nested problem variants are not supported")
    return self.base


ProblemVariant.base_must_be_plain = _base_must_be_plain


def check_membership(p: ProblemVariant, x, y) -> bool:
    return p.member(x, y)


def solve(p: ProblemVariant, x):
    return p.solve(x)


def completed_range_choice() -> ProblemVariant:
    """Completed choice over N presented in the range coding.

    The range coding is total and precomplete, so the completion variant can
    consume range names directly: every stream names a set, the name of the
    full set is all zeros, and appending the digit n+1 excludes n.
    """
    rng_rep = make_space("A-(N)/range")
    base = catalog()["C_N"].with_input_rep(rng_rep)
    return ProblemVariant(base, "completion", in_rep_override=rng_rep)
