"""Named verification suites.

Each suite function returns a :class:`SuiteResult`; the CLI ``verify``
command and the acceptance test module both run these.
"""

from __future__ import annotations

import itertools
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction

from . import problems, spaces, streams
from .problems import ProblemVariant, catalog, completed_range_choice, lookup
from .realizers import adversary_barCN, library
from .realizers.harness import (
    Witness,
    WitnessPair,
    post_identity,
    pre_witness,
    sabotage_post,
    sabotage_pre,
    verify_reduction,
)
from .spaces import (
    BOTTOM,
    ball_semantics,
    complement_of_ball_codes,
    complement_of_balls,
    cylinder_code,
    empty_ball_code,
    interval_code,
    measure_upper,
    nat_singleton_code,
)
from .streams import NameStream, StreamFamily, ep


@dataclass
class SuiteResult:
    name: str
    passed: bool
    cases: int
    failures: list = field(default_factory=list)
    details: dict = field(default_factory=dict)
    seconds: float = 0.0

    def line(self) -> str:
        verdict = "PASS" if self.passed else "FAIL"
        extra = f" ({len(self.failures)} failures)" if self.failures else ""
        return f"{verdict} {self.name}: {self.cases} cases in {self.seconds:.2f}s{extra}"

    def to_json(self):
        return {
            "suite": self.name,
            "passed": self.passed,
            "cases": self.cases,
            "failures": [str(f) for f in self.failures[:25]],
            "seconds": round(self.seconds, 3),
            **{k: v for k, v in self.details.items()},
        }


def _timed(fn):
    def wrapper(*args, **kwargs):
        t0 = time.perf_counter()
        res = fn(*args, **kwargs)
        res.seconds = time.perf_counter() - t0
        return res

    return wrapper


# ---------------------------------------------------------------------------
# sample generators


def ep_binary_streams(max_size: int) -> list[NameStream]:
    """All EP binary streams with |prefix| + |period| <= max_size, canonical."""
    seen = set()
    out = []
    for total in range(1, max_size + 1):
        for lv in range(1, total + 1):
            lu = total - lv
            for bits in itertools.product((0, 1), repeat=total):
                s = ep(bits[:lu], bits[lu:])
                if s not in seen:
                    seen.add(s)
                    out.append(s)
    return out


def random_ep(rng: random.Random, hi: int = 6, max_len: int = 4) -> NameStream:
    u = tuple(rng.randrange(hi + 1) for _ in range(rng.randrange(max_len)))
    v = tuple(rng.randrange(hi + 1) for _ in range(rng.randrange(1, max_len)))
    return ep(u, v)


# ---------------------------------------------------------------------------
# witness suites


def infinity_witnesses() -> list[WitnessPair]:
    lib = library()
    to_jump = WitnessPair(
        "INF<=LPO' (zero counting)",
        K=pre_witness("inf_to_lpojump", lib["inf_to_lpojump"]),
        H=post_identity(),
    )
    from_jump = WitnessPair(
        "LPO'<=INF (pair discharge)",
        K=pre_witness("lpojump_to_inf", lib["lpojump_to_inf"]),
        H=post_identity(),
    )
    return [to_jump, from_jump]


def wbwt_witness() -> WitnessPair:
    lib = library()
    post = lib["wbwt_to_barCN.H"]
    return WitnessPair(
        "WBWT_2<=bar(C_N) (exclusion monitor)",
        K=pre_witness("wbwt_to_barCN.K", lib["wbwt_to_barCN.K"]),
        H=Witness("wbwt_to_barCN.H", exact=post.exact, machine=post),
    )


@_timed
def suite_infinity(max_size: int = 8, seed: int = 0) -> SuiteResult:
    samples = ep_binary_streams(max_size)
    to_jump, from_jump = infinity_witnesses()
    inf = lookup("INF")
    lpoj = ProblemVariant(catalog()["LPO"], "jump")
    r1 = verify_reduction(inf, lpoj, to_jump, samples, seed=seed)
    r2 = verify_reduction(lpoj, inf, from_jump, samples, seed=seed)
    failures = [s for r in (r1, r2) for s in r.samples if s.verdict == "fail"]
    return SuiteResult(
        "infinity-witnesses",
        passed=r1.passed and r2.passed,
        cases=len(r1.samples) + len(r2.samples),
        failures=failures,
        details={"skipped": r1.skipped + r2.skipped},
    )


@_timed
def suite_wbwt(max_size: int = 10, seed: int = 0) -> SuiteResult:
    samples = ep_binary_streams(max_size)
    f = lookup("WBWT_2")
    g = completed_range_choice()
    r = verify_reduction(f, g, wbwt_witness(), samples, seed=seed)
    return SuiteResult(
        "wbwt-witness",
        passed=r.passed,
        cases=len(r.samples),
        failures=[s for s in r.samples if s.verdict == "fail"],
    )


@_timed
def suite_mutation(seed: int = 0) -> SuiteResult:
    """Each suite-4 witness pair must fail somewhere once sabotaged."""
    samples8 = ep_binary_streams(8)
    inf = lookup("INF")
    lpoj = ProblemVariant(catalog()["LPO"], "jump")
    to_jump, from_jump = infinity_witnesses()
    wb = wbwt_witness()
    barcn = completed_range_choice()
    wbwt = lookup("WBWT_2")

    runs = [
        ("inf_to_lpojump/K", inf, lpoj,
         WitnessPair("sab", sabotage_pre(to_jump.K, "tail"), to_jump.H)),
        ("inf_to_lpojump/H", inf, lpoj,
         WitnessPair("sab", to_jump.K, sabotage_post(to_jump.H, "head"))),
        ("lpojump_to_inf/K", lpoj, inf,
         WitnessPair("sab", sabotage_pre(from_jump.K, "tail"), from_jump.H)),
        ("lpojump_to_inf/H", lpoj, inf,
         WitnessPair("sab", from_jump.K, sabotage_post(from_jump.H, "head"))),
        ("wbwt_to_barCN/K", wbwt, barcn,
         WitnessPair("sab", sabotage_pre(wb.K, "tail"), wb.H)),
        ("wbwt_to_barCN/H", wbwt, barcn,
         WitnessPair("sab", wb.K, sabotage_post(wb.H, "tail"))),
    ]
    failures = []
    for label, f, g, w in runs:
        rep = verify_reduction(f, g, w, samples8, seed=seed)
        if rep.failures == 0:
            failures.append(f"{label}: sabotage produced no failing sample")
    return SuiteResult(
        "mutation-sensitivity",
        passed=not failures,
        cases=len(runs),
        failures=failures,
    )


# ---------------------------------------------------------------------------
# retraction and coding oracles


@_timed
def suite_cantor_retraction(depth: int = 3, maxlen: int = 5) -> SuiteResult:
    """Exhaustive: the cover retraction preserves nonempty coded sets and
    names a nonempty set otherwise."""
    lib_t = library()["choice_retraction_cantor"]
    words = [()] + [
        w for d in range(1, depth + 1) for w in itertools.product((0, 1), repeat=d)
    ]
    codes = [cylinder_code("2N", w) for w in words]
    balls = {c: ball_semantics("2N", c) for c in codes}
    failures = []
    cases = 0
    full = complement_of_balls("2N", [])
    for length in range(1, maxlen + 1):
        for combo in itertools.product(codes, repeat=length):
            cases += 1
            state = lib_t.start()
            emitted = []
            for c in combo:
                state, out = lib_t.step(state, c)
                emitted.extend(out)
            # one more step on the repeated last code settles the tail
            state, out = lib_t.step(state, combo[-1])
            emitted.extend(out)
            in_set = complement_of_ball_codes("2N", frozenset(combo))
            out_set = complement_of_ball_codes("2N", frozenset(emitted))
            if in_set.is_empty():
                ok = not out_set.is_empty()
            else:
                ok = out_set == in_set
            if not ok:
                failures.append(combo)
                if len(failures) > 5:
                    return SuiteResult(
                        "cantor-retraction", False, cases, failures
                    )
    return SuiteResult("cantor-retraction", not failures, cases, failures)


@_timed
def suite_finite_retraction(sizes=(1, 2, 3, 4), maxlen: int = 6) -> SuiteResult:
    failures = []
    cases = 0
    for n in sizes:
        space = f"fin({n})"
        t = library()[f"choice_retraction_finite_{n}"] if n in (2, 3, 4) else None
        from .realizers.library import choice_retraction_finite

        t = choice_retraction_finite(n)
        codes = [empty_ball_code(), spaces.full_ball_code()] + [
            nat_singleton_code(i) for i in range(n)
        ]
        for length in range(1, maxlen + 1):
            for combo in itertools.product(codes, repeat=length):
                cases += 1
                state = t.start()
                emitted = []
                for c in combo:
                    state, out = t.step(state, c)
                    emitted.extend(out)
                state, out = t.step(state, combo[-1])
                emitted.extend(out)
                in_set = complement_of_ball_codes(space, frozenset(combo))
                out_set = complement_of_ball_codes(space, frozenset(emitted))
                ok = (
                    not out_set.is_empty()
                    if in_set.is_empty()
                    else out_set == in_set
                )
                if not ok:
                    failures.append((n, combo))
    return SuiteResult("finite-retraction", not failures, cases, failures)


def _farey(maxden: int) -> list[Fraction]:
    vals = set()
    for q in range(1, maxden + 1):
        for p in range(q + 1):
            vals.add(Fraction(p, q))
    return sorted(vals)


@_timed
def suite_conc_retraction(maxden: int = 8) -> SuiteResult:
    """Exact on closed rational segments: the retraction renames the same
    interval, and on covered (empty) inputs some nonempty interval."""
    t_proto = library()["conc_retraction_interval"]
    rep = spaces.make_space("A-(I)")
    failures = []
    cases = 0
    fr = _farey(maxden)
    for a in fr:
        for b in fr:
            if a > b:
                continue
            cases += 1
            desc = spaces.IntervalClosedSet.from_segments([(a, b)])
            codes = spaces.descriptor_ball_codes("I", desc) or [empty_ball_code()]
            out_set = _run_conc(t_proto, codes)
            if out_set != desc:
                failures.append((a, b, out_set))
    # covered inputs: overlapping covers of [0,1] must yield something nonempty
    for mid in (Fraction(1, 2), Fraction(1, 3), Fraction(2, 3)):
        cases += 1
        codes = [
            interval_code(Fraction(-1, 8), mid + Fraction(1, 16)),
            interval_code(mid - Fraction(1, 16), Fraction(9, 8)),
        ]
        out_set = _run_conc(t_proto, codes)
        if out_set.is_empty() or not out_set.connected():
            failures.append(("covered", mid, out_set))
    return SuiteResult("conc-retraction", not failures, cases, failures)


def _run_conc(proto, codes):
    state = proto.start()
    emitted = []
    for c in codes:
        state, out = proto.step(state, c)
        emitted.extend(out)
    state, out = proto.step(state, codes[-1])
    emitted.extend(out)
    return complement_of_balls("I", [ball_semantics("I", c) for c in set(emitted)])


@_timed
def suite_double_completion(n: int = 500, seed: int = 0) -> SuiteResult:
    """The double-completion retraction fixes completed points."""
    rng = random.Random(seed)
    t = library()["retraction_double_completion"]
    failures = []
    cases = 0
    for base_kind in ("N", "NN"):
        base = spaces.make_space(base_kind)
        once = spaces.completion(base)
        twice = spaces.completion(once)
        for _ in range(n // 2):
            cases += 1
            p = random_ep(rng)
            x = twice.decode_ep(p)
            out = t.map_ep(p)
            y = once.decode_ep(out)
            want = BOTTOM if x is BOTTOM else x
            if y != want:
                failures.append((base_kind, p.literal(), x, y))
    return SuiteResult("double-completion-retraction", not failures, cases, failures)


@_timed
def suite_compactness(n: int = 500, seed: int = 0) -> SuiteResult:
    rng = random.Random(seed)
    lib = library()
    expand, compress = lib["compactness_expand"], lib["compactness_compress"]
    failures = []
    for _ in range(n):
        p = random_ep(rng)
        back = compress.map_ep(expand.map_ep(p))
        if back != p:
            failures.append(p.literal())
    return SuiteResult("compactness-roundtrip", not failures, n, failures)


@_timed
def suite_project_lift(depth: int = 4) -> SuiteResult:
    """First components of the projected set equal the cluster points."""
    proj = library()["project_lift"]
    pool = []
    for v in itertools.chain(
        itertools.product((0, 1, 2), repeat=1), itertools.product((0, 1, 2), repeat=2)
    ):
        for u in [()] + [(d,) for d in (0, 1, 2)]:
            s = ep(u, v)
            if s not in pool:
                pool.append(s)
    failures = []
    cases = 0
    small = pool[:14]
    for cyc_len in (1, 2):
        for cyc in itertools.permutations(small, cyc_len):
            for entries in [(), (small[3],), (small[7], small[1])]:
                fam = StreamFamily(tuple(entries), tuple(cyc))
                cases += 1
                tree = proj.run_family(fam, cycles=depth + 4)
                live = tree.live_words(depth, min_depth=depth + 1)
                want = {c.digits(depth) for c in fam.cluster_streams()}
                if live != want:
                    failures.append((fam, live, want))
                    if len(failures) > 5:
                        return SuiteResult("project-lift", False, cases, failures)
    return SuiteResult("project-lift", not failures, cases, failures)


@_timed
def suite_measure(n: int = 200, seed: int = 0) -> SuiteResult:
    rng = random.Random(seed)
    failures = []
    for _ in range(n):
        codes = [rng.randrange(300) for _ in range(rng.randrange(1, 7))]
        name = ep(tuple(codes[:-1]), (codes[-1],))
        distinct = len(set(codes))
        exact = complement_of_balls(
            "2N", [ball_semantics("2N", c) for c in set(codes)]
        ).measure()
        vals = [measure_upper(name, s) for s in range(distinct + 3)]
        if any(a < b for a, b in zip(vals, vals[1:])):
            failures.append(("not monotone", codes))
        if vals[distinct] != exact or vals[-1] != exact:
            failures.append(("not exact at stabilization", codes))
    return SuiteResult("measure-stabilization", not failures, n, failures)


@_timed
def suite_adversary(budgets=range(6), step_bound: int = 10_000) -> SuiteResult:
    lib = library()
    failures = []
    cases = 0
    for name in ("cn_fmc_solver", "cn_fmc_jump", "cn_fmc_lazy"):
        for b in budgets:
            cases += 1
            rep = adversary_barCN(lib[name], b, step_bound)
            if not rep.succeeded:
                failures.append((name, b, rep.forced_resets))
    return SuiteResult("adversary-forcing", not failures, cases, failures)


def realizer_oracle_suites(seed: int = 0) -> list[SuiteResult]:
    """The exact-oracle batch: every library construction against its oracle."""
    return [
        suite_infinity(8, seed),
        suite_wbwt(10, seed),
        suite_cantor_retraction(3, 5),
        suite_finite_retraction((1, 2, 3, 4), 6),
        suite_conc_retraction(8),
        suite_double_completion(500, seed),
        suite_compactness(500, seed),
        suite_project_lift(4),
        suite_measure(200, seed),
    ]


def witness_suites(seed: int = 0) -> list[SuiteResult]:
    return [suite_infinity(8, seed), suite_wbwt(10, seed), suite_mutation(seed)]
