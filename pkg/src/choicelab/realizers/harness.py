"""Reduction-witness verification.

A witness pair (K, H) claims that the problem ``f`` reduces to ``g``: K turns
f-input names into g-input names, H turns the pair of original input and
oracle answer into an f-output name.  Verification runs every sample through
K, asks both the canonical solver and an adversarial sampler of valid
g-answers, and checks membership of the decoded H-output.  The universal
quantifier over g-realizers is approximated by those samplers, so a passing
report is non-refutation, never proof.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from typing import Callable, Optional

from .. import spaces
from ..problems import ProblemVariant
from ..spaces import BOTTOM, PointName, Undefined
from ..streams import NameStream, StreamFamily
from .machines import Transducer


@dataclass
class Witness:
    """One side of a witness pair: an exact name map plus an optional machine."""

    name: str
    exact: Callable
    machine: Optional[Transducer] = None


@dataclass
class WitnessPair:
    name: str
    K: Witness
    H: Witness


def pre_witness(name: str, t: Transducer) -> Witness:
    return Witness(name, exact=lambda p: t.map_ep(p), machine=t)


def post_identity() -> Witness:
    return Witness("id", exact=lambda p, answer: answer)


@dataclass
class SampleReport:
    input: str
    k_output: str
    in_base_dom: bool
    answers: list = field(default_factory=list)  # (answer, h_output, verdict)
    verdict: str = "pass"
    note: str = ""

    def to_json(self):
        return {
            "input": self.input,
            "K-output": self.k_output,
            "in-dom(g)": self.in_base_dom,
            "answers": [
                {"G-answer": a, "H-output": h, "verdict": v}
                for a, h, v in self.answers
            ],
            "verdict": self.verdict,
            "note": self.note,
        }


@dataclass
class Report:
    reduction: str
    witness: str
    seed: int
    samples: list[SampleReport] = field(default_factory=list)
    skipped: int = 0

    @property
    def failures(self) -> int:
        return sum(1 for s in self.samples if s.verdict == "fail")

    @property
    def passed(self) -> bool:
        return self.failures == 0 and bool(self.samples)

    def summary(self) -> dict:
        return {
            "reduction": self.reduction,
            "witness": self.witness,
            "seed": self.seed,
            "samples": len(self.samples),
            "failures": self.failures,
            "skipped": self.skipped,
            "passed": self.passed,
        }

    def to_json(self) -> dict:
        return {
            **self.summary(),
            "per-sample": [s.to_json() for s in self.samples],
        }

    def write_json(self, path):
        with open(path, "w") as fh:
            json.dump(self.to_json(), fh, indent=2, default=str)


def _show(name) -> str:
    if isinstance(name, NameStream):
        return name.literal() if name.is_ep else "<generator>"
    if isinstance(name, StreamFamily):
        rows = ",".join(r.literal() for r in name.entries)
        cyc = ",".join(r.literal() for r in name.cycle)
        return f"family[{rows}|{cyc}]"
    if isinstance(name, PointName):
        inner = "" if name.stream is None else f" ~ {name.stream.literal()}"
        return f"point:{name.point!r}{inner}"
    return repr(name)


def valid_answers(g: ProblemVariant, u, rng: random.Random, limit: int = 3):
    """The canonical answer plus adversarially sampled valid answers."""
    outs = [g.solve(u)]
    if not g.in_base_domain(u):
        # off the base domain everything in the output space is valid
        if g.variant == "completion":
            outs.append(BOTTOM)
        outs.append(g.base.least_out())
        extra = _space_points(g, rng)
        outs.extend(extra[:2])
    else:
        for cand in _member_candidates(g, u, rng):
            if len(outs) >= limit + 1:
                break
            try:
                ok = g.member(u, cand)
            except ValueError:
                ok = False
            if ok and cand not in outs:
                outs.append(cand)
    seen = []
    for o in outs:
        if o not in seen:
            seen.append(o)
    return seen


def _member_candidates(g: ProblemVariant, u, rng):
    """Heuristic further members of g(u) for set-valued problems."""
    cands = []
    if isinstance(u, spaces.NatClosedSet) and not u.is_empty():
        ms = u.members_upto(40)
        rng.shuffle(ms)
        cands.extend(ms[:3])
    elif isinstance(u, spaces.CantorClosedSet) and not u.is_empty():
        for w in u.words()[:4]:
            cands.append(spaces.ep(w, (0,)))
            cands.append(spaces.ep(w, (1,)))
    elif isinstance(u, spaces.IntervalClosedSet) and not u.is_empty():
        for a, b in u.segments[:2]:
            cands.extend([a, b, (a + b) / 2])
    elif isinstance(u, NameStream):
        pass
    return cands


def _space_points(g: ProblemVariant, rng):
    sort = g.base.out_rep.space
    if sort == "N":
        return [rng.randrange(1, 9), 0]
    if sort.startswith("fin("):
        k = int(sort[4:-1])
        return [rng.randrange(k)] if k else []
    if sort in ("2N", "NN"):
        return [spaces.streams.const(rng.randrange(2))]
    return []


def _encode_answer(g: ProblemVariant, point, rng):
    rep = g.out_rep
    try:
        return rep.encode_variants(point, rng)
    except (Undefined, NotImplementedError):
        return [rep.encode(point)]


def verify_reduction(
    f: ProblemVariant,
    g: ProblemVariant,
    w: WitnessPair,
    samples,
    seed: int = 0,
    answer_limit: int = 3,
) -> Report:
    rng = random.Random(seed)
    rep = Report(reduction=f"{f.name} <= {g.name}", witness=w.name, seed=seed)
    for p in samples:
        try:
            x = f.in_rep.decode_ep(p)
        except Undefined:
            rep.skipped += 1
            continue
        if not f.dom(x) or not f.in_base_domain(x):
            rep.skipped += 1
            continue
        sample = SampleReport(input=_show(p), k_output="", in_base_dom=False)
        try:
            gname = w.K.exact(p)
        except Undefined as exc:
            sample.verdict = "fail"
            sample.note = f"K raised: {exc}"
            rep.samples.append(sample)
            continue
        sample.k_output = _show(gname)
        try:
            u = g.in_rep.decode_ep(gname)
        except Undefined as exc:
            sample.verdict = "fail"
            sample.note = f"K output names no point of the g-input space: {exc}"
            rep.samples.append(sample)
            continue
        sample.in_base_dom = g.in_base_domain(u)
        for point in valid_answers(g, u, rng, answer_limit):
            for aname in _encode_answer(g, point, rng):
                try:
                    hname = w.H.exact(p, aname)
                    y = f.out_rep.decode_ep(hname)
                    ok = f.member(x, y)
                except (Undefined, ValueError) as exc:
                    ok = False
                    hname = f"<error: {exc}>"
                    y = None
                sample.answers.append(
                    (_show(aname), _show(hname) if not isinstance(hname, str) else hname, "pass" if ok else "fail")
                )
                if not ok:
                    sample.verdict = "fail"
        rep.samples.append(sample)
    return rep


# ---------------------------------------------------------------------------
# sabotage wrappers for mutation sensitivity


def sabotage_pre(w: Witness, site: str = "tail") -> Witness:
    """Flip one digit in the description of K's output name."""

    def exact(p):
        return _perturb_name(w.exact(p), site)

    return Witness(w.name + "~sabotaged", exact)


def sabotage_post(w: Witness, site: str = "tail") -> Witness:
    """Flip one digit in the description of H's output name."""

    def exact(p, answer):
        return _perturb_name(w.exact(p, answer), site)

    return Witness(w.name + "~sabotaged", exact)


def _perturb_name(name, site):
    if isinstance(name, PointName):
        return PointName(_perturb_point(name.point, site), None)
    if isinstance(name, NameStream):
        return _perturb_stream(name, site)
    if isinstance(name, StreamFamily):
        return StreamFamily(
            name.entries, tuple(_perturb_stream(c, site) for c in name.cycle)
        )
    return name


def _flip(d: int) -> int:
    return d + 1 if d == 0 else d - 1


def _perturb_stream(s: NameStream, site: str) -> NameStream:
    if site == "head" and s.prefix:
        pre = (_flip(s.prefix[0]),) + s.prefix[1:]
        return spaces.ep(pre, s.period)
    per = (_flip(s.period[0]),) + s.period[1:]
    return spaces.ep(s.prefix, per)


def _perturb_point(point, site):
    if isinstance(point, NameStream):
        return _perturb_stream(point, site)
    if isinstance(point, int):
        return point + 1
    if isinstance(point, spaces.NatClosedSet):
        if point.is_empty():
            return spaces.NatClosedSet(frozenset())
        if not point.excluded:
            return spaces.NatClosedSet(frozenset(), empty=True)
        # drop the least exclusion: the set grows and its least point shrinks
        return spaces.NatClosedSet(point.excluded - {min(point.excluded)})
    return point
