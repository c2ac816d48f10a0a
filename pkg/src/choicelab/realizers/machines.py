"""Monotone stream transducers with mind-change and limit semantics.

A transducer consumes one input digit per step and emits finitely many output
tokens.  Output already written is never retracted, except through the
explicit RESET token of mind-change machines: the denoted output is whatever
was written after the last RESET.

``run_ep`` detects loops of (machine state, input phase) on EP inputs and
turns them into exact EP output certificates.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

from ..streams import NameStream, Word, ep


class _Reset:
    def __repr__(self):
        return "RESET"


RESET = _Reset()


class Transducer:
    """Base machine: override ``start`` and ``step``.

    States must be hashable for loop detection to apply.  Machines with
    unbounded state (counters) simply never certify and rely on a
    construction-specific ``map_ep``.
    """

    name = "transducer"
    mind_change = False

    def start(self):
        return None

    def step(self, state, digit: int):
        """Return (next state, tuple of output tokens)."""
        raise NotImplementedError

    def map_ep(self, name):
        """Exact output on an EP name; default derives it from a run loop."""
        res = run_ep(self, name)
        if res.kind == "ep":
            return res.stream
        if res.kind == "finite":
            # silence after a finite word zero-fills to an EP stream
            return ep(res.word, (0,))
        raise ValueError(f"{self.name}: no periodicity certificate on this input")


class FnTransducer(Transducer):
    def __init__(self, name, start, step, mind_change=False, map_ep=None):
        self.name = name
        self._start = start
        self._step = step
        self.mind_change = mind_change
        self._map_ep = map_ep

    def start(self):
        return self._start() if callable(self._start) else self._start

    def step(self, state, digit):
        return self._step(state, digit)

    def map_ep(self, name):
        if self._map_ep is not None:
            return self._map_ep(name)
        return super().map_ep(name)


def digitwise(name: str, fn: Callable[[int], tuple[int, ...]]) -> Transducer:
    """Stateless machine emitting ``fn(d)`` per input digit."""
    return FnTransducer(name, None, lambda st, d: (st, tuple(fn(d))))


@dataclass
class RunResult:
    """Transcript of a bounded run."""

    tokens: list = field(default_factory=list)
    segments: list[Word] = field(default_factory=list)  # words between RESETs
    resets: int = 0
    steps: int = 0

    @property
    def output(self) -> Word:
        """The currently denoted output (after the last RESET)."""
        return self.segments[-1] if self.segments else ()

    @property
    def committed(self) -> Optional[int]:
        """First digit of the current output, if any."""
        out = self.output
        return out[0] if out else None


def run(t: Transducer, p: NameStream, steps: int) -> RunResult:
    res = RunResult(segments=[()])
    state = t.start()
    for i in range(steps):
        state, out = t.step(state, p.digit(i))
        for tok in out:
            res.tokens.append(tok)
            if tok is RESET:
                res.segments.append(())
                res.resets += 1
            else:
                res.segments[-1] = res.segments[-1] + (tok,)
        res.steps += 1
    return res


@dataclass
class EPRun:
    """Certified behaviour of a machine on an EP input.

    kind "ep": the output is the EP stream ``stream``; kind "finite": the
    machine goes silent forever after writing ``word``; kind "none": no
    (state, phase) loop was found within the step bound.
    """

    kind: str
    stream: Optional[NameStream] = None
    word: Word = ()
    resets: int = 0
    infinite_resets: bool = False
    loop: Optional[tuple[int, int]] = None  # (steps at loop start, loop length)


def run_ep(t: Transducer, p: NameStream, max_steps: int = 20000) -> EPRun:
    p._require_ep()
    state = t.start()
    out: list = []
    resets = 0
    seen: dict = {}
    u, v = len(p.prefix), len(p.period)
    for i in range(max_steps):
        if i >= u:
            try:
                key = ((i - u) % v, state)
                hit = seen.get(key)
            except TypeError:  # unhashable state: no certificate possible
                key, hit = None, None
            if hit is not None:
                prev_i, prev_len, prev_resets = hit
                body = out[prev_len:]
                loop = (prev_i, i - prev_i)
                if resets > prev_resets:
                    return EPRun(
                        "ep", resets=resets, infinite_resets=True, loop=loop
                    )
                # same reset count on re-entry: the loop body is RESET-free
                head = out[:prev_len]
                if RESET in head:
                    last = max(j for j, tok in enumerate(head) if tok is RESET)
                    head = head[last + 1 :]
                if not body:
                    return EPRun("finite", word=tuple(head), resets=resets, loop=loop)
                return EPRun(
                    "ep",
                    stream=ep(tuple(head), tuple(body)),
                    resets=resets,
                    loop=loop,
                )
            if key is not None:
                seen[key] = (i, len(out), resets)
        state, toks = t.step(state, p.digit(i))
        for tok in toks:
            if tok is RESET:
                resets += 1
            out.append(tok)
    return EPRun("none", resets=resets)


class LimitMachine:
    """Stage-indexed transducer family with pointwise-limit semantics."""

    name = "limit-machine"

    def stage(self, s: int) -> Transducer:
        raise NotImplementedError

    def stabilization_stage(self, p: NameStream) -> int:
        """A stage from which the stage outputs equal the limit on EP input."""
        raise NotImplementedError

    def limit_ep(self, p: NameStream):
        s = self.stabilization_stage(p)
        return self.stage(s).map_ep(p)

    def map_ep(self, p: NameStream):
        return self.limit_ep(p)


class FnLimitMachine(LimitMachine):
    def __init__(self, name, stage, stabilization, limit=None):
        self.name = name
        self._stage = stage
        self._stab = stabilization
        self._limit = limit

    def stage(self, s):
        return self._stage(s)

    def stabilization_stage(self, p):
        return self._stab(p)

    def limit_ep(self, p):
        if self._limit is not None:
            return self._limit(p)
        return super().limit_ep(p)
