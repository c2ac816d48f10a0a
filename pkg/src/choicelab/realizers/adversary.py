"""The mind-change adversary against solvers of completed choice over N.

The machine under test claims to solve the completed choice problem in the
range coding: its input enumerates excluded values (digit n+1 excludes n,
zeros exclude nothing) and its output names a natural number, with RESET
marking mind changes.  The adversary starts with the name of the full set
(all zeros) and, whenever the machine commits a value n, appends the digit
n+1, forcing the committed value out of the set.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .machines import RESET, Transducer


@dataclass
class AdversaryReport:
    machine: str
    budget: int
    forced_resets: int
    steps: int
    input_prefix: tuple[int, ...]
    commitments: list[int] = field(default_factory=list)
    never_commits: bool = False
    exhausted: bool = False

    @property
    def succeeded(self) -> bool:
        return self.forced_resets >= self.budget + 1

    def to_json(self):
        return {
            "machine": self.machine,
            "budget": self.budget,
            "forced-resets": self.forced_resets,
            "steps": self.steps,
            "input-prefix": list(self.input_prefix),
            "commitments": self.commitments,
            "never-commits": self.never_commits,
            "step-bound-exhausted": self.exhausted,
        }


def adversary_barCN(machine: Transducer, budget: int, step_bound: int = 10_000) -> AdversaryReport:
    state = machine.start()
    fed: list[int] = []
    pending_exclusions: list[int] = []
    commitments: list[int] = []
    resets = 0
    committed = None  # value currently on the output tape, None after RESET
    steps = 0
    while steps < step_bound and resets < budget + 1:
        digit = pending_exclusions.pop(0) if pending_exclusions else 0
        fed.append(digit)
        state, out = machine.step(state, digit)
        for tok in out:
            if tok is RESET:
                resets += 1
                committed = None
            elif committed is None:
                committed = tok
                commitments.append(tok)
                pending_exclusions.append(tok + 1)
        steps += 1
    return AdversaryReport(
        machine=getattr(machine, "name", "machine"),
        budget=budget,
        forced_resets=resets,
        steps=steps,
        input_prefix=tuple(fed),
        commitments=commitments,
        never_commits=not commitments,
        exhausted=steps >= step_bound and resets < budget + 1,
    )
