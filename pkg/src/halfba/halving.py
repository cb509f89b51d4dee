"""Recursive halving agreement.

An instance over m members runs six fixed segments:

1. graded consensus on the proposals (8 rounds), giving (v1, g1);
2. recursive sub-instance among the first ceil(m/2) members, proposal v1;
3. committee dissemination of the sub-instance's decision by that half
   (2 rounds), giving v_cd1;
4. estimate update: adopt v_cd1 when g1 = 0 and v_cd1 is present and valid,
   otherwise keep v1;
5. graded consensus on the estimates (8 rounds), giving (v2, g2);
6. recursive sub-instance among the remaining floor(m/2) members with
   proposal v2, dissemination of its decision (2 rounds), and the final
   rule: decide v2 when g2 = 1, else the disseminated value (BOT if none).

A single-member instance takes zero rounds and decides its proposal.  The
schedule is data-independent, so every process knows which segment any
round belongs to; messages for other segments are dropped.  At most one
half can hold a third or more faulty processes, and the faulty half cannot
hurt: its dissemination is either ignored (grade 1 pins the estimate) or
filtered by the validity predicate, while the healthy half's dissemination
is sound by committee safety.

Sub-instances assume the largest tolerable fault count for their size,
ceil(h/3) - 1; only the top level accepts an explicit tolerance override.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import ceil
from typing import Callable

from .committee import CdMachine, CommitteeConfig
from .graded_consensus import GcMachine
from .messages import Message
from .values import BOT, Bits

GC_ROUNDS = 8
CD_ROUNDS = 2


def default_tolerance(m: int) -> int:
    """Largest fault count the thresholds tolerate: ceil(m/3) - 1."""
    return ceil(m / 3) - 1


@dataclass(frozen=True)
class Span:
    name: str
    start: int
    length: int

    @property
    def end(self) -> int:
        return self.start + self.length


@dataclass(frozen=True)
class Schedule:
    size: int
    total_rounds: int
    spans: tuple[Span, ...]

    def span_of(self, rnd: int) -> int:
        for i, s in enumerate(self.spans):
            if s.start <= rnd < s.end:
                return i
        raise ValueError(f"round {rnd} outside the {self.total_rounds}-round schedule")


@lru_cache(maxsize=None)
def schedule(m: int) -> Schedule:
    """The fixed round layout for an m-member instance."""
    if m < 1:
        raise ValueError("instances need at least one member")
    if m == 1:
        return Schedule(1, 0, ())
    h1 = ceil(m / 2)
    h2 = m - h1
    lengths = [
        ("gc1", GC_ROUNDS),
        ("sub1", schedule(h1).total_rounds),
        ("cd1", CD_ROUNDS),
        ("gc2", GC_ROUNDS),
        ("sub2", schedule(h2).total_rounds),
        ("cd2", CD_ROUNDS),
    ]
    spans = []
    at = 0
    for name, length in lengths:
        spans.append(Span(name, at, length))
        at += length
    return Schedule(m, at, tuple(spans))


class HalvingMachine:
    """Per-process machine for one instance, recursing into halves."""

    def __init__(
        self,
        pid: int,
        members: tuple[int, ...],
        proposal: Bits,
        valid: Callable[[Bits], bool],
        t: int | None = None,
        tag: str = "",
        log=None,
    ):
        self.pid = pid
        self.members = members
        self.proposal = proposal
        self.valid = valid
        self.tag = tag
        self.log = log
        m = len(members)
        self.t = default_tolerance(m) if t is None else t
        self.sched = schedule(m)
        self._decision: Bits | None = None
        self._decided_round: int | None = None
        if m == 1:
            self._decision = proposal
            return
        self.h1 = members[: ceil(m / 2)]
        self.h2 = members[ceil(m / 2) :]
        self.v1: Bits | None = None
        self.g1: int | None = None
        self.half1_value: Bits | None = None
        self.cd1_value: Bits | None = None
        self.estimate: Bits | None = None
        self.v2: Bits | None = None
        self.g2: int | None = None
        self.half2_value: Bits | None = None
        self._idx = 0
        self._machines: list = []
        self._enter(0)

    def _enter(self, i: int) -> None:
        name = self.sched.spans[i].name
        tag = self.tag
        if name == "gc1":
            mach = GcMachine(self.pid, self.members, self.t, self.proposal, tag + "gc1", self.log)
        elif name == "sub1":
            assert self.v1 is not None
            mach = (
                HalvingMachine(self.pid, self.h1, self.v1, self.valid, tag=tag + "s1.", log=self.log)
                if self.pid in self.h1
                else None
            )
        elif name == "cd1":
            cfg = CommitteeConfig(self.members, self.h1)
            value = self.half1_value if self.pid in self.h1 else None
            mach = CdMachine(self.pid, cfg, value, tag + "cd1", self.log)
        elif name == "gc2":
            assert self.estimate is not None
            mach = GcMachine(self.pid, self.members, self.t, self.estimate, tag + "gc2", self.log)
        elif name == "sub2":
            assert self.v2 is not None
            mach = (
                HalvingMachine(self.pid, self.h2, self.v2, self.valid, tag=tag + "s2.", log=self.log)
                if self.pid in self.h2
                else None
            )
        else:
            cfg = CommitteeConfig(self.members, self.h2)
            value = self.half2_value if self.pid in self.h2 else None
            mach = CdMachine(self.pid, cfg, value, tag + "cd2", self.log)
        self._machines.append(mach)

    def _finalize(self, i: int, rnd: int) -> None:
        name = self.sched.spans[i].name
        mach = self._machines[i]
        if name == "gc1":
            d = mach.decision()
            self.v1, self.g1 = d.value, d.grade
        elif name == "sub1":
            self.half1_value = mach.decision() if mach is not None else None
        elif name == "cd1":
            got = mach.obtained()
            self.cd1_value = got if got is not None else BOT
            if self.g1 == 1 or not self.valid(self.cd1_value):
                self.estimate = self.v1
            else:
                self.estimate = self.cd1_value
        elif name == "gc2":
            d = mach.decision()
            self.v2, self.g2 = d.value, d.grade
        elif name == "sub2":
            self.half2_value = mach.decision() if mach is not None else None
        else:
            got = mach.obtained()
            self._decision = self.v2 if self.g2 == 1 else (got if got is not None else BOT)
            self._decided_round = rnd

    def _sync(self, rnd: int) -> None:
        target = self.sched.span_of(rnd)
        while self._idx < target:
            self._finalize(self._idx, rnd)
            self._idx += 1
            self._enter(self._idx)

    def emit(self, rnd: int) -> list[Message]:
        self._sync(rnd)
        span = self.sched.spans[self._idx]
        mach = self._machines[self._idx]
        if mach is None:
            return []
        return mach.emit(rnd - span.start)

    def absorb(self, rnd: int, inbox: list[Message]) -> None:
        self._sync(rnd)
        span = self.sched.spans[self._idx]
        mach = self._machines[self._idx]
        if mach is None:
            for m in inbox:
                self.log.drop(m, "process is not in the active half")
        else:
            mach.absorb(rnd - span.start, inbox)
        if rnd == self.sched.total_rounds - 1:
            self._finalize(self._idx, rnd)

    def decision(self) -> Bits | None:
        return self._decision

    @property
    def decided_round(self) -> int | None:
        """Round at which the decision was fixed (None for single-member)."""
        return self._decided_round
