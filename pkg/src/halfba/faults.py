"""Byzantine strategies and fault plans.

Every strategy wraps the honest messages its ghost machine produced this
round, so faulty traffic stays structurally plausible; the catalog covers
the disagreement-inducing behaviors the protocol must absorb:

- silent: sends nothing, ever (omission);
- crash:R: honest until round R, nothing afterwards;
- equivocate: randomly perturbs payloads per receiver, sending different
  processes inconsistent views of the same broadcast;
- garbage: keeps shapes but randomizes symbol contents and indices;
- liar: flips indicator/echo bits at random, leaves symbols honest.

A scripted plan replaces the catalog with a callback that sees the rushing
view (all correct round-r messages) and the ghosts' honest output; the
lemma scenario tests use it for hand-crafted worst cases.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Callable, Iterable

from .messages import BitPayload, Message, PairPayload, SymbolPayload
from .rs import Symbol

CATALOG = ("silent", "crash", "equivocate", "garbage", "liar")


@dataclass(frozen=True)
class StrategySpec:
    name: str
    param: int | None = None

    def describe(self) -> str:
        return self.name if self.param is None else f"{self.name}:{self.param}"


@dataclass(frozen=True)
class ScriptContext:
    """Rushing view handed to a scripted adversary each round."""

    round: int
    honest: dict[int, list[Message]]  # ghost output per faulty pid
    visible_correct: list[Message]  # canonically sorted correct emissions
    rng: random.Random


Script = Callable[[ScriptContext], Iterable[Message]]


@dataclass(frozen=True)
class FaultPlan:
    assignments: tuple[tuple[int, StrategySpec], ...] = ()
    script: Script | None = None
    script_pids: tuple[int, ...] = ()

    @property
    def faulty(self) -> frozenset[int]:
        if self.script is not None:
            return frozenset(self.script_pids)
        return frozenset(pid for pid, _ in self.assignments)

    def describe(self) -> str:
        if self.script is not None:
            return "scripted@" + "+".join(str(p) for p in sorted(self.script_pids))
        if not self.assignments:
            return "none"
        parts = []
        for pid, spec in sorted(self.assignments):
            suffix = f":{spec.param}" if spec.param is not None else ""
            parts.append(f"{spec.name}@{pid}{suffix}")
        return "+".join(parts)

    @staticmethod
    def parse(text: str) -> "FaultPlan":
        """Parse "strategy@pid[:param]" items separated by commas or plus.

        An optional "byz:" prefix per item is accepted and ignored (all
        catalog strategies are Byzantine).  "none" or "" is the empty plan.
        """
        text = text.strip()
        if text in ("", "none"):
            return NO_FAULTS
        assignments = []
        seen = set()
        for item in text.replace("+", ",").split(","):
            item = item.strip()
            if item.startswith("byz:"):
                item = item[4:]
            if "@" not in item:
                raise ValueError(f"bad fault item {item!r}: expected strategy@pid[:param]")
            name, _, rest = item.partition("@")
            pid_text, _, param_text = rest.partition(":")
            if name not in CATALOG:
                raise ValueError(f"unknown strategy {name!r} (catalog: {', '.join(CATALOG)})")
            pid = int(pid_text)
            if pid in seen:
                raise ValueError(f"duplicate fault assignment for process {pid}")
            seen.add(pid)
            param = int(param_text) if param_text else None
            if name == "crash" and param is None:
                raise ValueError("crash needs a round: crash@pid:round")
            assignments.append((pid, StrategySpec(name, param)))
        return FaultPlan(tuple(assignments))


NO_FAULTS = FaultPlan()


def random_plan(n: int, count: int, rng: random.Random, total_rounds: int) -> FaultPlan:
    """Place count faulty processes uniformly with random catalog strategies."""
    pids = sorted(rng.sample(range(n), count))
    assignments = []
    for pid in pids:
        name = rng.choice(CATALOG)
        param = rng.randrange(total_rounds) if name == "crash" and total_rounds else 0
        assignments.append((pid, StrategySpec(name, param if name == "crash" else None)))
    return FaultPlan(tuple(assignments))


def _random_symbol(like: Symbol, rng: random.Random) -> Symbol:
    data = bytes(rng.randrange(256) for _ in range(len(like.data)))
    return Symbol(max(1, rng.randrange(1, 70)), data)


def _twist_symbol(sym: Symbol, rng: random.Random) -> Symbol:
    if not sym.data:
        return Symbol(sym.index + 1, sym.data)
    pos = rng.randrange(len(sym.data))
    mask = rng.randrange(1, 256)
    data = bytearray(sym.data)
    data[pos] ^= mask
    return Symbol(sym.index, bytes(data))


def _twist(msg: Message, rng: random.Random) -> Message:
    p = msg.payload
    if isinstance(p, BitPayload):
        new = BitPayload(p.value ^ 1)
    elif isinstance(p, SymbolPayload):
        new = SymbolPayload(_twist_symbol(p.symbol, rng))
    else:
        assert isinstance(p, PairPayload)
        if rng.random() < 0.5:
            new = PairPayload(_twist_symbol(p.for_receiver, rng), p.own)
        else:
            new = PairPayload(p.for_receiver, _twist_symbol(p.own, rng))
    return Message(msg.sender, msg.receiver, msg.tag, new)


def _garbage(msg: Message, rng: random.Random) -> Message:
    p = msg.payload
    if isinstance(p, BitPayload):
        new = BitPayload(rng.randrange(2))
    elif isinstance(p, SymbolPayload):
        new = SymbolPayload(_random_symbol(p.symbol, rng))
    else:
        assert isinstance(p, PairPayload)
        new = PairPayload(_random_symbol(p.for_receiver, rng), _random_symbol(p.own, rng))
    return Message(msg.sender, msg.receiver, msg.tag, new)


def apply_strategy(
    spec: StrategySpec,
    rnd: int,
    honest: list[Message],
    visible_correct: list[Message],
    rng: random.Random,
) -> list[Message]:
    if spec.name == "silent":
        return []
    if spec.name == "crash":
        return list(honest) if rnd < (spec.param or 0) else []
    if spec.name == "equivocate":
        return [_twist(m, rng) if rng.random() < 0.5 else m for m in honest]
    if spec.name == "garbage":
        return [_garbage(m, rng) for m in honest]
    if spec.name == "liar":
        return [
            _twist(m, rng) if isinstance(m.payload, BitPayload) and rng.random() < 0.5 else m
            for m in honest
        ]
    raise ValueError(f"unknown strategy {spec.name!r}")
