"""Deterministic lock-step simulator.

Each round has two phases: every machine emits its outgoing messages, then
every machine absorbs its inbox.  Delivery is within-round and reliable.
The adversary is rushing: faulty processes observe every message emitted by
correct processes in round r before choosing their own round-r output.

Faulty processes run the same machine code as correct ones (an honest
"ghost"); a strategy transforms the ghost's output, so faulty behavior is
always structurally plausible unless a strategy deliberately breaks it.
Sender identity is authenticated: a strategy cannot forge another process's
id.

Determinism: inboxes are canonically sorted before absorption and every
random choice derives from (seed, pid), so results are byte-identical
across repeated runs and across any process-evaluation-order permutation.
Machines never address messages to themselves; self-held values are merged
locally, and bit accounting therefore counts every emitted message.
"""

from __future__ import annotations

import logging
import random
from dataclasses import dataclass, field
from typing import Callable, Mapping, Protocol, Sequence

from .faults import NO_FAULTS, FaultPlan, ScriptContext, apply_strategy
from .halving import HalvingMachine, default_tolerance, schedule
from .messages import Message
from .metrics import RunMetrics
from .values import Bits, conforming_value, validator

logger = logging.getLogger(__name__)


class Machine(Protocol):
    def emit(self, rnd: int) -> list[Message]: ...

    def absorb(self, rnd: int, inbox: list[Message]) -> None: ...


@dataclass
class ProcessLog:
    """Per-process diagnostics: dropped Byzantine noise and decode notes."""

    dropped: int = 0
    notes: list[str] = field(default_factory=list)

    def drop(self, msg: Message, reason: str) -> None:
        self.dropped += 1
        logger.debug("dropped %s: %s", msg, reason)

    def note(self, text: str) -> None:
        self.notes.append(text)


@dataclass
class Traffic:
    """Wire accounting for the correct processes of one run."""

    bits: dict[int, list[int]]

    @property
    def total_bits(self) -> int:
        return sum(sum(per_round) for per_round in self.bits.values())

    def per_process(self) -> dict[int, int]:
        return {pid: sum(per_round) for pid, per_round in self.bits.items()}


def run_machines(
    machines: Mapping[int, Machine],
    total_rounds: int,
    plan: FaultPlan = NO_FAULTS,
    seed: int = 0,
    eval_order: Sequence[int] | None = None,
) -> Traffic:
    """Drive machines through the lock-step schedule; returns wire traffic.

    Traffic counts semantic payload bits of messages emitted by correct
    processes only, per process and round.
    """
    pids = sorted(machines)
    order = list(eval_order) if eval_order is not None else pids
    if sorted(order) != pids:
        raise ValueError("eval_order must be a permutation of the process ids")
    faulty = plan.faulty
    if not faulty.issubset(pids):
        raise ValueError("fault plan names unknown process ids")
    correct = [p for p in pids if p not in faulty]
    strategies = dict(plan.assignments)
    rngs = {pid: random.Random(f"{seed}|{pid}") for pid in faulty}
    script_rng = random.Random(f"{seed}|script")
    bits = {pid: [0] * total_rounds for pid in correct}

    for rnd in range(total_rounds):
        correct_out: list[Message] = []
        ghost_out: dict[int, list[Message]] = {}
        for pid in order:
            msgs = machines[pid].emit(rnd)
            if pid in faulty:
                ghost_out[pid] = msgs
            else:
                correct_out.extend(msgs)
                for m in msgs:
                    bits[pid][rnd] += m.bit_size

        visible = sorted(correct_out, key=Message.sort_key)
        outbox = list(correct_out)
        if plan.script is not None:
            ctx = ScriptContext(rnd, ghost_out, visible, script_rng)
            for m in plan.script(ctx):
                if m.sender in faulty:
                    outbox.append(m)
        else:
            for pid in sorted(faulty):
                produced = apply_strategy(strategies[pid], rnd, ghost_out[pid], visible, rngs[pid])
                outbox.extend(m for m in produced if m.sender == pid)

        inboxes: dict[int, list[Message]] = {pid: [] for pid in pids}
        for m in outbox:
            if m.receiver in inboxes and m.receiver != m.sender:
                inboxes[m.receiver].append(m)
        for pid in pids:
            inboxes[pid].sort(key=Message.sort_key)
        for pid in order:
            machines[pid].absorb(rnd, inboxes[pid])

    return Traffic(bits)


def run(
    n: int,
    proposals: Mapping[int, Bits],
    plan: FaultPlan = NO_FAULTS,
    seed: int = 0,
    t: int | None = None,
    valid: str | Callable[[Bits], bool] = "always",
    eval_order: Sequence[int] | None = None,
    run_id: str | None = None,
) -> RunMetrics:
    """One complete agreement run; returns metrics with guarantee flags.

    Out-of-contract fault plans (more faults than t tolerates) execute
    normally but set contract_violated; guarantee flags then report what
    actually happened rather than what is promised.
    """
    if n < 1:
        raise ValueError("need at least one process")
    members = tuple(range(n))
    if set(proposals) != set(members):
        raise ValueError("need a proposal for every process id 0..n-1")
    t_eff = default_tolerance(n) if t is None else t
    if t_eff < 0:
        raise ValueError("negative fault tolerance")
    if n > 1 and 3 * t_eff >= n:
        raise ValueError("protocol thresholds need 3t < n")
    valid_fn = validator(valid)
    for pid in members:
        if pid not in plan.faulty and not valid_fn(proposals[pid]):
            raise ValueError(f"proposal of correct process {pid} fails the validity predicate")
    contract_violated = len(plan.faulty) > t_eff

    logs = {pid: ProcessLog() for pid in members}
    machines = {
        pid: HalvingMachine(pid, members, proposals[pid], valid_fn, t=t_eff, log=logs[pid])
        for pid in members
    }
    sched = schedule(n)
    traffic = run_machines(machines, sched.total_rounds, plan, seed, eval_order)

    correct = [p for p in members if p not in plan.faulty]
    decisions = {pid: machines[pid].decision() for pid in correct}
    terminated = all(d is not None for d in decisions.values())
    distinct = {d for d in decisions.values() if d is not None}
    agreement_ok = terminated and len(distinct) == 1
    validity_ok = terminated and all(valid_fn(d) for d in decisions.values())
    correct_proposals = {proposals[p] for p in correct}
    applicable = len(correct_proposals) == 1
    strong_ok = (not applicable) or (
        terminated and distinct == correct_proposals
    )

    prop_lengths = {proposals[p].length for p in correct}
    return RunMetrics(
        run_id=run_id or f"run-{n}-{seed}",
        n=n,
        t=t_eff,
        length=max(prop_lengths) if prop_lengths else 0,
        strategy=plan.describe(),
        seed=seed,
        rounds=sched.total_rounds,
        total_bits=traffic.total_bits,
        bits_by_round=traffic.bits,
        decisions=decisions,
        proposals=dict(proposals),
        agreement_ok=agreement_ok,
        strong_validity_applicable=applicable,
        strong_validity_ok=strong_ok,
        validity_ok=validity_ok,
        contract_violated=contract_violated,
        terminated=terminated,
        dropped=sum(log.dropped for pid, log in logs.items() if pid in set(correct)),
        notes=[f"{pid}: {note}" for pid in correct for note in logs[pid].notes],
    )


def make_proposals(
    n: int,
    length: int,
    mode: str,
    valid_name: str,
    rng: random.Random,
) -> dict[int, Bits]:
    """Proposal vectors for the three CLI modes.

    unanimous: one predicate-conforming value shared by everyone; distinct:
    pairwise different conforming values; random: independent draws.
    """
    if mode == "unanimous":
        v = conforming_value(rng, length, valid_name)
        return {p: v for p in range(n)}
    if mode == "distinct":
        out: dict[int, Bits] = {}
        used: set[Bits] = set()
        for p in range(n):
            v = conforming_value(rng, length, valid_name)
            while v in used:
                v = conforming_value(rng, length, valid_name)
            used.add(v)
            out[p] = v
        return out
    if mode == "random":
        return {p: conforming_value(rng, length, valid_name) for p in range(n)}
    raise ValueError(f"unknown proposal mode {mode!r}")


def sweep(
    n_list: Sequence[int],
    lengths: Sequence[int],
    trials: int,
    faults: str = "none",
    valid: str = "always",
    proposal_mode: str = "random",
    seed: int = 0,
) -> list[RunMetrics]:
    """One run per (n, L, trial); fully deterministic given the seed.

    faults is "none", "random" (|F| = floor((n-1)/3), strategies drawn from
    the catalog per run), or an explicit plan string applied to every run.
    """
    from .faults import random_plan

    if not n_list or not lengths or trials < 1:
        raise ValueError("sweep needs nonempty ranges and at least one trial")
    if any(n < 2 for n in n_list):
        raise ValueError("sweep sizes must be at least 2")
    runs = []
    for n in n_list:
        for length in lengths:
            for trial in range(trials):
                run_seed = seed + trial
                rng = random.Random(f"sweep|{n}|{length}|{run_seed}")
                if faults == "none":
                    plan = NO_FAULTS
                elif faults == "random":
                    plan = random_plan(n, (n - 1) // 3, rng, schedule(n).total_rounds)
                else:
                    plan = FaultPlan.parse(faults)
                proposals = make_proposals(n, length, proposal_mode, valid, rng)
                runs.append(
                    run(
                        n,
                        proposals,
                        plan=plan,
                        seed=run_seed,
                        valid=valid,
                        run_id=f"sweep-{n}-{length}-{trial}",
                    )
                )
    return runs
