"""Shared helpers for driving protocol machines through the simulator."""

from __future__ import annotations

from halfba.engine import ProcessLog, Traffic, run_machines
from halfba.faults import NO_FAULTS, FaultPlan


def drive(
    factory,
    n: int,
    rounds: int,
    plan: FaultPlan = NO_FAULTS,
    seed: int = 0,
    eval_order=None,
):
    """Build one machine per process with a fresh log and run them.

    factory(pid, members, log) -> Machine.  Returns (machines, traffic, logs).
    """
    members = tuple(range(n))
    logs = {pid: ProcessLog() for pid in members}
    machines = {pid: factory(pid, members, logs[pid]) for pid in members}
    traffic: Traffic = run_machines(machines, rounds, plan, seed=seed, eval_order=eval_order)
    return machines, traffic, logs
