"""Two-round one-bit graded consensus."""

from __future__ import annotations

import itertools

from hypothesis import given, settings
from hypothesis import strategies as st

from halfba.binary_gc import BgcMachine, BitGradedDecision, decide_from_echoes, echo_choice
from halfba.faults import FaultPlan, StrategySpec
from support import drive


def bgc_factory(bits, t, tag="b"):
    return lambda pid, members, log: BgcMachine(pid, members, t, bits[pid], tag, log)


def test_echo_choice_worked_examples():
    # n=4, t=1: three 1s reach n - t = 3, two of each reach nothing
    assert echo_choice({1: 3, 0: 1}, 4, 1) == 1
    assert echo_choice({1: 2, 0: 2}, 4, 1) is None
    # n=7, t=2: five 0s reach n - t = 5
    assert echo_choice({0: 5, 1: 2}, 7, 2) == 0


def test_decide_thresholds():
    assert decide_from_echoes({1: 3, 0: 0}, 4, 1, 0) == BitGradedDecision(1, 1)
    assert decide_from_echoes({1: 2, 0: 0}, 4, 1, 0) == BitGradedDecision(1, 0)  # t + 1 echoes
    assert decide_from_echoes({1: 1, 0: 1}, 4, 1, 0) == BitGradedDecision(0, 0)  # own bit
    # ties prefer the higher count, then bit 1
    assert decide_from_echoes({1: 2, 0: 2}, 4, 1, 0) == BitGradedDecision(1, 0)
    assert decide_from_echoes({1: 3, 0: 3}, 4, 1, 0) == BitGradedDecision(1, 1)


def test_unanimous_runs_decide_grade_one():
    for b in (0, 1):
        machines, _, _ = drive(bgc_factory({p: b for p in range(4)}, t=1), 4, 2)
        for m in machines.values():
            assert m.decision() == BitGradedDecision(b, 1)


def test_cost_is_at_most_two_broadcasts():
    bits = {0: 1, 1: 0, 2: 1, 3: 0, 4: 1, 5: 0, 6: 1}
    _, traffic, _ = drive(bgc_factory(bits, t=2), 7, 2)
    for pid, total in traffic.per_process().items():
        assert total <= 2 * 6  # one bit to each of n - 1 peers, twice


def test_silent_faults_keep_strong_unanimity():
    plan = FaultPlan(((3, StrategySpec("silent")),))
    machines, _, _ = drive(bgc_factory({p: 1 for p in range(4)}, t=1), 4, 2, plan)
    for pid in (0, 1, 2):
        assert machines[pid].decision() == BitGradedDecision(1, 1)


def test_exhaustive_small_n_no_grade_one_disagreement():
    # every placement of one equivocating or silent fault, every pattern
    for n, t in ((4, 1), (5, 1)):
        for bad in range(n):
            for spec in (StrategySpec("silent"), StrategySpec("equivocate", 0)):
                plan = FaultPlan(((bad, spec),))
                for pattern in itertools.product((0, 1), repeat=n):
                    bits = dict(enumerate(pattern))
                    machines, _, _ = drive(bgc_factory(bits, t), n, 2, plan)
                    correct = [p for p in range(n) if p != bad]
                    ds = [machines[p].decision() for p in correct]
                    proposed = {bits[p] for p in correct}
                    for d in ds:
                        assert d.bit in proposed  # safety
                        if d.grade == 1:
                            assert all(e.bit == d.bit for e in ds)  # consistency
                    if len(proposed) == 1:
                        (b,) = proposed
                        assert all(d == BitGradedDecision(b, 1) for d in ds)  # strong validity


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2**7 - 1), st.integers(0, 6), st.sampled_from(["silent", "liar"]))
def test_liar_cannot_split_grade_one(pattern, bad, strategy):
    n, t = 7, 2
    bits = {p: (pattern >> p) & 1 for p in range(n)}
    plan = FaultPlan(((bad, StrategySpec(strategy)),))
    machines, _, _ = drive(bgc_factory(bits, t), n, 2, plan)
    ds = {p: machines[p].decision() for p in range(n) if p != bad}
    for d in ds.values():
        if d.grade == 1:
            assert all(e.bit == d.bit for e in ds.values())


def test_ignores_foreign_and_malformed_messages():
    from halfba.messages import BitPayload, Message

    bits = {p: 1 for p in range(4)}
    machines, _, logs = drive(bgc_factory(bits, t=1), 4, 2)
    log = logs[0]
    m = BgcMachine(0, (0, 1, 2, 3), 1, 1, "b", log)
    m.absorb(0, [Message(9, 0, "b.bit", BitPayload(1)), Message(1, 0, "x.bit", BitPayload(1))])
    assert log.dropped >= 2
