"""Two-round committee dissemination over the coded broadcast."""

from __future__ import annotations

import random

import pytest

from halfba.committee import CdMachine, CommitteeConfig, committee_tolerance, disseminate, obtain
from halfba.faults import FaultPlan, StrategySpec
from halfba.rs import Symbol, rs_encode
from halfba.values import BOT, Bits
from support import drive


def test_tolerance_and_data_count_examples():
    assert committee_tolerance(4) == 1 and CommitteeConfig((0, 1, 2, 3), (0, 1, 2, 3)).data_count == 2
    assert committee_tolerance(2) == 0 and CommitteeConfig((0, 1), (0, 1)).data_count == 1
    assert committee_tolerance(7) == 2
    assert CommitteeConfig(tuple(range(7)), tuple(range(7))).data_count == 3
    assert committee_tolerance(1) == 0
    assert committee_tolerance(3) == 0


def test_config_validation():
    with pytest.raises(ValueError):
        CommitteeConfig((0, 1, 2), ())
    with pytest.raises(ValueError):
        CommitteeConfig((0, 1, 2), (0, 5))


def test_disseminate_requires_membership():
    cfg = CommitteeConfig((0, 1, 2, 3, 4, 5), (0, 1, 2))
    v = Bits(16, 0xBEEF)
    sym = disseminate(v, cfg, 1)
    assert sym == rs_encode(v, 3, 1).symbols[1]
    with pytest.raises(ValueError):
        disseminate(v, cfg, 4)


def test_obtain_threshold_guard():
    cfg = CommitteeConfig(tuple(range(8)), (0, 1, 2, 3))  # x'=4, y'=1, need 3
    v = Bits(24, 0xC0FFEE)
    cw = rs_encode(v, 4, 2)
    ranks = {r: cw.symbols[r] for r in range(4)}
    assert obtain(ranks, cfg) == v
    assert obtain({r: ranks[r] for r in (0, 2, 3)}, cfg) == v  # exactly x' - y'
    assert obtain({r: ranks[r] for r in (0, 2)}, cfg) is None  # rec = x' - y' - 1


def test_obtain_survives_tolerated_garbage():
    # y' Byzantine senders cannot change the decoded value
    cfg = CommitteeConfig(tuple(range(14)), tuple(range(7)))  # x'=7, y'=2, k=3
    v = Bits(100, (1 << 99) | 0x5A5A)
    cw = rs_encode(v, 7, 3)
    rng = random.Random(21)
    for trial in range(30):
        ranks = {r: cw.symbols[r] for r in range(7)}
        for r in rng.sample(range(7), 2):
            ranks[r] = Symbol.from_elements(
                r + 1, [rng.randrange(1 << 16) for _ in range(cw.symbols[r].num_elements)]
            )
        got = obtain(ranks, cfg)
        assert got in (v, None)
        assert got == v  # 5 agreeing symbols with budget 2 always decode


def test_machines_full_round_trip_and_silent_outsiders():
    entire = tuple(range(8))
    committee = (0, 1, 2, 3)
    cfg = CommitteeConfig(entire, committee)
    v = Bits(200, (0xABCD << 184) | 77)

    def factory(pid, members, log):
        return CdMachine(pid, cfg, v if pid in committee else None, "cd", log)

    machines, traffic, _ = drive(factory, 8, 2)
    for pid in entire:
        assert machines[pid].obtained() == v
    for pid in entire:
        assert traffic.per_process()[pid] == 0 or pid in committee
    assert all(traffic.per_process()[pid] == 0 for pid in entire if pid not in committee)


def test_machine_handles_faulty_committee_members():
    entire = tuple(range(8))
    committee = (0, 1, 2, 3)  # y' = 1: one fault tolerated
    cfg = CommitteeConfig(entire, committee)
    v = Bits(64, 0x1122334455667788)

    def factory(pid, members, log):
        return CdMachine(pid, cfg, v if pid in committee else None, "cd", log)

    for strategy in ("silent", "garbage", "equivocate"):
        plan = FaultPlan(((2, StrategySpec(strategy)),))
        machines, _, _ = drive(factory, 8, 2, plan, seed=4)
        for pid in entire:
            if pid == 2:
                continue
            got = machines[pid].obtained()
            assert got in (v, None)  # safety always
            assert got == v  # and liveness with <= y' faults


def test_bot_round_trips_through_dissemination():
    cfg = CommitteeConfig(tuple(range(4)), (0, 1))

    def factory(pid, members, log):
        return CdMachine(pid, cfg, BOT if pid in (0, 1) else None, "cd", log)

    machines, _, _ = drive(factory, 4, 2)
    for pid in range(4):
        assert machines[pid].obtained() == BOT


def test_machine_constructor_contract():
    cfg = CommitteeConfig((0, 1, 2, 3), (0, 1))
    from halfba.engine import ProcessLog

    with pytest.raises(ValueError):
        CdMachine(0, cfg, None, "cd", ProcessLog())  # member without a value
    with pytest.raises(ValueError):
        CdMachine(3, cfg, Bits(8, 1), "cd", ProcessLog())  # outsider with a value
