"""Four-round reduction of long proposals to coded symbols plus a vote.

Each process encodes its L-bit proposal into one Reed-Solomon symbol per
member (data count k = floor(t/5) + 1) and exchanges symbol pairs: to
member j it sends (its symbol for j's position, its symbol for its own
position).  A pair matches when both coordinates equal the receiver's own
encoding, giving the match vector u.  A process survives (success s = 1,
keeping its proposal omega) while at least n - t pairs match; otherwise it
discards omega.

Rounds 1-3 broadcast success indicators: the initial value, then up to two
flip announcements when zeroing u over the reporting-zero set S0 drops the
match count below n - t.  Correct processes only ever announce downgrades;
received indicator updates are taken at face value (last value wins), so a
Byzantine process may re-promote itself into S1, which costs the adversary
nothing beyond its fault budget.  A member from whom no initial indicator
arrives counts as reporting zero.

The vote is computed after the final flip announcements arrive: v = 1 iff
at least 2t + 1 members currently report success.  This ordering is what
makes a positive vote retrievable: it guarantees at least t + 1 correct
processes still hold a non-discarded omega, all encoding the same value.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .messages import BitPayload, Message, PairPayload, first_per_sender
from .rs import Codeword, rs_encode
from .values import Bits


@dataclass
class CoolState:
    pid: int
    members: tuple[int, ...]
    t: int
    k: int
    proposal: Bits
    codeword: Codeword
    my_pos: int
    survivor: Bits | None
    success: int = 1
    match: dict[int, int] = field(default_factory=dict)
    peer_flags: dict[int, int] = field(default_factory=dict)
    flip_pending: bool = False


@dataclass(frozen=True)
class CoolOutput:
    survivor: Bits | None
    vote: int
    success: int
    reporting_success: frozenset[int]  # S1 at vote time, own flag included


def data_count(t: int) -> int:
    """Symbols needed to reconstruct: k = floor(t/5) + 1."""
    return t // 5 + 1


def cool_init(pid: int, members: tuple[int, ...], t: int, proposal: Bits) -> CoolState:
    if len(members) < 3 * t + 1:
        raise ValueError("value reduction needs n >= 3t + 1")
    k = data_count(t)
    codeword = rs_encode(proposal, len(members), k)
    return CoolState(
        pid=pid,
        members=members,
        t=t,
        k=k,
        proposal=proposal,
        codeword=codeword,
        my_pos=members.index(pid),
        survivor=proposal,
    )


def cool_phase1(state: CoolState, pairs: dict[int, PairPayload]) -> None:
    """Score received pairs against the local encoding; set s and u."""
    n, t = len(state.members), state.t
    mine = state.codeword.symbols
    for pos, j in enumerate(state.members):
        if j == state.pid:
            state.match[j] = 1
            continue
        p = pairs.get(j)
        state.match[j] = int(
            p is not None
            and p.for_receiver == mine[state.my_pos]
            and p.own == mine[pos]
        )
    if sum(state.match.values()) < n - t:
        state.success = 0
        state.survivor = None


def _flip_rule(state: CoolState) -> bool:
    """Zero u over S0; flip to failure when matches drop below n - t."""
    if state.success == 0:
        return False
    for j in state.members:
        if j != state.pid and state.peer_flags.get(j, 0) == 0:
            state.match[j] = 0
    if sum(state.match.values()) < len(state.members) - state.t:
        state.success = 0
        state.survivor = None
        state.flip_pending = True
        return True
    return False


def cool_phase2(state: CoolState, flags: dict[int, int]) -> None:
    """Merge the initial indicators (absent senders report zero) and re-check."""
    for j in state.members:
        if j != state.pid:
            state.peer_flags[j] = flags.get(j, 0)
    _flip_rule(state)


def cool_phase3(state: CoolState, flags: dict[int, int]) -> None:
    """Merge explicit flip announcements and re-check."""
    for j, value in flags.items():
        if j != state.pid:
            state.peer_flags[j] = value
    _flip_rule(state)


def cool_finish(state: CoolState, flags: dict[int, int]) -> CoolOutput:
    """Merge the final announcements, then vote on 2t + 1 reported successes."""
    for j, value in flags.items():
        if j != state.pid:
            state.peer_flags[j] = value
    reporting = {j for j, f in state.peer_flags.items() if f == 1}
    if state.success:
        reporting.add(state.pid)
    vote = int(len(reporting) >= 2 * state.t + 1)
    return CoolOutput(state.survivor, vote, state.success, frozenset(reporting))


class CoolMachine:
    """Wire adapter: local rounds 0 (pairs), 1 (indicators), 2-3 (flips)."""

    ROUNDS = 4

    def __init__(self, pid: int, members: tuple[int, ...], t: int, proposal: Bits, tag: str, log):
        self.state = cool_init(pid, members, t, proposal)
        self.tag_pair = tag + ".pair"
        self.tag_flag = [tag + ".ind", tag + ".flip1", tag + ".flip2"]
        self.log = log
        self._output: CoolOutput | None = None

    @property
    def codeword(self) -> Codeword:
        return self.state.codeword

    def _others(self) -> list[int]:
        return [j for j in self.state.members if j != self.state.pid]

    def _collect_flags(self, tag: str, inbox: list[Message]) -> dict[int, int]:
        valid = []
        for m in inbox:
            if (
                m.tag == tag
                and isinstance(m.payload, BitPayload)
                and m.sender in self.state.members
                and m.sender != self.state.pid
                and m.payload.value in (0, 1)
            ):
                valid.append(m)
            else:
                self.log.drop(m, f"not a valid {tag} message")
        return {j: m.payload.value for j, m in first_per_sender(valid).items()}

    def emit(self, rnd: int) -> list[Message]:
        st = self.state
        if rnd == 0:
            mine = st.codeword.symbols
            return [
                Message(
                    st.pid,
                    j,
                    self.tag_pair,
                    PairPayload(mine[st.members.index(j)], mine[st.my_pos]),
                )
                for j in self._others()
            ]
        if rnd == 1:
            return [
                Message(st.pid, j, self.tag_flag[0], BitPayload(st.success))
                for j in self._others()
            ]
        if rnd in (2, 3) and st.flip_pending:
            st.flip_pending = False
            return [
                Message(st.pid, j, self.tag_flag[rnd - 1], BitPayload(0))
                for j in self._others()
            ]
        return []

    def absorb(self, rnd: int, inbox: list[Message]) -> None:
        st = self.state
        if rnd == 0:
            valid = []
            for m in inbox:
                if (
                    m.tag == self.tag_pair
                    and isinstance(m.payload, PairPayload)
                    and m.sender in st.members
                    and m.sender != st.pid
                ):
                    valid.append(m)
                else:
                    self.log.drop(m, "not a valid pair message")
            pairs = {j: m.payload for j, m in first_per_sender(valid).items()}
            cool_phase1(st, pairs)
        elif rnd == 1:
            cool_phase2(st, self._collect_flags(self.tag_flag[0], inbox))
        elif rnd == 2:
            cool_phase3(st, self._collect_flags(self.tag_flag[1], inbox))
        elif rnd == 3:
            self._output = cool_finish(st, self._collect_flags(self.tag_flag[2], inbox))

    def output(self) -> CoolOutput:
        assert self._output is not None, "queried before round 3 completed"
        return self._output
