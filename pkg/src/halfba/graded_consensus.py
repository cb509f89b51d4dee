"""Eight-round graded consensus on long values.

Rounds 0-3 run the value reduction (reduce_cool), rounds 4-5 run binary
graded consensus on the reduction's vote, rounds 6-7 reconstruct.

If the bit decision is 0 the process decides (own proposal, 0) immediately
but keeps participating in reconstruction, because processes that decided 1
depend on its symbols.  Reconstruction: every process still holding a
surviving proposal sends each member that member's symbol of its encoding
(round 6); every process then derives its own share symbol, either its own
encoding's symbol (if it survived) or the majority of the help received
from members reporting success, and broadcasts it (round 7).  The decode of
the collected shares with error budget t yields the decision value; a
failed decode decides the absent value (BOT) with the bit grade.

In contract (at most t < n/3 faults): graded agreement, strong unanimity,
external validity of grade-1 decisions, and the consistency property that a
grade-1 decision forces every correct decision to the same value.
"""

from __future__ import annotations

from dataclasses import dataclass

from .binary_gc import BgcMachine
from .messages import Message, SymbolPayload, first_per_sender
from .reduce_cool import CoolMachine, CoolOutput, data_count
from .rs import Symbol, conform_symbols, frame_element_count, rs_decode, zero_symbol
from .values import BOT, Bits


@dataclass(frozen=True)
class GradedDecision:
    value: Bits
    grade: int


def majority_share(candidates: list[bytes], fallback: Symbol) -> Symbol:
    """Majority over help-symbol contents; ties break to the smallest bytes."""
    if not candidates:
        return fallback
    counts: dict[bytes, int] = {}
    for c in candidates:
        counts[c] = counts.get(c, 0) + 1
    best = max(counts.values())
    data = min(c for c, k in counts.items() if k == best)
    return Symbol(fallback.index, data)


class GcMachine:
    """Per-process machine over local rounds 0..7."""

    ROUNDS = 8

    def __init__(self, pid: int, members: tuple[int, ...], t: int, proposal: Bits, tag: str, log):
        self.pid = pid
        self.members = members
        self.t = t
        self.k = data_count(t)
        self.proposal = proposal
        self.my_pos = members.index(pid)
        self.tag_help = tag + ".help"
        self.tag_share = tag + ".share"
        self.log = log
        self.cool = CoolMachine(pid, members, t, proposal, tag + ".rc", log)
        self.bgc: BgcMachine | None = None
        self.bgc_tag = tag + ".bgc"
        self.reduction: CoolOutput | None = None
        self._share: Symbol | None = None
        self._decision: GradedDecision | None = None
        self._bit_grade: int | None = None

    def _collect_symbols(self, tag: str, inbox: list[Message]) -> dict[int, Symbol]:
        valid = []
        for m in inbox:
            if (
                m.tag == tag
                and isinstance(m.payload, SymbolPayload)
                and m.sender in self.members
                and m.sender != self.pid
            ):
                valid.append(m)
            else:
                self.log.drop(m, f"not a valid {tag} message")
        return {j: m.payload.symbol for j, m in first_per_sender(valid).items()}

    def emit(self, rnd: int) -> list[Message]:
        if rnd < 4:
            return self.cool.emit(rnd)
        if rnd in (4, 5):
            assert self.bgc is not None
            return self.bgc.emit(rnd - 4)
        if rnd == 6:
            red = self.reduction
            assert red is not None
            if red.survivor is None:
                return []
            mine = self.cool.codeword.symbols
            return [
                Message(self.pid, j, self.tag_help, SymbolPayload(mine[pos]))
                for pos, j in enumerate(self.members)
                if j != self.pid
            ]
        if rnd == 7:
            assert self._share is not None
            return [
                Message(self.pid, j, self.tag_share, SymbolPayload(self._share))
                for j in self.members
                if j != self.pid
            ]
        return []

    def absorb(self, rnd: int, inbox: list[Message]) -> None:
        if rnd < 4:
            self.cool.absorb(rnd, inbox)
            if rnd == 3:
                self.reduction = self.cool.output()
                self.bgc = BgcMachine(
                    self.pid, self.members, self.t, self.reduction.vote, self.bgc_tag, self.log
                )
        elif rnd == 4:
            assert self.bgc is not None
            self.bgc.absorb(0, inbox)
        elif rnd == 5:
            assert self.bgc is not None
            self.bgc.absorb(1, inbox)
            bit = self.bgc.decision()
            self._bit_grade = bit.grade
            if bit.bit == 0:
                self._decision = GradedDecision(self.proposal, 0)
        elif rnd == 6:
            self._derive_share(self._collect_symbols(self.tag_help, inbox))
        elif rnd == 7:
            self._reconstruct(self._collect_symbols(self.tag_share, inbox))

    def _derive_share(self, helps: dict[int, Symbol]) -> None:
        red = self.reduction
        assert red is not None
        if red.success:
            self._share = self.cool.codeword.symbols[self.my_pos]
            return
        candidates = [
            sym.data for j, sym in helps.items() if j in red.reporting_success
        ]
        fallback = zero_symbol(
            self.my_pos + 1, frame_element_count(self.proposal.length, self.k)
        )
        self._share = majority_share(candidates, fallback)

    def _reconstruct(self, shares: dict[int, Symbol]) -> None:
        if self._decision is not None:  # decided on bit 0; shares already served peers
            return
        slots: dict[int, Symbol | None] = {}
        for pos, j in enumerate(self.members):
            slots[pos + 1] = self._share if j == self.pid else shares.get(j)
        value = rs_decode(self.k, self.t, conform_symbols(slots, fill_absent=True))
        if value is None:
            self.log.note("share reconstruction failed; deciding the absent value")
            value = BOT
        assert self._bit_grade is not None
        self._decision = GradedDecision(value, self._bit_grade)

    def decision(self) -> GradedDecision:
        assert self._decision is not None, "queried before round 7 completed"
        return self._decision
