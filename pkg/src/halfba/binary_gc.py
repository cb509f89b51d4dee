"""Two-round graded consensus on a single bit.

Round 1: broadcast the proposed bit.  Round 2: echo a bit seen at least
n - t times (at most one echo per process).  Decide (b, 1) when b was
echoed by at least n - t processes, (b, 0) when by at least t + 1, and fall
back to (own proposal, 0) otherwise.

With t < n/3 and at most t faults this gives: graded agreement (a grade-1
decision forces every correct process to the same bit), strong unanimity
(unanimous correct proposals decide that bit with grade 1), and the decided
bit was always proposed by at least one correct process.  Tie handling
outside the contract is deterministic: prefer the higher count, then bit 1.
"""

from __future__ import annotations

from dataclasses import dataclass

from .messages import BitPayload, Message, first_per_sender


@dataclass(frozen=True)
class BitGradedDecision:
    bit: int
    grade: int


def echo_choice(counts: dict[int, int], n: int, t: int) -> int | None:
    """The bit to echo after round 1, or None: seen from at least n - t."""
    eligible = [b for b in (1, 0) if counts.get(b, 0) >= n - t]
    if not eligible:
        return None
    return max(eligible, key=lambda b: (counts.get(b, 0), b))


def decide_from_echoes(counts: dict[int, int], n: int, t: int, my_bit: int) -> BitGradedDecision:
    """Grade-1 at n - t echoes, grade-0 at t + 1, else own bit at grade 0."""
    for threshold, grade in ((n - t, 1), (t + 1, 0)):
        eligible = [b for b in (1, 0) if counts.get(b, 0) >= threshold]
        if eligible:
            return BitGradedDecision(max(eligible, key=lambda b: (counts.get(b, 0), b)), grade)
    return BitGradedDecision(my_bit, 0)


class BgcMachine:
    """Per-process state machine; local rounds 0 (bit) and 1 (echo)."""

    ROUNDS = 2

    def __init__(self, pid: int, members: tuple[int, ...], t: int, my_bit: int, tag: str, log):
        self.pid = pid
        self.members = members
        self.t = t
        self.my_bit = my_bit
        self.tag_bit = tag + ".bit"
        self.tag_echo = tag + ".echo"
        self.log = log
        self._echo: int | None = None
        self._decision: BitGradedDecision | None = None

    def _collect_bits(self, rnd_tag: str, inbox: list[Message]) -> dict[int, int]:
        valid: list[Message] = []
        for m in inbox:
            if (
                m.tag == rnd_tag
                and isinstance(m.payload, BitPayload)
                and m.sender in self.members
                and m.sender != self.pid
                and m.payload.value in (0, 1)
            ):
                valid.append(m)
            else:
                self.log.drop(m, f"not a valid {rnd_tag} message")
        counts: dict[int, int] = {0: 0, 1: 0}
        for m in first_per_sender(valid).values():
            counts[m.payload.value] += 1
        return counts

    def emit(self, rnd: int) -> list[Message]:
        if rnd == 0:
            return [
                Message(self.pid, j, self.tag_bit, BitPayload(self.my_bit))
                for j in self.members
                if j != self.pid
            ]
        if rnd == 1 and self._echo is not None:
            return [
                Message(self.pid, j, self.tag_echo, BitPayload(self._echo))
                for j in self.members
                if j != self.pid
            ]
        return []

    def absorb(self, rnd: int, inbox: list[Message]) -> None:
        n, t = len(self.members), self.t
        if rnd == 0:
            counts = self._collect_bits(self.tag_bit, inbox)
            counts[self.my_bit] += 1  # own broadcast, merged locally
            self._echo = echo_choice(counts, n, t)
        elif rnd == 1:
            counts = self._collect_bits(self.tag_echo, inbox)
            if self._echo is not None:
                counts[self._echo] += 1
            self._decision = decide_from_echoes(counts, n, t, self.my_bit)

    def decision(self) -> BitGradedDecision:
        assert self._decision is not None, "queried before the echo round completed"
        return self._decision
