"""Two-round committee dissemination.

A committee of x' processes holds a common value (in contract: every
correct committee member inputs the same v, and fewer than x'/3 committee
members are faulty).  Each member encodes v with data count y' + 1, where
y' is the greatest integer below x'/3, and broadcasts its own symbol to the
entire instance.  A receiver that collects at least x' - y' symbols decodes
with error budget (received - (x' - y')); anyone else, and anyone whose
decode fails, obtains nothing.

Non-committee processes send zero bits.  Safety needs no committee health:
a decoded value is the committee's common value or the absent result,
because received <= x' keeps the decode inside unique-decoding distance.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import ceil

from .messages import Message, SymbolPayload, first_per_sender
from .rs import Codeword, Symbol, conform_symbols, rs_decode, rs_encode
from .values import Bits


def committee_tolerance(x_prime: int) -> int:
    """Greatest y' with y' < x'/3."""
    return ceil(x_prime / 3) - 1


@dataclass(frozen=True)
class CommitteeConfig:
    entire: tuple[int, ...]
    committee: tuple[int, ...]

    def __post_init__(self) -> None:
        if not self.committee:
            raise ValueError("empty committee")
        if not set(self.committee).issubset(self.entire):
            raise ValueError("committee must be a subset of the instance")

    @property
    def size(self) -> int:
        return len(self.committee)

    @property
    def tolerance(self) -> int:
        return committee_tolerance(self.size)

    @property
    def data_count(self) -> int:
        return self.tolerance + 1

    @property
    def min_received(self) -> int:
        return self.size - self.tolerance


def disseminate(value: Bits, cfg: CommitteeConfig, pid: int) -> Symbol:
    """The symbol a committee member broadcasts; raises off the committee."""
    if pid not in cfg.committee:
        raise ValueError(f"process {pid} is not on the committee")
    cw = rs_encode(value, cfg.size, cfg.data_count)
    return cw.symbols[cfg.committee.index(pid)]


def obtain(received: dict[int, Symbol], cfg: CommitteeConfig) -> Bits | None:
    """Decode the committee's value from rank-keyed symbols, or None."""
    if len(received) < cfg.min_received:
        return None
    budget = len(received) - cfg.min_received
    slots: dict[int, Symbol | None] = {rank + 1: sym for rank, sym in received.items()}
    return rs_decode(cfg.data_count, budget, conform_symbols(slots, fill_absent=False))


class CdMachine:
    """Per-process machine; local round 0 broadcasts, round 1 decodes."""

    ROUNDS = 2

    def __init__(self, pid: int, cfg: CommitteeConfig, value: Bits | None, tag: str, log):
        self.pid = pid
        self.cfg = cfg
        self.tag_sym = tag + ".sym"
        self.log = log
        self.on_committee = pid in cfg.committee
        if self.on_committee:
            if value is None:
                raise ValueError("committee members must supply a value")
            self.codeword: Codeword | None = rs_encode(value, cfg.size, cfg.data_count)
        else:
            if value is not None:
                raise ValueError("only committee members disseminate")
            self.codeword = None
        self._received: dict[int, Symbol] = {}
        self._obtained: Bits | None = None
        self._done = False

    def emit(self, rnd: int) -> list[Message]:
        if rnd == 0 and self.on_committee:
            assert self.codeword is not None
            own = self.codeword.symbols[self.cfg.committee.index(self.pid)]
            return [
                Message(self.pid, j, self.tag_sym, SymbolPayload(own))
                for j in self.cfg.entire
                if j != self.pid
            ]
        return []

    def absorb(self, rnd: int, inbox: list[Message]) -> None:
        if rnd == 0:
            valid = []
            for m in inbox:
                if (
                    m.tag == self.tag_sym
                    and isinstance(m.payload, SymbolPayload)
                    and m.sender in self.cfg.committee
                    and m.sender != self.pid
                ):
                    valid.append(m)
                else:
                    self.log.drop(m, "not a valid committee symbol")
            for j, msg in first_per_sender(valid).items():
                self._received[self.cfg.committee.index(j)] = msg.payload.symbol
            if self.on_committee:
                assert self.codeword is not None
                rank = self.cfg.committee.index(self.pid)
                self._received[rank] = self.codeword.symbols[rank]
        elif rnd == 1:
            for m in inbox:
                self.log.drop(m, "no messages expected in the decode round")
            self._obtained = obtain(self._received, self.cfg)
            self._done = True

    def obtained(self) -> Bits | None:
        assert self._done, "queried before the decode round completed"
        return self._obtained
