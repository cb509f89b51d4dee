"""Wire messages for the lock-step protocols.

A message carries a segment tag naming the protocol phase it belongs to
(e.g. "gc1.rc.pair", "s1.cd1.sym" inside the first recursive half).  The
receiver drops anything whose tag does not match the phase it is absorbing,
which is how Byzantine cross-phase noise is contained.

bit_size counts semantic payload bits only: one bit for indicator and echo
bits, the symbol's element bits for symbols, the sum for symbol pairs.
Sender and receiver ids, tags, and serialization overhead are addressing,
not protocol information, and are never counted.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from .rs import Symbol


@dataclass(frozen=True)
class BitPayload:
    value: int  # 0 or 1

    @property
    def bit_size(self) -> int:
        return 1

    def sort_bytes(self) -> bytes:
        return bytes([1, self.value])


@dataclass(frozen=True)
class SymbolPayload:
    symbol: Symbol

    @property
    def bit_size(self) -> int:
        return self.symbol.bit_size

    def sort_bytes(self) -> bytes:
        return bytes([2]) + self.symbol.index.to_bytes(4, "big") + self.symbol.data


@dataclass(frozen=True)
class PairPayload:
    """COOL exchange: the symbol at the receiver's position, then the sender's own."""

    for_receiver: Symbol
    own: Symbol

    @property
    def bit_size(self) -> int:
        return self.for_receiver.bit_size + self.own.bit_size

    def sort_bytes(self) -> bytes:
        return (
            bytes([3])
            + self.for_receiver.index.to_bytes(4, "big")
            + self.for_receiver.data
            + self.own.index.to_bytes(4, "big")
            + self.own.data
        )


Payload = Union[BitPayload, SymbolPayload, PairPayload]


@dataclass(frozen=True)
class Message:
    sender: int
    receiver: int
    tag: str
    payload: Payload

    @property
    def bit_size(self) -> int:
        return self.payload.bit_size

    def sort_key(self) -> tuple:
        return (self.sender, self.tag, self.payload.sort_bytes())


def first_per_sender(inbox: list[Message]) -> dict[int, Message]:
    """Deduplicate an already canonically sorted inbox to one message per sender."""
    out: dict[int, Message] = {}
    for m in inbox:
        if m.sender not in out:
            out[m.sender] = m
    return out
