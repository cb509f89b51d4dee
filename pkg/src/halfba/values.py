"""Proposal values and validity predicates.

A proposal is an immutable bit string of explicit length.  The zero-length
bit string is reserved as the absent value (BOT): correct processes never
propose it, and every built-in validity predicate is wrapped so that BOT is
rejected before the named predicate runs.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Callable


@dataclass(frozen=True)
class Bits:
    """An immutable bit string: ``length`` bits, value stored as an int.

    Bit 0 is the most significant bit, so ``Bits(8, 0x80)`` is "10000000".
    """

    length: int
    value: int

    def __post_init__(self) -> None:
        if self.length < 0:
            raise ValueError("negative length")
        if self.value < 0 or (self.length < self.value.bit_length()):
            raise ValueError("value does not fit in length bits")

    def __bool__(self) -> bool:
        return self.length > 0

    def to01(self) -> str:
        return format(self.value, f"0{self.length}b") if self.length else ""

    def to_bytes(self) -> bytes:
        return self.value.to_bytes((self.length + 7) // 8, "big")

    def hex_digest(self, max_chars: int = 16) -> str:
        """Short printable form for logs and CLI output."""
        if self.length == 0:
            return "<bot>"
        h = format(self.value, "x")
        return f"{self.length}b:{h[:max_chars]}" + ("..." if len(h) > max_chars else "")

    @staticmethod
    def from01(s: str) -> "Bits":
        return Bits(len(s), int(s, 2)) if s else BOT

    @staticmethod
    def random(rng: random.Random, length: int) -> "Bits":
        return Bits(length, rng.getrandbits(length)) if length else BOT


BOT = Bits(0, 0)

MAGIC_PREFIX = 0xD15C

ValidityFn = Callable[[Bits], bool]


def _always(v: Bits) -> bool:
    return True


def _even_parity(v: Bits) -> bool:
    return bin(v.value).count("1") % 2 == 0


def _magic16(v: Bits) -> bool:
    return v.length >= 16 and (v.value >> (v.length - 16)) == MAGIC_PREFIX


_PREDICATES: dict[str, ValidityFn] = {
    "always": _always,
    "even-parity": _even_parity,
    "magic16": _magic16,
}


def validator(name_or_fn: str | ValidityFn) -> ValidityFn:
    """Resolve a validity predicate and wrap it to reject BOT.

    Accepts either a built-in name ("always", "even-parity", "magic16") or a
    user-supplied callable.  The returned predicate is total over Bits.
    """
    if callable(name_or_fn):
        inner = name_or_fn
    else:
        try:
            inner = _PREDICATES[name_or_fn]
        except KeyError:
            raise ValueError(f"unknown validity predicate {name_or_fn!r}") from None

    def wrapped(v: Bits) -> bool:
        return v.length > 0 and bool(inner(v))

    return wrapped


def predicate_names() -> tuple[str, ...]:
    return tuple(_PREDICATES)


def conforming_value(rng: random.Random, length: int, name: str) -> Bits:
    """Draw a random value of the given length satisfying a built-in predicate."""
    if name == "magic16":
        if length < 16:
            raise ValueError("magic16 needs length >= 16")
        tail = rng.getrandbits(length - 16) if length > 16 else 0
        return Bits(length, (MAGIC_PREFIX << (length - 16)) | tail)
    v = Bits.random(rng, length)
    if name == "even-parity" and bin(v.value).count("1") % 2 == 1:
        v = Bits(length, v.value ^ 1)
    return v
