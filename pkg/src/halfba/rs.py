"""Reed-Solomon codes over GF(2^16) with unique decoding.

Framing.  A payload of L bits is framed as a 32-bit big-endian length
header, the payload bits, and zero padding up to a multiple of 16k bits.
The frame splits into k chunks of E = ceil((L+32)/(16k)) field elements;
chunk c supplies the degree-c coefficient of every lane polynomial (lane j
collects element j of each chunk).  Symbol i is the vector of lane
evaluations at point i (1-based, so points are nonzero and distinct).  The
zero-length payload (BOT) frames to all-zero chunks, hence all-zero symbols.

Decoding corrects up to r symbol errors from any m >= k + 2r received
symbols.  A fast path interpolates the first k symbols and accepts when at
most r of the received symbols disagree; otherwise a Berlekamp-Welch locator
computed on two folded lane combinations erases the corrupted rows for all
lanes at once, falling back to per-lane Berlekamp-Welch with a monic
degree-r locator.  Either way the result is accepted only if the
reconstructed codeword differs from the received symbols in at most r
positions and the frame parses back consistently
(header within range, chunk count matching the header, zero padding).  A
decode that corrupts silently is therefore impossible: failures return None.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from . import gf16
from .values import Bits

HEADER_BITS = 32
ELEMENT_BITS = 16
MAX_SYMBOLS = (1 << 16) - 1


@dataclass(frozen=True)
class Symbol:
    """One codeword coordinate: evaluation index plus packed lane values.

    Elements are stored big-endian, two bytes each; bit_size counts payload
    content only (the index is addressing, not data).
    """

    index: int
    data: bytes

    def __post_init__(self) -> None:
        if len(self.data) % 2:
            raise ValueError("symbol data must pack whole 16-bit elements")

    @staticmethod
    def from_elements(index: int, elements: Iterable[int]) -> "Symbol":
        arr = np.asarray(list(elements), dtype=np.uint16)
        return Symbol(index, arr.astype(">u2").tobytes())

    @property
    def elements(self) -> tuple[int, ...]:
        return tuple(int(x) for x in np.frombuffer(self.data, dtype=">u2"))

    @property
    def num_elements(self) -> int:
        return len(self.data) // 2

    @property
    def bit_size(self) -> int:
        return ELEMENT_BITS * self.num_elements

    def values(self) -> np.ndarray:
        return np.frombuffer(self.data, dtype=">u2").astype(np.uint16)


@dataclass(frozen=True)
class Codeword:
    symbols: tuple[Symbol, ...]
    k: int

    @property
    def num_symbols(self) -> int:
        return len(self.symbols)


def zero_symbol(index: int, num_elements: int) -> Symbol:
    """The designated substitute for missing or malformed symbols."""
    return Symbol(index, bytes(2 * num_elements))


def frame_element_count(length_bits: int, k: int) -> int:
    """Elements per chunk (= per symbol) for an L-bit payload at data count k."""
    return -(-(length_bits + HEADER_BITS) // (ELEMENT_BITS * k))


def _frame(payload: Bits, k: int) -> np.ndarray:
    e = frame_element_count(payload.length, k)
    total_bits = ELEMENT_BITS * k * e
    acc = payload.length << (total_bits - HEADER_BITS)
    if payload.length:
        acc |= payload.value << (total_bits - HEADER_BITS - payload.length)
    raw = acc.to_bytes(total_bits // 8, "big")
    return np.frombuffer(raw, dtype=">u2").astype(np.uint16)


def _unframe(flat: np.ndarray, k: int) -> Bits | None:
    total_bits = ELEMENT_BITS * len(flat)
    acc = int.from_bytes(flat.astype(">u2").tobytes(), "big")
    length = acc >> (total_bits - HEADER_BITS)
    if HEADER_BITS + length > total_bits:
        return None
    if frame_element_count(length, k) != len(flat) // k:
        return None
    tail = total_bits - HEADER_BITS - length
    if acc & ((1 << tail) - 1):
        return None
    value = (acc >> tail) & ((1 << length) - 1)
    return Bits(length, value)


def rs_encode(payload: Bits, num_symbols: int, k: int) -> Codeword:
    """Encode into num_symbols symbols, any k of which determine the payload."""
    if k < 1:
        raise ValueError("data count k must be positive")
    if num_symbols < k:
        raise ValueError("need at least k symbols")
    if num_symbols > MAX_SYMBOLS:
        raise ValueError("at most 65535 evaluation points available")
    flat = _frame(payload, k)
    e = len(flat) // k
    coeffs = flat.reshape(k, e)
    points = np.arange(1, num_symbols + 1, dtype=np.uint16)
    evals = gf16.matmul(gf16.vandermonde(points, k), coeffs)
    symbols = tuple(
        Symbol(i + 1, evals[i].astype(">u2").tobytes()) for i in range(num_symbols)
    )
    return Codeword(symbols, k)


def _poly_divmod(num: np.ndarray, den: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Polynomial division over the field, coefficients ascending, den monic."""
    num = num.copy()
    dn, dd = len(num) - 1, len(den) - 1
    if dn < dd:
        return np.zeros(1, dtype=np.uint16), num
    quot = np.zeros(dn - dd + 1, dtype=np.uint16)
    for sh in range(dn - dd, -1, -1):
        c = num[sh + dd]
        if c:
            quot[sh] = c
            num[sh : sh + dd + 1] ^= gf16.mul(den, c)
    return quot, num


def _bw_solve(
    points: np.ndarray, y: np.ndarray, k: int, r: int
) -> tuple[np.ndarray, np.ndarray] | None:
    """Berlekamp-Welch system for one lane: (numerator, monic locator) or None."""
    v = gf16.vandermonde(points, k + r)
    lhs = np.hstack([v, gf16.mul(y[:, None], v[:, :r])])
    rhs = gf16.mul(y, v[:, r])
    sol = gf16.solve(np.hstack([lhs, rhs[:, None]]))
    if sol is None:
        return None
    q = sol[:k + r]
    loc = np.concatenate([sol[k + r :], np.array([1], dtype=np.uint16)])
    return q, loc


def _bw_lane(points: np.ndarray, y: np.ndarray, k: int, r: int) -> np.ndarray | None:
    """Berlekamp-Welch for one lane: coefficients (length k) or None."""
    sol = _bw_solve(points, y, k, r)
    if sol is None:
        return None
    q, loc = sol
    p, rem = _poly_divmod(q, loc)
    if rem.any():
        return None
    out = np.zeros(k, dtype=np.uint16)
    out[: len(p)] = p[:k]
    return out


def _roots_mask(coeffs: np.ndarray, points: np.ndarray) -> np.ndarray:
    """Boolean mask of points where the polynomial (ascending coeffs) vanishes."""
    acc = np.zeros(len(points), dtype=np.uint16)
    for c in coeffs[::-1]:
        acc = gf16.mul(acc, points) ^ c
    return acc == 0


_FOLD_SEED = 0xBA5E


def _fold_decode(
    points: np.ndarray, vfull: np.ndarray, y: np.ndarray, k: int, r: int
) -> np.ndarray | None:
    """Decode every lane at once by locating errors on folded lanes.

    All lanes share the evaluation geometry, so a field-linear combination of
    lanes is itself a lane whose error rows are the corrupted symbol rows
    (minus cancellations; a fixed row's errors survive a nonzero random fold
    except with probability ~2^-16, and single-lane corruption always
    survives).  Locator roots from two fixed folds therefore cover the
    corrupted rows; erasing those rows leaves clean symbols that determine
    all lanes in one interpolation.  This is purely a shortcut: any miss
    fails the distance check here and the caller falls back to per-lane
    decoding, so correctness never depends on the fold.
    """
    lam = np.random.default_rng(_FOLD_SEED).integers(
        1, 1 << 16, size=(y.shape[1], 2), dtype=np.uint16
    )
    folded = gf16.matmul(y, lam)
    masks = []
    for j in range(folded.shape[1]):
        sol = _bw_solve(points, folded[:, j], k, r)
        if sol is None:
            return None
        masks.append(_roots_mask(sol[1], points))
    tried: list[np.ndarray] = []
    for bad in (masks[0] | masks[1], masks[0], masks[1]):
        if int(bad.sum()) > r or any(np.array_equal(bad, t) for t in tried):
            continue
        tried.append(bad)
        keep = np.flatnonzero(~bad)[:k]
        coeffs = gf16.solve(np.hstack([vfull[keep], y[keep]]), rhs_cols=y.shape[1])
        if coeffs is None:
            continue
        if coeffs.ndim == 1:
            coeffs = coeffs[:, None]
        if _symbol_mismatches(vfull, coeffs, y) <= r:
            return coeffs
    return None


def rs_decode(k: int, r: int, received: Sequence[Symbol]) -> Bits | None:
    """Decode from received symbols, correcting up to r symbol errors.

    Requires len(received) >= k + 2r with distinct indices and uniform
    element counts (callers conform Byzantine input first, see
    conform_symbols).  Returns the payload, or None when no codeword lies
    within distance r or the frame fails to parse.
    """
    received = list(received)
    if k < 1 or r < 0:
        raise ValueError("need k >= 1 and r >= 0")
    if len(received) < k + 2 * r:
        raise ValueError("need at least k + 2r symbols")
    indices = [s.index for s in received]
    if len(set(indices)) != len(indices):
        raise ValueError("duplicate evaluation indices")
    if any(i < 1 or i > MAX_SYMBOLS for i in indices):
        raise ValueError("evaluation indices must lie in 1..65535")
    lanes = received[0].num_elements
    if any(s.num_elements != lanes for s in received):
        raise ValueError("mixed element counts; conform symbols before decoding")
    if lanes == 0:
        return None

    points = np.array(indices, dtype=np.uint16)
    y = np.stack([s.values() for s in received])
    vfull = gf16.vandermonde(points, k)

    coeffs = gf16.solve(np.hstack([vfull[:k], y[:k]]), rhs_cols=lanes)
    if coeffs is not None and coeffs.ndim == 1:
        coeffs = coeffs[:, None]
    if coeffs is None or _symbol_mismatches(vfull, coeffs, y) > r:
        if r == 0:
            return None
        coeffs = _fold_decode(points, vfull, y, k, r) if lanes > 1 else None
        if coeffs is None:
            cols = []
            for lane in range(lanes):
                c = _bw_lane(points, y[:, lane], k, r)
                if c is None:
                    return None
                cols.append(c)
            coeffs = np.stack(cols, axis=1)
            if _symbol_mismatches(vfull, coeffs, y) > r:
                return None
    return _unframe(coeffs.reshape(-1), k)


def _symbol_mismatches(vfull: np.ndarray, coeffs: np.ndarray, y: np.ndarray) -> int:
    evals = gf16.matmul(vfull, coeffs)
    return int((evals != y).any(axis=1).sum())


def conform_symbols(
    by_index: dict[int, Symbol | None], fill_absent: bool
) -> list[Symbol]:
    """Normalize claimed symbols ahead of decoding.

    Keys are the evaluation indices the receiver requires (sender position,
    not whatever index the sender claimed).  The element count is fixed by
    majority vote over the symbols present (ties to the smaller count);
    malformed symbols become the zero symbol, as do absent ones when
    fill_absent is set, so both stay inside the decoder's error budget.
    With fill_absent=False absent entries are simply omitted.
    """
    shapes: dict[int, int] = {}
    for s in by_index.values():
        if s is not None:
            shapes[s.num_elements] = shapes.get(s.num_elements, 0) + 1
    if not shapes:
        return []
    e = min(n for n, c in shapes.items() if c == max(shapes.values()))
    out: list[Symbol] = []
    for idx in sorted(by_index):
        s = by_index[idx]
        if s is None:
            if fill_absent:
                out.append(zero_symbol(idx, e))
        elif s.num_elements != e:
            out.append(zero_symbol(idx, e))
        else:
            out.append(Symbol(idx, s.data))
    return out
