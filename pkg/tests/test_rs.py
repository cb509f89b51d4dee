"""Codec checks against the independent brute-force oracle.

The oracle (halfba.oracles) uses shift-and-xor field arithmetic, Lagrange
interpolation, and exhaustive error-subset search; it shares no code with
the production encoder/decoder.
"""

from __future__ import annotations

import json
import pathlib
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from halfba.oracles import OracleSymbol, rs_encode_reference, rs_subset_decode
from halfba.rs import Codeword, Symbol, conform_symbols, rs_decode, rs_encode, zero_symbol
from halfba.values import BOT, Bits

FIXTURES = pathlib.Path(__file__).parent / "fixtures"


def to_oracle(sym: Symbol) -> OracleSymbol:
    return OracleSymbol(sym.index, sym.elements)


def corrupt(sym: Symbol, rng: random.Random) -> Symbol:
    elems = list(sym.elements)
    pos = rng.randrange(len(elems))
    elems[pos] ^= rng.randrange(1, 1 << 16)
    return Symbol.from_elements(sym.index, elems)


def test_encode_matches_reference():
    rng = random.Random(100)
    for _ in range(25):
        k = rng.randint(1, 6)
        n = rng.randint(k, k + 8)
        length = rng.randint(0, 120)
        payload = Bits.random(rng, length)
        cw = rs_encode(payload, n, k)
        ref = rs_encode_reference(payload, n, k)
        assert len(cw.symbols) == n
        for got, want in zip(cw.symbols, ref):
            assert got.index == want.index
            assert got.elements == want.elements


def test_single_symbol_is_framed_payload():
    payload = Bits(24, 0xABCDEF)
    cw = rs_encode(payload, 1, 1)
    # k=1: chunk 0 is the whole frame, every symbol equals it; the frame is
    # the 32-bit length header followed by the payload and zero padding.
    framed = (24 << (64 - 32)) | (0xABCDEF << (64 - 32 - 24))
    want = tuple((framed >> (64 - 16 * (i + 1))) & 0xFFFF for i in range(4))
    assert cw.symbols[0].elements == want


def test_full_rate_roundtrip():
    rng = random.Random(2)
    for k in (1, 2, 5):
        payload = Bits.random(rng, 77)
        cw = rs_encode(payload, k, k)
        assert rs_decode(k, 0, cw.symbols) == payload


def test_roundtrip_with_errors():
    rng = random.Random(3)
    for trial in range(40):
        k = rng.randint(1, 5)
        r = rng.randint(0, 4)
        n = k + 2 * r + rng.randint(0, 3)
        payload = Bits.random(rng, rng.randint(0, 200))
        cw = rs_encode(payload, n, k)
        received = list(cw.symbols)
        bad = rng.sample(range(n), rng.randint(0, r))
        for i in bad:
            received[i] = corrupt(received[i], rng)
        assert rs_decode(k, r, received) == payload


def test_missing_symbols_count_as_errors():
    rng = random.Random(4)
    payload = Bits.random(rng, 64)
    cw = rs_encode(payload, 7, 3)
    received = list(cw.symbols)
    # drop two symbols entirely: with r=2 the zero substitutes are absorbed
    e = received[0].num_elements
    received[1] = zero_symbol(received[1].index, e)
    received[5] = zero_symbol(received[5].index, e)
    assert rs_decode(3, 2, received) == payload


def test_zero_symbol_may_lie_on_codeword():
    # the all-zero frame encodes BOT, so zero symbols decode to BOT cleanly
    cw = rs_encode(BOT, 4, 2)
    assert all(all(e == 0 for e in s.elements) for s in cw.symbols)
    assert rs_decode(2, 1, cw.symbols) == BOT


def test_worked_example_two_of_seven():
    payload = Bits(96, 0x0123456789ABCDEF01234567)
    cw = rs_encode(payload, 7, 3)
    received = list(cw.symbols)
    received[2] = Symbol.from_elements(3, [e ^ 0xFFFF for e in received[2].elements])
    received[6] = Symbol.from_elements(7, [1] * received[6].num_elements)
    assert rs_decode(3, 2, received) == payload
    # three corruptions exceed the budget; unique decoding must not succeed
    received[0] = Symbol.from_elements(1, [42] * received[0].num_elements)
    assert rs_decode(3, 2, received) is None


def test_decode_rejects_bad_parameters():
    cw = rs_encode(Bits(8, 0xAB), 5, 2)
    with pytest.raises(ValueError):
        rs_decode(2, 2, cw.symbols[:5])  # needs k + 2r = 6
    with pytest.raises(ValueError):
        rs_decode(0, 0, cw.symbols)
    with pytest.raises(ValueError):
        rs_decode(2, 1, [cw.symbols[0]] * 5)  # duplicate indices
    with pytest.raises(ValueError):
        rs_encode(Bits(8, 1), 3, 4)  # k > num_symbols
    with pytest.raises(ValueError):
        rs_encode(Bits(8, 1), 1 << 16, 1)  # too many evaluation points


def test_decode_rejects_mixed_element_counts():
    cw = rs_encode(Bits(40, 0xAAAAAAAAAA), 5, 2)
    received = list(cw.symbols)
    received[0] = Symbol.from_elements(1, list(received[0].elements) + [0])
    with pytest.raises(ValueError):
        rs_decode(2, 1, received)


def test_conform_symbols_forces_index_and_shape():
    cw = rs_encode(Bits(40, 0x1122334455), 5, 2)
    e = cw.symbols[0].num_elements
    slots: dict[int, Symbol | None] = {
        1: cw.symbols[0],
        2: Symbol(9, cw.symbols[1].data),  # lying about its index
        3: None,  # never arrived
        4: Symbol.from_elements(4, [7]),  # malformed length
        5: cw.symbols[4],
    }
    out = conform_symbols(slots, fill_absent=True)
    assert [s.index for s in out] == [1, 2, 3, 4, 5]
    assert out[1].data == cw.symbols[1].data
    assert out[2] == zero_symbol(3, e)
    assert out[3] == zero_symbol(4, e)
    dropped = conform_symbols(slots, fill_absent=False)
    assert [s.index for s in dropped] == [1, 2, 4, 5]


def test_symbol_size_bound():
    for length, k in ((65536, 21), (1024, 4), (0, 1), (31, 5)):
        cw = rs_encode(Bits.random(random.Random(1), length), k + 2, k)
        bound = -(-(length + 32) // k) + 16
        for s in cw.symbols:
            assert s.bit_size <= bound


@settings(max_examples=40, deadline=None)
@given(st.data())
def test_roundtrip_property(data):
    k = data.draw(st.integers(1, 4))
    r = data.draw(st.integers(0, 3))
    extra = data.draw(st.integers(0, 2))
    n = k + 2 * r + extra
    length = data.draw(st.integers(0, 90))
    value = data.draw(st.integers(0, (1 << length) - 1)) if length else 0
    payload = Bits(length, value)
    cw = rs_encode(payload, n, k)
    nbad = data.draw(st.integers(0, r))
    bad = data.draw(st.permutations(range(n)))[:nbad]
    received = list(cw.symbols)
    rng = random.Random(data.draw(st.integers(0, 2**20)))
    for i in bad:
        received[i] = corrupt(received[i], rng)
    assert rs_decode(k, r, received) == payload


def test_oracle_agreement_random_corruption():
    """Randomized cross-check: production decoder vs brute-force subset oracle."""
    rng = random.Random(42)
    for trial in range(150):
        k = rng.randint(1, 3)
        r = rng.randint(0, 2)
        n = k + 2 * r + rng.randint(0, 2)
        payload = Bits.random(rng, rng.randint(0, 40))
        cw = rs_encode(payload, n, k)
        received = list(cw.symbols)
        # sometimes exceed the budget to exercise failure agreement
        nbad = rng.randint(0, min(n, r + 2))
        for i in rng.sample(range(n), nbad):
            received[i] = corrupt(received[i], rng)
        got = rs_decode(k, r, received)
        candidates = rs_subset_decode(k, r, [to_oracle(s) for s in received])
        assert len(candidates) <= 1
        want = candidates[0] if candidates else None
        assert got == want, f"trial {trial}: {got} != {want}"


def test_frozen_vectors():
    path = FIXTURES / "rs_vectors.json"
    cases = json.loads(path.read_text())
    assert len(cases) >= 6
    for case in cases:
        payload = Bits(case["length"], int(case["value_hex"], 16) if case["length"] else 0)
        cw = rs_encode(payload, case["num_symbols"], case["k"])
        got = [{"index": s.index, "data_hex": s.data.hex()} for s in cw.symbols]
        assert got == case["symbols"]
        assert rs_decode(case["k"], case["r"], cw.symbols) == payload
