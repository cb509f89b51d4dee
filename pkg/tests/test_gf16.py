"""Field-layer checks: tables against an independent multiplier, algebraic
laws, linear solving, and backend agreement."""

from __future__ import annotations

import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from halfba import gf16


def slow_mul(a: int, b: int) -> int:
    r = 0
    while b:
        if b & 1:
            r ^= a
        b >>= 1
        a <<= 1
        if a & 0x10000:
            a ^= gf16.MODULUS
    return r


def test_tables_roundtrip():
    assert gf16.EXP[0] == 1
    assert gf16.LOG[1] == 0
    for v in (1, 2, 3, 0x1234, 0xFFFF):
        assert gf16.EXP[gf16.LOG[v]] == v


def test_mul_matches_independent_multiplier():
    rng = random.Random(7)
    for _ in range(500):
        a = rng.randrange(1 << 16)
        b = rng.randrange(1 << 16)
        assert gf16.mul_int(a, b) == slow_mul(a, b)


def test_mul_array_matches_scalar():
    rng = np.random.default_rng(11)
    a = rng.integers(0, 1 << 16, 300, dtype=np.uint16)
    b = rng.integers(0, 1 << 16, 300, dtype=np.uint16)
    out = gf16.mul(a, b)
    for i in range(len(a)):
        assert out[i] == gf16.mul_int(int(a[i]), int(b[i]))


@settings(max_examples=50, deadline=None)
@given(
    st.integers(0, 0xFFFF),
    st.integers(0, 0xFFFF),
    st.integers(0, 0xFFFF),
)
def test_field_laws(a, b, c):
    assert gf16.mul_int(a, b) == gf16.mul_int(b, a)
    assert gf16.mul_int(a, gf16.mul_int(b, c)) == gf16.mul_int(gf16.mul_int(a, b), c)
    assert gf16.mul_int(a, b ^ c) == gf16.mul_int(a, b) ^ gf16.mul_int(a, c)
    assert gf16.mul_int(a, 1) == a
    assert gf16.mul_int(a, 0) == 0


def test_inverse():
    rng = np.random.default_rng(3)
    a = rng.integers(1, 1 << 16, 200, dtype=np.uint16)
    assert np.all(gf16.mul(a, gf16.inv(a)) == 1)
    with pytest.raises(ZeroDivisionError):
        gf16.inv(np.array([5, 0], dtype=np.uint16))


def test_matmul_against_naive():
    rng = np.random.default_rng(5)
    a = rng.integers(0, 1 << 16, (7, 5), dtype=np.uint16)
    b = rng.integers(0, 1 << 16, (5, 9), dtype=np.uint16)
    got = gf16.matmul(a, b)
    for i in range(7):
        for j in range(9):
            acc = 0
            for k in range(5):
                acc ^= gf16.mul_int(int(a[i, k]), int(b[k, j]))
            assert got[i, j] == acc


def test_vandermonde():
    pts = np.array([1, 2, 7], dtype=np.uint16)
    v = gf16.vandermonde(pts, 4)
    for i, p in enumerate((1, 2, 7)):
        acc = 1
        for j in range(4):
            assert v[i, j] == acc
            acc = gf16.mul_int(acc, p)


def test_solve_square_system():
    rng = np.random.default_rng(9)
    pts = np.array([1, 2, 3, 4, 5], dtype=np.uint16)
    v = gf16.vandermonde(pts, 5)
    x = rng.integers(0, 1 << 16, 5, dtype=np.uint16)
    b = gf16.matmul(v, x.reshape(-1, 1)).reshape(-1)
    aug = np.hstack([v, b.reshape(-1, 1)])
    sol = gf16.solve(aug)
    assert sol is not None
    assert np.array_equal(sol, x)


def test_solve_inconsistent_returns_none():
    aug = np.array([[1, 1, 3], [1, 1, 4]], dtype=np.uint16)
    assert gf16.solve(aug) is None


def test_solve_multi_rhs():
    pts = np.array([3, 9, 27], dtype=np.uint16)
    v = gf16.vandermonde(pts, 3)
    x = np.array([[1, 2], [3, 4], [5, 6]], dtype=np.uint16)
    b = gf16.matmul(v, x)
    sol = gf16.solve(np.hstack([v, b]), rhs_cols=2)
    assert sol is not None
    assert np.array_equal(sol, x)


@pytest.mark.skipif(gf16._gfcore is None, reason="compiled kernels not built")
def test_backends_agree():
    rng = np.random.default_rng(13)
    a = rng.integers(0, 1 << 16, (20, 17), dtype=np.uint16)
    b = rng.integers(0, 1 << 16, (17, 23), dtype=np.uint16)
    prev = gf16.backend()
    try:
        gf16.set_backend("python")
        m_py = gf16.matmul(a, b)
        e_py = gf16.mul(a[0], a[1])
        gf16.set_backend("cython")
        m_cy = gf16.matmul(a, b)
        e_cy = gf16.mul(a[0], a[1])
    finally:
        gf16.set_backend(prev)
    assert np.array_equal(m_py, m_cy)
    assert np.array_equal(e_py, e_cy)
