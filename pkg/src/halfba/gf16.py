"""GF(2^16) arithmetic on log/exp tables.

The field is F_2[x] / (x^16 + x^12 + x^3 + x + 1), modulus 0x1100B, with
generator x.  Primitivity is verified while the tables are built: the build
aborts unless the generator cycles through all 65535 nonzero elements.

Elementwise products and matrix products are the hot kernels of the whole
package (Reed-Solomon encode/decode reduce to them).  Two interchangeable
backends implement them:

- "cython": compiled loops from halfba._gfcore, used when the extension
  built successfully;
- "python": pure numpy table-lookup fallback, always available.

Selection happens at import (HALFBA_GF_BACKEND=python|cython overrides) and
can be switched at runtime with set_backend(), which the benchmark uses to
compare the two.
"""

from __future__ import annotations

import os

import numpy as np

MODULUS = 0x1100B
ORDER = 1 << 16
GROUP = ORDER - 1


def _build_tables() -> tuple[np.ndarray, np.ndarray]:
    exp = np.zeros(2 * GROUP, dtype=np.uint16)
    log = np.zeros(ORDER, dtype=np.int32)
    x = 1
    for i in range(GROUP):
        exp[i] = x
        log[x] = i
        x <<= 1
        if x & ORDER:
            x ^= MODULUS
    if x != 1:
        raise AssertionError("0x1100B is not primitive: generator cycle broken")
    if len(set(exp[:GROUP].tolist())) != GROUP:
        raise AssertionError("0x1100B is not primitive: repeated powers")
    exp[GROUP:] = exp[:GROUP]
    return exp, log


EXP, LOG = _build_tables()


def _mul_np(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    out = EXP[LOG[a] + LOG[b]]
    return np.where((a == 0) | (b == 0), np.uint16(0), out)


def _matmul_np(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    p, q = a.shape
    q2, r = b.shape
    assert q == q2
    out = np.zeros((p, r), dtype=np.uint16)
    for i in range(q):
        col = a[:, i : i + 1]
        row = b[i : i + 1, :]
        out ^= _mul_np(col, row)
    return out


_BACKEND = "python"
_gfcore = None
try:
    from . import _gfcore as _ext  # type: ignore[attr-defined]

    _ext.init_tables(EXP, LOG)
    _gfcore = _ext
    _BACKEND = "cython"
except ImportError:
    pass

if os.environ.get("HALFBA_GF_BACKEND") == "python":
    _BACKEND = "python"


def backend() -> str:
    return _BACKEND


def set_backend(name: str) -> None:
    """Switch kernel backend at runtime ("python" or "cython")."""
    global _BACKEND
    if name == "cython" and _gfcore is None:
        raise RuntimeError("compiled kernels unavailable (halfba._gfcore not built)")
    if name not in ("python", "cython"):
        raise ValueError(f"unknown backend {name!r}")
    _BACKEND = name


def mul(a, b) -> np.ndarray:
    """Elementwise product with numpy broadcasting; returns uint16 array."""
    a = np.asarray(a, dtype=np.uint16)
    b = np.asarray(b, dtype=np.uint16)
    if _BACKEND == "cython":
        a, b = np.broadcast_arrays(a, b)
        out = np.empty(a.shape, dtype=np.uint16)
        _gfcore.mul_flat(
            np.ascontiguousarray(a).reshape(-1),
            np.ascontiguousarray(b).reshape(-1),
            out.reshape(-1),
        )
        return out
    return _mul_np(a, b)


def matmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Matrix product of uint16 matrices over the field."""
    a = np.ascontiguousarray(a, dtype=np.uint16)
    b = np.ascontiguousarray(b, dtype=np.uint16)
    if _BACKEND == "cython":
        out = np.zeros((a.shape[0], b.shape[1]), dtype=np.uint16)
        _gfcore.matmul(a, b, out)
        return out
    return _matmul_np(a, b)


def inv(a) -> np.ndarray:
    """Elementwise inverse; raises ZeroDivisionError on any zero."""
    a = np.asarray(a, dtype=np.uint16)
    if np.any(a == 0):
        raise ZeroDivisionError("inverse of zero in GF(2^16)")
    return EXP[GROUP - LOG[a]]


def mul_int(a: int, b: int) -> int:
    if a == 0 or b == 0:
        return 0
    return int(EXP[int(LOG[a]) + int(LOG[b])])


def inv_int(a: int) -> int:
    if a == 0:
        raise ZeroDivisionError("inverse of zero in GF(2^16)")
    return int(EXP[GROUP - int(LOG[a])])


def vandermonde(points: np.ndarray, ncols: int) -> np.ndarray:
    """V[i, j] = points[i] ** j, shape (len(points), ncols)."""
    points = np.asarray(points, dtype=np.uint16)
    v = np.zeros((len(points), ncols), dtype=np.uint16)
    if ncols == 0:
        return v
    v[:, 0] = 1
    for j in range(1, ncols):
        v[:, j] = mul(v[:, j - 1], points)
    return v


def row_reduce(aug: np.ndarray, rhs_cols: int = 1) -> tuple[np.ndarray, list[int], bool]:
    """In-place reduced row echelon form of an augmented matrix over the field.

    The trailing rhs_cols columns are right-hand sides and never hold pivots.
    Returns (matrix, pivot column indices, consistent); consistency means no
    row reduces to zero coefficients with a nonzero right-hand side.
    """
    aug = np.ascontiguousarray(aug, dtype=np.uint16)
    rows, cols = aug.shape
    ncols = cols - rhs_cols
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        below = np.nonzero(aug[r:, c])[0]
        if not len(below):
            continue
        pivot = r + int(below[0])
        if pivot != r:
            aug[[r, pivot]] = aug[[pivot, r]]
        scale = inv_int(int(aug[r, c]))
        aug[r] = mul(aug[r], scale)
        nz = np.nonzero(aug[:, c])[0]
        nz = nz[nz != r]
        if len(nz):
            aug[nz] ^= mul(aug[nz, c][:, None], aug[r][None, :])
        pivots.append(c)
        r += 1
        if r == rows:
            break
    consistent = True
    for i in range(r, rows):
        if aug[i, ncols:].any() and not aug[i, :ncols].any():
            consistent = False
            break
    return aug, pivots, consistent


def solve(aug: np.ndarray, rhs_cols: int = 1) -> np.ndarray | None:
    """Solve the augmented system; free variables are set to zero.

    Returns the solution, shape (nvars,) for a single right-hand side and
    (nvars, rhs_cols) otherwise, or None when the system is inconsistent.
    """
    reduced, pivots, consistent = row_reduce(np.array(aug, dtype=np.uint16), rhs_cols)
    if not consistent:
        return None
    ncols = reduced.shape[1] - rhs_cols
    sol = np.zeros((ncols, rhs_cols), dtype=np.uint16)
    for row, col in enumerate(pivots):
        sol[col] = reduced[row, ncols:]
    return sol[:, 0] if rhs_cols == 1 else sol
