# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled GF(2^16) kernels: elementwise product and matrix product.

Tables are installed once via init_tables(); the numpy arrays passed in are
kept alive by module-level references.
"""

import numpy as np

cimport numpy as cnp

cdef cnp.uint16_t[::1] _EXP
cdef cnp.int32_t[::1] _LOG
_exp_ref = None
_log_ref = None


def init_tables(exp, log):
    global _EXP, _LOG, _exp_ref, _log_ref
    _exp_ref = np.ascontiguousarray(exp, dtype=np.uint16)
    _log_ref = np.ascontiguousarray(log, dtype=np.int32)
    _EXP = _exp_ref
    _LOG = _log_ref


def mul_flat(cnp.uint16_t[::1] a, cnp.uint16_t[::1] b, cnp.uint16_t[::1] out):
    cdef Py_ssize_t i, n = a.shape[0]
    cdef cnp.uint16_t av, bv
    for i in range(n):
        av = a[i]
        bv = b[i]
        if av == 0 or bv == 0:
            out[i] = 0
        else:
            out[i] = _EXP[_LOG[av] + _LOG[bv]]


def matmul(cnp.uint16_t[:, ::1] a, cnp.uint16_t[:, ::1] b, cnp.uint16_t[:, ::1] out):
    cdef Py_ssize_t i, j, k
    cdef Py_ssize_t p = a.shape[0], q = a.shape[1], r = b.shape[1]
    cdef cnp.uint16_t av, bv
    cdef cnp.int32_t la
    cdef cnp.uint16_t acc
    for i in range(p):
        for k in range(q):
            av = a[i, k]
            if av == 0:
                continue
            la = _LOG[av]
            for j in range(r):
                bv = b[k, j]
                if bv != 0:
                    out[i, j] ^= _EXP[la + _LOG[bv]]
