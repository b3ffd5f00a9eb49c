"""Truncated-series array kernels over Z/ell.

Coefficients are int64 residues in [0, ell). Each kernel exists twice:
once as plain-Python source compiled with numba.njit on first use, and
once vectorized with numpy (Newton iteration for inversion). Dispatch
goes through the backend module.
"""
from __future__ import annotations

import numpy as np

from . import backend
from .errors import EtaqError

# ell^2 * n must stay below 2^62 so convolution accumulators fit int64
MAX_MODULUS = 1 << 20
MAX_LENGTH = 1 << 21


def _check_args(n: int, ell: int) -> None:
    if not (2 <= ell <= MAX_MODULUS):
        raise EtaqError(f"modulus {ell} outside supported range [2, {MAX_MODULUS}]")
    if not (0 <= n <= MAX_LENGTH):
        raise EtaqError(f"kernel length {n} outside supported range [0, {MAX_LENGTH}]")


def _as_arr(a) -> np.ndarray:
    return np.ascontiguousarray(a, dtype=np.int64)


# ---------------------------------------------------------------- sources

def _conv_src(a, b, n, ell):
    out = np.zeros(n, dtype=np.int64)
    la = a.shape[0]
    if la > n:
        la = n
    lb = b.shape[0]
    for i in range(la):
        ai = a[i]
        if ai == 0:
            continue
        jmax = n - i
        if jmax > lb:
            jmax = lb
        for j in range(jmax):
            out[i + j] = (out[i + j] + ai * b[j]) % ell
    return out


def _inv_src(u, n, ell):
    v = np.zeros(n, dtype=np.int64)
    u0 = u[0] % ell
    inv0 = 1
    base = u0
    e = ell - 2
    while e > 0:
        if e & 1:
            inv0 = (inv0 * base) % ell
        base = (base * base) % ell
        e >>= 1
    v[0] = inv0
    lu = u.shape[0]
    for k in range(1, n):
        mmax = k
        if mmax > lu - 1:
            mmax = lu - 1
        s = 0
        for m in range(1, mmax + 1):
            s += u[m] * v[k - m]  # each term < ell^2, at most n terms: fits int64
        s %= ell
        v[k] = (-(inv0 * s)) % ell
    return v


# ---------------------------------------------------------------- numpy lane

def _conv_numpy(a, b, n, ell):
    la = min(a.shape[0], n)
    lb = min(b.shape[0], n)
    if n == 0 or la == 0 or lb == 0:
        return np.zeros(n, dtype=np.int64)
    out = np.convolve(a[:la], b[:lb])[:n] % ell
    if out.shape[0] < n:
        out = np.concatenate([out, np.zeros(n - out.shape[0], dtype=np.int64)])
    return out


def _inv_numpy(u, n, ell):
    # Newton iteration v <- v*(2 - u*v), doubling correct coefficients
    v = np.zeros(1, dtype=np.int64)
    v[0] = pow(int(u[0]) % ell, ell - 2, ell)
    m = 1
    while m < n:
        m2 = min(2 * m, n)
        t = _conv_numpy(u, v, m2, ell)
        t = (-t) % ell
        t[0] = (t[0] + 2) % ell
        v = _conv_numpy(v, t, m2, ell)
        m = m2
    return v


# ---------------------------------------------------------------- dispatch

_NJIT = {}


def _njit_impls():
    if not _NJIT:
        from numba import njit

        _NJIT["conv"] = njit(cache=True)(_conv_src)
        _NJIT["inv"] = njit(cache=True)(_inv_src)
    return _NJIT


def conv_trunc(a, b, n: int, ell: int) -> np.ndarray:
    """First n coefficients of the product of coefficient arrays a and b, mod ell."""
    _check_args(n, ell)
    a = _as_arr(a)
    b = _as_arr(b)
    if n == 0:
        return np.zeros(0, dtype=np.int64)
    if backend.active_backend() == "numba":
        # iterate over the sparser operand: the kernel skips zero rows
        if np.count_nonzero(b) < np.count_nonzero(a):
            a, b = b, a
        return _njit_impls()["conv"](a, b, n, ell)
    return _conv_numpy(a, b, n, ell)


def inv_series(u, n: int, ell: int) -> np.ndarray:
    """First n coefficients of the multiplicative inverse of u, mod ell prime."""
    _check_args(n, ell)
    u = _as_arr(u)
    if n == 0:
        return np.zeros(0, dtype=np.int64)
    if u.shape[0] == 0 or u[0] % ell == 0:
        raise EtaqError("series inversion needs an invertible leading coefficient")
    if backend.active_backend() == "numba":
        return _njit_impls()["inv"](u, n, ell)
    return _inv_numpy(u, n, ell)


def pow_trunc(base, e: int, n: int, ell: int) -> np.ndarray:
    """First n coefficients of base**e (e >= 0), mod ell."""
    _check_args(n, ell)
    if e < 0:
        raise ValueError("pow_trunc handles nonnegative exponents only")
    out = np.zeros(max(n, 1), dtype=np.int64)[:n]
    if n == 0:
        return out
    out = np.zeros(n, dtype=np.int64)
    out[0] = 1 % ell
    sq = _as_arr(base)
    while e > 0:
        if e & 1:
            out = conv_trunc(out, sq, n, ell)
        e >>= 1
        if e:
            sq = conv_trunc(sq, sq, n, ell)
    return out


def warm_up() -> None:
    """Force kernel compilation (no-op on the numpy backend)."""
    a = np.array([1, 1], dtype=np.int64)
    conv_trunc(a, a, 2, 5)
    inv_series(a, 2, 5)
