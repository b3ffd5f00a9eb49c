"""Truncated q-series over ZZ and ZZ/ell, and eta-product expansion.

A series is a coefficient window: exponents below `offset` are known to
be zero, exponents in [offset, precision) are stored, and exponents at
or beyond `precision` are unknown. Offsets may be negative. Coefficients
are exact Python integers, or int64 residues when a prime modulus is
attached. Every operation propagates the tightest provable precision.
No floating point is used anywhere.
"""
from __future__ import annotations

from typing import Iterable, Optional, Sequence

import numpy as np

from . import kernels
from .errors import ModulusMismatchError, PrecisionError, SpecSyntaxError

__all__ = [
    "TruncatedSeries",
    "ProductSpec",
    "euler_series",
    "expand_product",
    "mul",
    "power",
    "theta",
    "u_operator",
    "ap_extract",
    "reduce_mod",
    "shift",
    "dilate",
    "truncate",
]


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def _check_modulus(ell: int) -> None:
    if not isinstance(ell, int) or not _is_prime(ell):
        raise ValueError(f"modulus must be a prime, got {ell!r}")
    if ell > kernels.MAX_MODULUS:
        raise ValueError(f"modulus {ell} exceeds supported bound {kernels.MAX_MODULUS}")


class TruncatedSeries:
    """Immutable truncated q-series with explicit offset and precision."""

    __slots__ = ("_offset", "_modulus", "_coeffs")

    def __init__(self, offset: int, coeffs, modulus: Optional[int] = None):
        if modulus is not None:
            _check_modulus(modulus)
            arr = np.asarray(coeffs, dtype=np.int64) % modulus
            arr = np.ascontiguousarray(arr)
            arr.setflags(write=False)
            self._coeffs = arr
        else:
            self._coeffs = tuple(int(c) for c in coeffs)
        self._offset = int(offset)
        self._modulus = modulus

    @property
    def offset(self) -> int:
        return self._offset

    @property
    def precision(self) -> int:
        return self._offset + len(self._coeffs)

    @property
    def modulus(self) -> Optional[int]:
        return self._modulus

    @property
    def coeffs(self):
        """Stored coefficient window (tuple, or read-only int64 array)."""
        return self._coeffs

    @classmethod
    def one(cls, precision: int, modulus: Optional[int] = None) -> "TruncatedSeries":
        if precision < 1:
            raise ValueError("constant series needs precision >= 1")
        data = [1] + [0] * (precision - 1)
        return cls(0, data, modulus)

    def coeff(self, n: int) -> int:
        """Coefficient of q^n. Zero below the offset; error at or past precision."""
        if n >= self.precision:
            raise PrecisionError(
                f"coefficient q^{n} beyond precision {self.precision}"
            )
        if n < self._offset:
            return 0
        return int(self._coeffs[n - self._offset])

    def is_zero(self) -> bool:
        if self._modulus is not None:
            return not self._coeffs.any()
        return all(c == 0 for c in self._coeffs)

    def __eq__(self, other) -> bool:
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        if self._modulus != other._modulus:
            raise ModulusMismatchError(
                f"comparing series with moduli {self._modulus} and {other._modulus}"
            )
        hi = min(self.precision, other.precision)
        lo = min(self._offset, other._offset)
        for n in range(lo, hi):
            if self.coeff(n) != other.coeff(n):
                return False
        return True

    def __hash__(self):
        raise TypeError("TruncatedSeries equality is range-sensitive; not hashable")

    def __mul__(self, other):
        if isinstance(other, TruncatedSeries):
            return mul(self, other)
        return NotImplemented

    def __add__(self, other):
        if isinstance(other, TruncatedSeries):
            return _add_sub(self, other, 1)
        return NotImplemented

    def __sub__(self, other):
        if isinstance(other, TruncatedSeries):
            return _add_sub(self, other, -1)
        return NotImplemented

    def __pow__(self, k):
        if isinstance(k, int):
            return power(self, k)
        return NotImplemented

    def __repr__(self):
        terms = []
        shown = 0
        for n in range(self._offset, self.precision):
            c = self.coeff(n)
            if c == 0:
                continue
            terms.append(f"{c}*q^{n}")
            shown += 1
            if shown == 4:
                terms.append("...")
                break
        body = " + ".join(terms) if terms else "0"
        tag = f" mod {self._modulus}" if self._modulus else ""
        return f"<series {body} + O(q^{self.precision}){tag}>"


def _require_same_modulus(a: TruncatedSeries, b: TruncatedSeries) -> Optional[int]:
    if a.modulus != b.modulus:
        raise ModulusMismatchError(f"moduli differ: {a.modulus} vs {b.modulus}")
    return a.modulus


# ------------------------------------------------------------ exact helpers

_KARATSUBA_CUTOFF = 48


def _school_mul(a: Sequence[int], b: Sequence[int]) -> list:
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai == 0:
            continue
        for j, bj in enumerate(b):
            if bj:
                out[i + j] += ai * bj
    return out


def _kara_mul(a: Sequence[int], b: Sequence[int]) -> list:
    # full product; divide-and-conquer above the cutoff
    if not a or not b:
        return []
    if min(len(a), len(b)) <= _KARATSUBA_CUTOFF:
        return _school_mul(a, b)
    m = max(len(a), len(b)) // 2
    a0, a1 = list(a[:m]), list(a[m:])
    b0, b1 = list(b[:m]), list(b[m:])
    z0 = _kara_mul(a0, b0) if a0 and b0 else []
    z2 = _kara_mul(a1, b1) if a1 and b1 else []
    s0 = [x + y for x, y in zip(a0, a1)] + list(a1[len(a0):]) + list(a0[len(a1):])
    s1 = [x + y for x, y in zip(b0, b1)] + list(b1[len(b0):]) + list(b0[len(b1):])
    z1 = _kara_mul(s0, s1) if s0 and s1 else []
    out = [0] * (len(a) + len(b) - 1)
    for i, v in enumerate(z0):
        out[i] += v
    for i, v in enumerate(z1):
        out[i + m] += v
    for i, v in enumerate(z0):
        out[i + m] -= v
    for i, v in enumerate(z2):
        out[i + m] -= v
    for i, v in enumerate(z2):
        out[i + 2 * m] += v
    return out


def _conv_exact(a: Sequence[int], b: Sequence[int], n: int) -> list:
    a = list(a[:n])
    b = list(b[:n])
    if n <= 0 or not a or not b:
        return [0] * max(n, 0)
    full = _kara_mul(a, b)
    out = full[:n]
    if len(out) < n:
        out += [0] * (n - len(out))
    return out


def _inv_exact(u: Sequence[int], n: int) -> list:
    u0 = u[0]
    if u0 not in (1, -1):
        raise ValueError("exact inversion needs leading coefficient +-1")
    v = [0] * n
    v[0] = u0
    for k in range(1, n):
        s = 0
        for m in range(1, min(k, len(u) - 1) + 1):
            s += u[m] * v[k - m]
        v[k] = -u0 * s
    return v


def _pow_rel(stored, e: int, n: int, modulus: Optional[int]) -> object:
    # e >= 0; operates on the relative coefficient window of length n
    if modulus is not None:
        return kernels.pow_trunc(stored, e, n, modulus)
    out = [1] + [0] * (n - 1)
    sq = list(stored[:n])
    while e > 0:
        if e & 1:
            out = _conv_exact(out, sq, n)
        e >>= 1
        if e:
            sq = _conv_exact(sq, sq, n)
    return out


# ------------------------------------------------------------ operations

def mul(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    """Product, at the tightest provable precision."""
    m = _require_same_modulus(a, b)
    off = a.offset + b.offset
    prec = min(a.offset + b.precision, b.offset + a.precision)
    n = prec - off
    if n <= 0:
        return TruncatedSeries(off, [], m)
    if m is not None:
        data = kernels.conv_trunc(a.coeffs, b.coeffs, n, m)
    else:
        data = _conv_exact(a.coeffs, b.coeffs, n)
    return TruncatedSeries(off, data, m)


def _add_sub(a: TruncatedSeries, b: TruncatedSeries, sign: int) -> TruncatedSeries:
    m = _require_same_modulus(a, b)
    off = min(a.offset, b.offset)
    prec = min(a.precision, b.precision)
    if prec <= off:
        return TruncatedSeries(off, [], m)
    data = [a.coeff(n) + sign * b.coeff(n) for n in range(off, prec)]
    return TruncatedSeries(off, data, m)


def scale(a: TruncatedSeries, c: int) -> TruncatedSeries:
    """Multiply every coefficient by the integer c."""
    if a.modulus is not None:
        return TruncatedSeries(a.offset, (a.coeffs * (c % a.modulus)) % a.modulus, a.modulus)
    return TruncatedSeries(a.offset, [c * v for v in a.coeffs], None)


def power(a: TruncatedSeries, k: int) -> TruncatedSeries:
    """a**k; negative k inverts, requiring an invertible lowest stored coefficient."""
    if not isinstance(k, int):
        raise TypeError("exponent must be an integer")
    rel = a.precision - a.offset
    if k == 0:
        if rel < 1:
            raise PrecisionError("cannot form the empty series to the 0th power")
        return TruncatedSeries.one(rel, a.modulus)
    if k < 0:
        if rel < 1:
            raise PrecisionError("cannot invert an empty series")
        lead = a.coeffs[0]
        if a.modulus is not None:
            if int(lead) % a.modulus == 0:
                raise ValueError("lowest stored coefficient not invertible mod ell")
            inv = kernels.inv_series(a.coeffs, rel, a.modulus)
        else:
            inv = _inv_exact(list(a.coeffs), rel)
        return power(TruncatedSeries(-a.offset, inv, a.modulus), -k)
    data = _pow_rel(a.coeffs, k, rel, a.modulus) if rel > 0 else []
    return TruncatedSeries(k * a.offset, data, a.modulus)


def theta(a: TruncatedSeries) -> TruncatedSeries:
    """Apply q*d/dq: coefficient of q^n becomes n*c(n)."""
    if a.modulus is not None:
        idx = np.arange(a.offset, a.precision, dtype=np.int64) % a.modulus
        return TruncatedSeries(a.offset, (idx * a.coeffs) % a.modulus, a.modulus)
    data = [n * c for n, c in zip(range(a.offset, a.precision), a.coeffs)]
    return TruncatedSeries(a.offset, data, None)


def u_operator(a: TruncatedSeries, ell: int) -> TruncatedSeries:
    """Keep coefficients at exponents divisible by ell: sum c(ell*n) q^n."""
    if not _is_prime(ell):
        raise ValueError(f"operator index must be prime, got {ell}")
    new_off = -((-a.offset) // ell)  # ceil(offset/ell)
    new_prec = (a.precision - 1) // ell + 1
    if new_prec < new_off:
        new_prec = new_off
    n = new_prec - new_off
    if n <= 0:
        return TruncatedSeries(new_off, [], a.modulus)
    first = ell * new_off - a.offset
    if a.modulus is not None:
        data = a.coeffs[first::ell][:n]
    else:
        data = [a.coeffs[first + ell * t] for t in range(n)]
    return TruncatedSeries(new_off, data, a.modulus)


def shift(a: TruncatedSeries, s: int) -> TruncatedSeries:
    """Multiply by q^s (s may be negative)."""
    return TruncatedSeries(a.offset + s, a.coeffs, a.modulus)


def ap_extract(a: TruncatedSeries, ell: int, r: int) -> TruncatedSeries:
    """Arithmetic-progression slice: sum c(ell*n + r) q^n.

    Equals u_operator applied after a shift by -r.
    """
    if not 0 <= r < ell:
        raise ValueError(f"residue {r} out of range [0, {ell})")
    return u_operator(shift(a, -r), ell)


def reduce_mod(a: TruncatedSeries, ell: int) -> TruncatedSeries:
    """Coefficientwise reduction into [0, ell)."""
    if a.modulus is not None:
        if a.modulus == ell:
            return a
        raise ModulusMismatchError(f"series already reduced mod {a.modulus}")
    _check_modulus(ell)
    return TruncatedSeries(a.offset, [c % ell for c in a.coeffs], ell)


def dilate(a: TruncatedSeries, t: int) -> TruncatedSeries:
    """Substitute q -> q^t for t >= 1."""
    if t < 1:
        raise ValueError("dilation factor must be >= 1")
    if t == 1:
        return a
    rel = a.precision - a.offset
    if rel <= 0:
        return TruncatedSeries(a.offset * t, [], a.modulus)
    n = (rel - 1) * t + 1
    if a.modulus is not None:
        data = np.zeros(n, dtype=np.int64)
        data[::t] = a.coeffs
    else:
        data = [0] * n
        data[::t] = list(a.coeffs)
    return TruncatedSeries(a.offset * t, data, a.modulus)


def truncate(a: TruncatedSeries, precision: int) -> TruncatedSeries:
    """Drop coefficients at or beyond the given precision."""
    if precision >= a.precision:
        return a
    n = max(precision - a.offset, 0)
    return TruncatedSeries(a.offset, a.coeffs[:n], a.modulus)


# ------------------------------------------------------------ eta products

class ProductSpec:
    """Formal product of factors (1 - q^(d*n))^e over n >= 1, written "d^e".

    Factors with equal d are merged by summing exponents; factors that
    cancel disappear. The factor list is kept sorted by d.
    """

    __slots__ = ("_factors",)

    def __init__(self, factors: Iterable[tuple]):
        merged: dict = {}
        for d, e in factors:
            d = int(d)
            e = int(e)
            if d <= 0:
                raise SpecSyntaxError(f"factor scale must be positive, got {d}")
            if e == 0:
                raise SpecSyntaxError(f"factor exponent must be nonzero for scale {d}")
            merged[d] = merged.get(d, 0) + e
        self._factors = tuple(
            (d, e) for d, e in sorted(merged.items()) if e != 0
        )

    @classmethod
    def parse(cls, text: str) -> "ProductSpec":
        toks = text.split()
        if not toks:
            raise SpecSyntaxError("empty product specification")
        pairs = []
        for tok in toks:
            head, sep, tail = tok.partition("^")
            if not sep:
                raise SpecSyntaxError(f"token {tok!r} is not of the form d^e")
            try:
                d = int(head)
                e = int(tail)
            except ValueError:
                raise SpecSyntaxError(f"token {tok!r} is not of the form d^e") from None
            pairs.append((d, e))
        return cls(pairs)

    @property
    def factors(self) -> tuple:
        return self._factors

    def __str__(self) -> str:
        return " ".join(f"{d}^{e}" for d, e in self._factors)

    def __repr__(self) -> str:
        return f"ProductSpec({str(self)!r})"

    def __eq__(self, other) -> bool:
        if not isinstance(other, ProductSpec):
            return NotImplemented
        return self._factors == other._factors

    def __hash__(self):
        return hash(self._factors)

    @property
    def lcm(self) -> int:
        """Least common multiple of the factor scales (1 for the empty product)."""
        out = 1
        for d, _ in self._factors:
            g, x = out, d
            while x:
                g, x = x, g % x
            out = out * d // g
        return out

    @property
    def is_reciprocal(self) -> bool:
        """True when every exponent is negative (a reciprocal eta-type product)."""
        return bool(self._factors) and all(e < 0 for _, e in self._factors)

    def parts(self) -> tuple:
        """Scales with multiplicity -e, for all-negative specs."""
        if not all(e < 0 for _, e in self._factors):
            raise ValueError("parts() requires all exponents negative")
        out = []
        for d, e in self._factors:
            out.extend([d] * (-e))
        return tuple(out)

    @property
    def part_count(self) -> int:
        return len(self.parts())


def _pentagonal_entries(scale: int, precision: int):
    """(exponent, sign) pairs of prod_n (1 - q^(scale*n)), exponents < precision."""
    entries = [(0, 1)]
    k = 1
    while True:
        g1 = scale * k * (3 * k - 1) // 2
        g2 = scale * k * (3 * k + 1) // 2
        s = 1 if k % 2 == 0 else -1
        hit = False
        if g1 < precision:
            entries.append((g1, s))
            hit = True
        if g2 < precision:
            entries.append((g2, s))
            hit = True
        if not hit:
            break
        k += 1
    return entries


def euler_series(precision: int) -> TruncatedSeries:
    """prod_n (1 - q^n) to the given precision, coefficients in {-1, 0, 1}."""
    if precision < 1:
        raise ValueError("precision must be >= 1")
    data = [0] * precision
    for idx, s in _pentagonal_entries(1, precision):
        data[idx] = s
    return TruncatedSeries(0, data, None)


def _pentagonal_arr(scale: int, precision: int, ell: int) -> np.ndarray:
    data = np.zeros(precision, dtype=np.int64)
    for idx, s in _pentagonal_entries(scale, precision):
        data[idx] = s % ell
    return data


def _sigma1_table(limit: int) -> list:
    sig = [0] * (limit + 1)
    for d in range(1, limit + 1):
        for m in range(d, limit + 1, d):
            sig[m] += d
    return sig


def _expand_exact(spec: ProductSpec, precision: int) -> TruncatedSeries:
    # logarithmic-derivative recurrence: n*c(n) = sum_m L(m) c(n-m)
    P = precision
    sig = _sigma1_table(P - 1)
    L = [0] * P
    for d, e in spec.factors:
        for t in range(1, (P - 1) // d + 1):
            L[d * t] -= e * d * sig[t]
    c = [0] * P
    c[0] = 1
    for n in range(1, P):
        s = 0
        for m in range(1, n + 1):
            if L[m]:
                s += L[m] * c[n - m]
        q, r = divmod(s, n)
        if r:
            raise ArithmeticError("non-integral expansion step; invalid product")
        c[n] = q
    return TruncatedSeries(0, c, None)


def _expand_mod(spec: ProductSpec, precision: int, ell: int) -> TruncatedSeries:
    # sparse pentagonal factors, binary powering, one denominator inversion
    P = precision
    num = None
    den = None
    for d, e in spec.factors:
        base = _pentagonal_arr(d, P, ell)
        p = base if abs(e) == 1 else kernels.pow_trunc(base, abs(e), P, ell)
        if e > 0:
            num = p if num is None else kernels.conv_trunc(num, p, P, ell)
        else:
            den = p if den is None else kernels.conv_trunc(den, p, P, ell)
    if den is not None:
        deninv = kernels.inv_series(den, P, ell)
        if num is None:
            data = deninv
        else:
            data = kernels.conv_trunc(num, deninv, P, ell)
    elif num is not None:
        data = num
    else:
        data = np.zeros(P, dtype=np.int64)
        data[0] = 1 % ell
    return TruncatedSeries(0, data, ell)


def expand_product(spec: ProductSpec, precision: int, modulus: Optional[int] = None) -> TruncatedSeries:
    """Expand prod_{(d,e)} prod_n (1 - q^(d*n))^e as a q-series.

    The result has offset 0, constant term 1, and the requested precision.
    """
    if precision < 1:
        raise ValueError("precision must be >= 1")
    if not isinstance(spec, ProductSpec):
        raise TypeError("spec must be a ProductSpec")
    if modulus is None:
        return _expand_exact(spec, precision)
    _check_modulus(modulus)
    return _expand_mod(spec, precision, modulus)
