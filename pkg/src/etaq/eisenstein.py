"""Eisenstein series, the discriminant cusp form, and weight bookkeeping.

Normalizations follow E_2k = 1 - (4k/B_2k) sum_{n>=1} sigma_{2k-1}(n) q^n
with exact Bernoulli numbers. Weights whose normalization is not an
integer exist here only mod ell, where the prefactor is reduced as a
unit fraction after an ell-integrality check.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Optional

import numpy as np

from . import kernels
from .errors import PrecisionError
from .series import (
    ProductSpec,
    TruncatedSeries,
    _check_modulus,
    _is_prime,
    _pentagonal_arr,
    euler_series,
    mul,
    power,
    scale,
    shift,
    theta,
)

__all__ = [
    "FormWithWeight",
    "bernoulli",
    "residue_of_fraction",
    "eisenstein",
    "delta",
    "delta_product_form",
    "theta_form",
]


@dataclass(frozen=True)
class FormWithWeight:
    """A q-expansion tagged with its modular weight and level."""

    series: TruncatedSeries
    weight: int
    level: int = 1

    def __post_init__(self):
        if self.weight < 0:
            raise ValueError("weight must be nonnegative")
        if self.level < 1:
            raise ValueError("level must be >= 1")


_BERN: list = [Fraction(1)]


def bernoulli(m: int) -> Fraction:
    """Exact Bernoulli number B_m via the convolution recurrence.

    Odd m > 1 is rejected rather than silently returning zero.
    """
    if m < 0:
        raise ValueError("Bernoulli index must be nonnegative")
    if m % 2 == 1 and m > 1:
        raise ValueError(f"odd Bernoulli index {m} rejected (the value is zero)")
    while len(_BERN) <= m:
        k = len(_BERN)
        acc = Fraction(0)
        for j in range(k):
            acc += comb(k + 1, j) * _BERN[j]
        _BERN.append(-acc / (k + 1))
    return _BERN[m]


def residue_of_fraction(fr: Fraction, ell: int) -> int:
    """Reduce an ell-integral fraction into [0, ell)."""
    if fr.denominator % ell == 0:
        raise ValueError(f"{fr} is not {ell}-integral")
    return fr.numerator * pow(fr.denominator, -1, ell) % ell


def _sigma_table(p: int, limit: int, modulus: Optional[int]) -> list:
    """sigma_p(n) for 0 <= n <= limit (index 0 unused)."""
    sig = [0] * (limit + 1)
    if modulus is None:
        for d in range(1, limit + 1):
            dp = d ** p
            for m in range(d, limit + 1, d):
                sig[m] += dp
    else:
        for d in range(1, limit + 1):
            dp = pow(d, p, modulus)
            for m in range(d, limit + 1, d):
                sig[m] = (sig[m] + dp) % modulus
    return sig


def eisenstein(weight: int, precision: int, modulus: Optional[int] = None) -> FormWithWeight:
    """Level-1 Eisenstein series of the given even weight.

    Without a modulus the normalization 4k/B_2k must be an integer
    (weights 2, 4, 6, 8, 10, 14); otherwise pass a prime modulus and the
    prefactor is reduced mod ell.
    """
    if weight < 2 or weight % 2:
        raise ValueError(f"weight must be even and >= 2, got {weight}")
    if precision < 1:
        raise ValueError("precision must be >= 1")
    norm = Fraction(2 * weight) / bernoulli(weight)  # 4k/B_2k with 2k = weight
    if modulus is None:
        if norm.denominator != 1:
            raise ValueError(
                f"weight {weight} has non-integral normalization {norm}; "
                "supply a modulus"
            )
        sig = _sigma_table(weight - 1, precision - 1, None)
        data = [1] + [-int(norm) * sig[n] for n in range(1, precision)]
        return FormWithWeight(TruncatedSeries(0, data, None), weight, 1)
    _check_modulus(modulus)
    c = residue_of_fraction(norm, modulus)
    sig = _sigma_table(weight - 1, precision - 1, modulus)
    data = np.zeros(precision, dtype=np.int64)
    data[0] = 1 % modulus
    for n in range(1, precision):
        data[n] = (-c * sig[n]) % modulus
    return FormWithWeight(TruncatedSeries(0, data, modulus), weight, 1)


def delta(precision: int) -> FormWithWeight:
    """The weight-12 cusp form q * prod_n (1 - q^n)^24, exact coefficients."""
    if precision < 2:
        raise ValueError("precision must be >= 2")
    e = euler_series(precision - 1)
    return FormWithWeight(shift(power(e, 24), 1), 12, 1)


def _delta_mod(precision: int, ell: int) -> TruncatedSeries:
    if precision < 2:
        raise ValueError("precision must be >= 2")
    arr = kernels.pow_trunc(_pentagonal_arr(1, precision - 1, ell), 24, precision - 1, ell)
    return TruncatedSeries(1, arr, ell)


def delta_product_form(spec: ProductSpec, ell: int, precision: int) -> FormWithWeight:
    """Power of a product of rescaled discriminant forms attached to a spec.

    For an all-negative spec with parts a_1..a_j this is
    (prod_i delta(a_i z))^((ell^2-1)/24) mod ell: a form of weight
    j*(ell^2-1)/2 and level lcm(a_i) whose expansion starts at
    q^(offset) with offset = (ell^2-1)/24 * sum(a_i).
    """
    if not _is_prime(ell) or ell <= 3:
        raise ValueError("prime ell > 3 required")
    if not spec.is_reciprocal:
        raise ValueError("spec must have all exponents negative")
    parts = spec.parts()
    dexp = (ell * ell - 1) // 24
    offset = dexp * sum(parts)
    weight = len(parts) * (ell * ell - 1) // 2
    if precision <= offset:
        raise PrecisionError(
            f"precision {precision} does not reach the leading exponent {offset}"
        )
    rel = precision - offset
    mult: dict = {}
    for p in parts:
        mult[p] = mult.get(p, 0) + 1
    arr = None
    for d in sorted(mult):
        base = _pentagonal_arr(d, rel, ell)
        p = kernels.pow_trunc(base, 24 * dexp * mult[d], rel, ell)
        arr = p if arr is None else kernels.conv_trunc(arr, p, rel, ell)
    return FormWithWeight(TruncatedSeries(offset, arr, ell), weight, spec.lcm)


def _as_mod(s: TruncatedSeries, ell: int) -> TruncatedSeries:
    if s.modulus is None:
        from .series import reduce_mod

        return reduce_mod(s, ell)
    if s.modulus != ell:
        raise ValueError(f"series is mod {s.modulus}, expected mod {ell}")
    return s


def theta_form(f: FormWithWeight, ell: int, precision: Optional[int] = None) -> FormWithWeight:
    """A weight-(k + ell + 1) form congruent to theta(f) mod ell.

    Built from f, E_2, E_(ell-1) and E_(ell+1) with the rational
    prefactor k/12 reduced mod ell. The q-expansion of the result is
    congruent to theta of f's expansion, which is what callers rely on.
    """
    if not _is_prime(ell) or ell < 5:
        raise ValueError("prime ell >= 5 required")
    fm = _as_mod(f.series, ell)
    if precision is None:
        precision = fm.precision
    k = f.weight
    k12 = residue_of_fraction(Fraction(k, 12), ell)
    e2 = eisenstein(2, precision, ell).series
    em1 = eisenstein(ell - 1, precision, ell).series
    ep1 = eisenstein(ell + 1, precision, ell).series
    inner = theta(fm) - scale(mul(e2, fm), k12)
    r = mul(inner, em1) + scale(mul(ep1, fm), k12)
    return FormWithWeight(r, k + ell + 1, f.level)
