"""Shared oracles and generators for the test suite.

Oracles here deliberately use different algorithms from the library:
partition counts come from the bounded-largest-part recursion, sigma
from direct divisor enumeration, Bernoulli numbers from the
Akiyama-Tanigawa scheme, and the discriminant form from literal
polynomial multiplication of its product factors.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

from etaq import ProductSpec, TruncatedSeries


@lru_cache(maxsize=None)
def partition_count(n: int, largest: int) -> int:
    """Partitions of n into parts of size <= largest, by direct recursion."""
    if n == 0:
        return 1
    if n < 0 or largest == 0:
        return 0
    return partition_count(n - largest, largest) + partition_count(n, largest - 1)


def partitions_upto(limit: int) -> list:
    return [partition_count(n, n if n else 1) for n in range(limit + 1)]


def two_color_upto(limit: int) -> list:
    """Coefficients of 1/(prod (1-q^n)(1-q^(2n))): second color on even exponents."""
    p = partitions_upto(limit)
    out = []
    for n in range(limit + 1):
        out.append(sum(p[n - 2 * m] * p[m] for m in range(n // 2 + 1)))
    return out


def sigma_direct(power: int, n: int) -> int:
    return sum(d ** power for d in range(1, n + 1) if n % d == 0)


def bernoulli_at(m: int) -> Fraction:
    """Akiyama-Tanigawa scheme; yields the B_1 = +1/2 convention, which
    agrees with the convolution recurrence at every even index."""
    row = [Fraction(1, k + 1) for k in range(m + 1)]
    for i in range(1, m + 1):
        for k in range(m - i + 1):
            row[k] = (k + 1) * (row[k] - row[k + 1])
    return row[0]


def poly_mul_trunc(a: list, b: list, n: int) -> list:
    out = [0] * n
    for i, ai in enumerate(a[:n]):
        if ai == 0:
            continue
        for j, bj in enumerate(b[: n - i]):
            if bj:
                out[i + j] += ai * bj
    return out


def delta_coeffs_direct(limit: int) -> list:
    """q prod_{n<=limit}(1 - q^n)^24 by literal polynomial multiplication,
    coefficients of q^0 .. q^limit."""
    n = limit  # truncation level for the product part
    acc = [1] + [0] * (n - 1)
    for m in range(1, n):
        factor = [0] * (m + 1)
        factor[0] = 1
        factor[m] = -1
        acc = poly_mul_trunc(acc, factor, n)
    prod24 = [1] + [0] * (n - 1)
    for _ in range(24):
        prod24 = poly_mul_trunc(prod24, acc, n)
    return [0] + prod24[: limit]


def random_spec(rng, max_factors: int = 3, max_scale: int = 6, max_abs_exp: int = 3) -> ProductSpec:
    k = rng.randint(1, max_factors)
    pairs = []
    for _ in range(k):
        d = rng.randint(1, max_scale)
        e = rng.choice([x for x in range(-max_abs_exp, max_abs_exp + 1) if x])
        pairs.append((d, e))
    return ProductSpec(pairs)


def random_series(rng, length: int, modulus=None, offset_range=(-3, 3), unit_lead=False) -> TruncatedSeries:
    off = rng.randint(*offset_range)
    hi = modulus if modulus else 9
    data = [rng.randrange(-4, hi) for _ in range(length)]
    if unit_lead:
        data[0] = 1 if modulus else rng.choice([1, -1])
    return TruncatedSeries(off, data, modulus)
