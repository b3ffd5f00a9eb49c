"""Detection, certification, and refutation of Ramanujan-type congruences.

A candidate congruence for a product spec is a pair (ell, a) with
c(ell*n + a) = 0 mod ell for every n. Candidates are found empirically
by scanning, then settled by one of three routes, tried in order:

1. divisor reduction: factors whose scale is divisible by ell contribute
   only exponents divisible by ell, so they can be removed without
   changing which progressions vanish mod ell. If the residual spec is
   the one-factor partition generating function, the classical
   classification of its congruences (Ahlgren-Boylan) settles the pair.
   Other residuals recurse.
2. Sturm-bounded theta fixpoint: for ell coprime to every scale and
   large relative to the part count, a congruence forces a unique
   residue a; for that residue the congruence is equivalent to
   theta^(ell-1) fixing an auxiliary product form, checked coefficient
   by coefficient up to a Sturm bound. Equality certifies; a mismatch
   refutes, and the refutation witness is re-derived in coefficient
   space so it can be checked directly against the expansion.
3. empirical scan to a horizon, which refutes (least witness) or
   reports EmpiricalOnly.

Scanning work items over (ell, a) are independent of each other and can
be processed in any order.
"""
from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Iterable, Optional

import numpy as np

from .errors import PrecisionError
from .series import ProductSpec, TruncatedSeries, _is_prime, expand_product
from .eisenstein import delta_product_form
from .series import theta as theta_op

__all__ = [
    "CongruenceCandidate",
    "Certificate",
    "AuditEntry",
    "AuditReport",
    "prime_bound",
    "scan",
    "forced_residue",
    "refute",
    "divisor_reduce",
    "certify",
    "classify_family",
    "audit_prime_range",
    "DEFAULT_SCAN_HORIZON",
    "DEFAULT_REFUTE_HORIZON",
]

DEFAULT_SCAN_HORIZON = 10_000
DEFAULT_REFUTE_HORIZON = 100_000

MIN_SAMPLES_PER_PRIME = 50

STATUS_EMPIRICAL = "empirical"
STATUS_CERTIFIED = "certified"
STATUS_REFUTED = "refuted"

ROUTE_DIVISOR = "divisor_reduction"
ROUTE_STURM = "sturm_theta_fixpoint"
ROUTE_EMPIRICAL = "empirical_only"
ROUTE_REFUTED = "refuted"

# The complete list of (ell, a) for which the one-factor partition series
# has a congruence (Ahlgren-Boylan); taken as an external axiom.
PARTITION_CONGRUENCES = frozenset({(5, 4), (7, 5), (11, 6)})


@dataclass(frozen=True)
class CongruenceCandidate:
    """A congruence claim c(ell*n + a) = 0 mod ell with its current status."""

    ell: int
    a: int
    horizon: int
    status: str = STATUS_EMPIRICAL


@dataclass(frozen=True)
class Certificate:
    """Outcome of certify/refute for one (ell, a) pair.

    witness is (n, residue) with residue = c(ell*n + a) mod ell != 0 and
    is present exactly when route == "refuted". product_residue is the
    progression residue b on the product-form side, satisfying
    24*a = 24*b + sum(parts) mod ell when present. delta_exponent is
    (ell^2 - 1)/24 when that is an integer (ell > 3).
    """

    route: str
    ell: int
    a: int
    witness: Optional[tuple] = None
    sturm_bound: Optional[int] = None
    product_residue: Optional[int] = None
    delta_exponent: Optional[int] = None
    horizon: Optional[int] = None
    reduced_to: Optional[str] = None

    @property
    def certified(self) -> bool:
        return self.route in (ROUTE_DIVISOR, ROUTE_STURM)


@dataclass(frozen=True)
class AuditEntry:
    ell: int
    forced: int
    witnesses: tuple  # (a, n, residue) triples, sorted by a
    anomalies: tuple  # residues a with no witness below the horizon


@dataclass(frozen=True)
class AuditReport:
    spec: str
    horizon: int
    bound: int
    entries: tuple

    @property
    def anomaly_count(self) -> int:
        return sum(len(e.anomalies) for e in self.entries)


def _primes_up_to(n: int) -> list:
    return [p for p in range(2, n + 1) if _is_prime(p)]


def _prime_divisors(n: int) -> list:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def prime_bound(spec: ProductSpec, cap: Optional[int] = None) -> set:
    """Primes that could carry a congruence for this spec.

    For an all-negative spec with an even number of parts the set
    {p dividing lcm} union {p <= max(5, j + 4)} is exhaustive. Other
    specs need an explicit cap and the result is not exhaustive.
    """
    divisors = set(_prime_divisors(spec.lcm))
    if spec.is_reciprocal and spec.part_count % 2 == 0:
        return divisors | set(_primes_up_to(max(5, spec.part_count + 4)))
    if cap is None:
        raise ValueError(
            "exhaustive prime bound only exists for all-negative specs with an "
            "even number of parts; pass an explicit cap"
        )
    return divisors | set(_primes_up_to(cap))


def _mod_coeffs(spec: ProductSpec, ell: int, horizon: int) -> np.ndarray:
    return np.asarray(expand_product(spec, horizon, ell).coeffs)


def scan(spec: ProductSpec, horizon: int, primes: Optional[Iterable] = None) -> list:
    """Empirical congruence candidates (ell, a) with every progression entry
    below the horizon vanishing mod ell."""
    ps = sorted(primes) if primes is not None else sorted(prime_bound(spec))
    for ell in ps:
        if not _is_prime(ell):
            raise ValueError(f"scan prime {ell} is not prime")
        if horizon < MIN_SAMPLES_PER_PRIME * ell:
            raise ValueError(
                f"horizon {horizon} too small for prime {ell}; need >= "
                f"{MIN_SAMPLES_PER_PRIME * ell}"
            )
    out = []
    for ell in ps:
        arr = _mod_coeffs(spec, ell, horizon)
        for a in range(ell):
            if not arr[a::ell].any():
                out.append(CongruenceCandidate(ell, a, horizon, STATUS_EMPIRICAL))
    return out


def forced_residue(spec: ProductSpec, ell: int) -> int:
    """The only residue a that a congruence mod ell can occupy, from
    24*a = sum(parts) mod ell. Defined for ell coprime to the lcm with
    ell > max(5, j + 3)."""
    if not _is_prime(ell):
        raise ValueError(f"{ell} is not prime")
    if not spec.is_reciprocal:
        raise ValueError("forced residue needs an all-negative spec")
    j = spec.part_count
    if ell <= max(5, j + 3):
        raise ValueError(f"need ell > max(5, j + 3) = {max(5, j + 3)}, got {ell}")
    if spec.lcm % ell == 0:
        raise ValueError(f"ell = {ell} divides the spec lcm {spec.lcm}")
    return sum(spec.parts()) * pow(24, -1, ell) % ell


def _first_witness(spec: ProductSpec, ell: int, a: int, horizon: int) -> Optional[tuple]:
    """Least n with c(ell*n + a) != 0 mod ell and ell*n + a < horizon, as
    (n, residue); None when the whole window vanishes."""
    p = min(horizon, 1024)
    while True:
        arr = _mod_coeffs(spec, ell, p)
        prog = arr[a::ell]
        nz = np.nonzero(prog)[0]
        if nz.size:
            n = int(nz[0])
            return n, int(prog[n])
        if p >= horizon:
            return None
        p = min(horizon, p * 4)


def refute(spec: ProductSpec, ell: int, a: int, horizon: int = DEFAULT_REFUTE_HORIZON) -> Certificate:
    """Search for the least witness against c(ell*n + a) = 0 mod ell."""
    if not _is_prime(ell):
        raise ValueError(f"{ell} is not prime")
    if not 0 <= a < ell:
        raise ValueError(f"residue {a} out of range [0, {ell})")
    dexp = (ell * ell - 1) // 24 if ell > 3 else None
    w = _first_witness(spec, ell, a, horizon)
    if w is not None:
        return Certificate(ROUTE_REFUTED, ell, a, witness=w, delta_exponent=dexp)
    return Certificate(ROUTE_EMPIRICAL, ell, a, delta_exponent=dexp, horizon=horizon)


def divisor_reduce(spec: ProductSpec, ell: int) -> ProductSpec:
    """Remove factors whose scale is divisible by ell.

    Those factors only involve exponents divisible by ell and have
    constant term 1, so congruences (ell, a) hold for the input iff they
    hold for the output.
    """
    if not _is_prime(ell):
        raise ValueError(f"{ell} is not prime")
    removed = [(d, e) for d, e in spec.factors if d % ell == 0]
    if not removed:
        raise ValueError(f"no factor scale is divisible by {ell}")
    return ProductSpec([(d, e) for d, e in spec.factors if d % ell])


def _mu_index(n: int) -> int:
    """n^2 prod_{p | n} (1 - 1/p^2), an integer (a subgroup index)."""
    out = n * n
    for p in _prime_divisors(n):
        out = out // (p * p) * (p * p - 1)
    return out


def _sturm_coeff_count(spec: ProductSpec, ell: int) -> int:
    j = spec.part_count
    weight_f = j * (ell * ell - 1) // 2
    mu = _mu_index(spec.lcm)
    num = (weight_f + ell * ell - 1) * mu
    return -(-num // 12) + 1  # ceil + 1


def certify(spec: ProductSpec, ell: int, a: int, horizon: int = DEFAULT_REFUTE_HORIZON) -> Certificate:
    """Settle the congruence claim (ell, a) for the spec.

    Routes, in order: divisor reduction, Sturm-bounded theta fixpoint,
    empirical scan. See the module docstring.
    """
    if not _is_prime(ell):
        raise ValueError(f"{ell} is not prime")
    if not 0 <= a < ell:
        raise ValueError(f"residue {a} out of range [0, {ell})")
    dexp = (ell * ell - 1) // 24 if ell > 3 else None

    if any(d % ell == 0 for d, _ in spec.factors):
        reduced = divisor_reduce(spec, ell)
        rstr = str(reduced) if reduced.factors else "(empty)"
        if reduced.factors == ((1, -1),):
            if (ell, a) in PARTITION_CONGRUENCES:
                return Certificate(
                    ROUTE_DIVISOR, ell, a, delta_exponent=dexp, reduced_to=rstr
                )
            w = _first_witness(spec, ell, a, horizon)
            if w is None:
                raise PrecisionError(
                    f"({ell}, {a}) is refutable after reduction to the partition "
                    f"series, but no witness appeared below horizon {horizon}"
                )
            return Certificate(
                ROUTE_REFUTED, ell, a, witness=w, delta_exponent=dexp, reduced_to=rstr
            )
        if not reduced.factors:
            # the residual series is the constant 1
            if a != 0:
                return Certificate(
                    ROUTE_DIVISOR, ell, a, delta_exponent=dexp, reduced_to=rstr
                )
            return Certificate(
                ROUTE_REFUTED, ell, a, witness=(0, 1), delta_exponent=dexp, reduced_to=rstr
            )
        inner = certify(reduced, ell, a, horizon)
        if inner.route == ROUTE_REFUTED:
            w = _first_witness(spec, ell, a, horizon)
            if w is None:
                raise PrecisionError(
                    f"({ell}, {a}) refuted on the reduced spec {rstr} but no "
                    f"witness appeared on the original below horizon {horizon}"
                )
            return Certificate(
                ROUTE_REFUTED, ell, a, witness=w, delta_exponent=dexp, reduced_to=rstr
            )
        if inner.certified:
            return Certificate(
                ROUTE_DIVISOR,
                ell,
                a,
                sturm_bound=inner.sturm_bound,
                product_residue=inner.product_residue,
                delta_exponent=dexp,
                reduced_to=rstr,
            )
        return Certificate(
            ROUTE_EMPIRICAL, ell, a, delta_exponent=dexp, horizon=horizon, reduced_to=rstr
        )

    j_even = spec.is_reciprocal and spec.part_count % 2 == 0
    if (
        j_even
        and spec.lcm % ell != 0
        and ell > max(5, spec.part_count + 3)
    ):
        forced = forced_residue(spec, ell)
        b = (a - forced) % ell
        if a != forced:
            w = _first_witness(spec, ell, a, horizon)
            if w is None:
                raise PrecisionError(
                    f"({ell}, {a}) is off the forced residue {forced} and must "
                    f"have a witness, but none appeared below horizon {horizon}"
                )
            return Certificate(
                ROUTE_REFUTED, ell, a, witness=w, product_residue=b, delta_exponent=dexp
            )
        bound = _sturm_coeff_count(spec, ell)
        form = delta_product_form(spec, ell, bound)
        g = form.series
        for _ in range(ell - 1):
            g = theta_op(g)
        lo = 0
        mismatch = None
        for n in range(lo, bound):
            if g.coeff(n) != form.series.coeff(n):
                mismatch = n
                break
        if mismatch is None:
            return Certificate(
                ROUTE_STURM,
                ell,
                a,
                sturm_bound=bound,
                product_residue=0,
                delta_exponent=dexp,
            )
        w = _first_witness(spec, ell, a, horizon)
        if w is None:
            raise PrecisionError(
                f"theta fixpoint fails at exponent {mismatch} so ({ell}, {a}) is "
                f"false, but no coefficient witness appeared below horizon {horizon}"
            )
        return Certificate(
            ROUTE_REFUTED,
            ell,
            a,
            witness=w,
            sturm_bound=bound,
            product_residue=0,
            delta_exponent=dexp,
        )

    w = _first_witness(spec, ell, a, horizon)
    if w is not None:
        return Certificate(ROUTE_REFUTED, ell, a, witness=w, delta_exponent=dexp)
    return Certificate(ROUTE_EMPIRICAL, ell, a, delta_exponent=dexp, horizon=horizon)


def _status_of(cert: Certificate) -> str:
    if cert.certified:
        return STATUS_CERTIFIED
    if cert.route == ROUTE_REFUTED:
        return STATUS_REFUTED
    return STATUS_EMPIRICAL


def classify_family(n_from: int, n_to: int, horizon: int = DEFAULT_SCAN_HORIZON) -> list:
    """Scan and settle congruences for the two-factor family 1^-1 N^-1.

    Returns (N, candidates) pairs where each scan survivor carries its
    post-certification status.
    """
    if n_from < 2:
        raise ValueError("family parameter N starts at 2")
    if n_to < n_from:
        raise ValueError("empty family range")
    out = []
    for n in range(n_from, n_to + 1):
        spec = ProductSpec([(1, -1), (n, -1)])
        cands = scan(spec, horizon)
        settled = []
        for c in cands:
            cert = certify(spec, c.ell, c.a, horizon)
            settled.append(replace(c, status=_status_of(cert)))
        out.append((n, tuple(settled)))
    return out


def audit_prime_range(
    spec: ProductSpec,
    p_min: int,
    p_max: int,
    horizon: int = DEFAULT_REFUTE_HORIZON,
) -> AuditReport:
    """Refute every residue class for every prime in [p_min, p_max] that is
    coprime to the lcm and above the congruence bound.

    Primes at or below max(5, j + 4), or dividing the lcm, are skipped:
    congruences may genuinely live there. Residues with no witness below
    the horizon are reported as anomalies (none are expected).
    """
    if not (spec.is_reciprocal and spec.part_count % 2 == 0):
        raise ValueError("audit needs an all-negative spec with an even part count")
    bound = max(5, spec.part_count + 4)
    entries = []
    for ell in _primes_up_to(p_max):
        if ell < p_min or ell <= bound or spec.lcm % ell == 0:
            continue
        forced = forced_residue(spec, ell)
        p = min(horizon, 2048)
        found: dict = {}
        while True:
            arr = _mod_coeffs(spec, ell, p)
            for a in range(ell):
                if a in found:
                    continue
                prog = arr[a::ell]
                nz = np.nonzero(prog)[0]
                if nz.size:
                    found[a] = (int(nz[0]), int(prog[nz[0]]))
            if len(found) == ell or p >= horizon:
                break
            p = min(horizon, p * 4)
        witnesses = tuple((a, found[a][0], found[a][1]) for a in sorted(found))
        anomalies = tuple(a for a in range(ell) if a not in found)
        entries.append(AuditEntry(ell, forced, witnesses, anomalies))
    return AuditReport(str(spec), horizon, bound, tuple(entries))
