"""Level-1 modular forms mod ell: basis construction, filtration, theta cycles.

The filtration of a reduction f of a declared-weight form is found by a
downward scan over candidate weights k' = declared, declared-(ell-1), ...
Membership of f in the weight-k' space mod ell is decided by solving for
a monomial combination of E4 and E6 on the first floor(k'/12)+1
coefficients (the level-1 Sturm count) and then verifying the fit on
every remaining computed coefficient. Only fully verified fits count;
the scan stops at the first failing candidate.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .eisenstein import FormWithWeight, _as_mod, eisenstein, theta_form
from .errors import PrecisionError
from .series import TruncatedSeries, _is_prime, mul, theta

__all__ = ["level1_basis", "filtration", "theta_cycle", "ThetaCycleReport"]


def level1_basis(weight: int, precision: int, modulus: Optional[int] = None) -> list:
    """Monomials E4^a E6^b with 4a + 6b = weight, as q-expansions.

    Spans the weight-k level-1 space. Ordered by increasing power of E6.
    """
    if weight < 0 or weight % 2:
        raise ValueError(f"weight must be even and nonnegative, got {weight}")
    if weight == 0:
        return [TruncatedSeries.one(precision, modulus)]
    e4 = eisenstein(4, precision, modulus).series
    e6 = eisenstein(6, precision, modulus).series
    out = []
    for b in range(weight // 6 + 1):
        rem = weight - 6 * b
        if rem % 4:
            continue
        a = rem // 4
        term = TruncatedSeries.one(precision, modulus)
        for _ in range(a):
            term = mul(term, e4)
        for _ in range(b):
            term = mul(term, e6)
        out.append(term)
    return out


def _solve_mod(rows: list, rhs: list, ell: int) -> Optional[list]:
    """Particular solution of rows*x = rhs over Z/ell, or None if inconsistent."""
    m = len(rows)
    ncols = len(rows[0]) if m else 0
    aug = [[rows[i][j] % ell for j in range(ncols)] + [rhs[i] % ell] for i in range(m)]
    piv_cols = []
    r = 0
    for c in range(ncols):
        pr = next((i for i in range(r, m) if aug[i][c] % ell), None)
        if pr is None:
            continue
        aug[r], aug[pr] = aug[pr], aug[r]
        inv = pow(aug[r][c], -1, ell)
        aug[r] = [(v * inv) % ell for v in aug[r]]
        for i in range(m):
            if i != r and aug[i][c]:
                f = aug[i][c]
                aug[i] = [(vi - f * vr) % ell for vi, vr in zip(aug[i], aug[r])]
        piv_cols.append(c)
        r += 1
    for i in range(r, m):
        if aug[i][ncols] % ell:
            return None
    x = [0] * ncols
    for i, c in enumerate(piv_cols):
        x[c] = aug[i][ncols]
    return x


def _member(fm: TruncatedSeries, k: int, ell: int, e4: TruncatedSeries, e6: TruncatedSeries) -> bool:
    if k % 2:
        return False
    prec = fm.precision
    # monomial exponent pairs (a, b) with 4a + 6b = k
    pairs = []
    for b in range(k // 6 + 1):
        rem = k - 6 * b
        if rem % 4 == 0:
            pairs.append((rem // 4, b))
    if k == 0:
        pairs = [(0, 0)]
    if not pairs:
        return False
    max_a = max(a for a, _ in pairs)
    max_b = max(b for _, b in pairs)
    pow4 = [TruncatedSeries.one(prec, ell)]
    for _ in range(max_a):
        pow4.append(mul(pow4[-1], e4))
    pow6 = [TruncatedSeries.one(prec, ell)]
    for _ in range(max_b):
        pow6.append(mul(pow6[-1], e6))
    basis = [mul(pow4[a], pow6[b]) for a, b in pairs]
    m = k // 12 + 1  # level-1 Sturm coefficient count
    if prec < m:
        raise PrecisionError(f"need {m} coefficients for the weight-{k} membership test")
    rows = [[basis[j].coeff(n) for j in range(len(basis))] for n in range(m)]
    rhs = [fm.coeff(n) for n in range(m)]
    x = _solve_mod(rows, rhs, ell)
    if x is None:
        return False
    lo = min(fm.offset, 0)
    for n in range(lo, prec):
        acc = 0
        for j, xj in enumerate(x):
            if xj:
                acc += xj * basis[j].coeff(n)
        if acc % ell != fm.coeff(n) % ell:
            return False
    return True


def filtration(f: TruncatedSeries, declared_weight: int, ell: int) -> int:
    """Least weight k' <= declared_weight, k' = declared mod (ell-1), in whose
    level-1 space f lies mod ell.

    f must be (the reduction of) a form of the declared weight; if no
    candidate matches, the input was not such a reduction and this raises.
    """
    if not _is_prime(ell) or ell < 5:
        raise ValueError("prime ell >= 5 required")
    if declared_weight < 0:
        raise ValueError("declared weight must be nonnegative")
    fm = _as_mod(f, ell)
    if fm.is_zero():
        raise ValueError("filtration of the zero series is undefined")
    if fm.precision < declared_weight // 12 + 2:
        raise PrecisionError(
            f"filtration at declared weight {declared_weight} needs precision "
            f">= {declared_weight // 12 + 2}, have {fm.precision}"
        )
    e4 = eisenstein(4, fm.precision, ell).series
    e6 = eisenstein(6, fm.precision, ell).series
    last_pass = None
    k = declared_weight
    while k >= 0:
        if _member(fm, k, ell, e4, e6):
            last_pass = k
            k -= ell - 1
        else:
            break
    if last_pass is None:
        raise ValueError(
            f"no candidate weight matches: input is not a level-1 reduction "
            f"of declared weight {declared_weight} mod {ell}"
        )
    return last_pass


@dataclass(frozen=True)
class ThetaCycleReport:
    """Filtration walk of f, theta f, ..., theta^(ell-1) f with drop bookkeeping.

    filtrations[i] is the filtration of theta^i f at declared weight
    weight + i*(ell+1). Drops happen after indices where the filtration
    is divisible by ell; drops[j] is the step size divided by (ell-1).
    """

    ell: int
    weight: int
    filtrations: tuple
    k0: int
    case_label: str  # "I", "II", "III", "IV", or "none"
    drop_indices: tuple
    drops: tuple
    stable: bool


def theta_cycle(f: TruncatedSeries, declared_weight: int, ell: int) -> ThetaCycleReport:
    """Walk the theta cycle of f mod ell and classify its shape.

    Each step replaces the current form by a weight-raised form congruent
    to its theta image, so declared weights advance by ell + 1.
    """
    if not _is_prime(ell) or ell < 5:
        raise ValueError("prime ell >= 5 required")
    fm = _as_mod(f, ell)
    max_decl = declared_weight + (ell - 1) * (ell + 1)
    need = max_decl // 12 + 2
    if fm.precision < need:
        raise PrecisionError(
            f"theta cycle at weight {declared_weight} mod {ell} needs precision "
            f">= {need}, have {fm.precision}"
        )
    if theta(fm).is_zero():
        raise ValueError("theta image vanishes mod ell; the cycle is degenerate")
    ws = []
    g = fm
    decl = declared_weight
    for i in range(ell):
        ws.append(filtration(g, decl, ell))
        if i < ell - 1:
            g = theta_form(FormWithWeight(g, decl, 1), ell).series
            decl += ell + 1
    wnext = ws[1]  # theta^ell agrees with theta mod ell
    drop_indices = tuple(i for i in range(ell) if ws[i] % ell == 0)
    drops = []
    for i in drop_indices:
        nxt = ws[i + 1] if i + 1 < ell else wnext
        num = ws[i] + ell + 1 - nxt
        s, r = divmod(num, ell - 1)
        if r:
            raise ArithmeticError("drop size not a multiple of ell - 1")
        drops.append(s)
    drops = tuple(drops)
    k = ws[0]
    k0 = (-k) % ell
    v = len(drop_indices)
    case = "none"
    if v == 1 and k % ell == 1 and drop_indices == (ell - 1,) and drops == (ell + 1,):
        case = "I"
    elif v == 1 and k % ell == 2 and drop_indices == (ell - 2,) and drops == (ell + 1,):
        case = "II"
    elif (
        v == 2
        and k % ell != 1
        and drop_indices == (k0, ell - 1)
        and drops == (k0 + 1, ell - k0)
    ):
        case = "III"
    elif (
        v == 2
        and k % ell != 1
        and drop_indices == (k0, ell - 2)
        and drops == (k0 + 2, ell - k0 - 1)
    ):
        case = "IV"
    return ThetaCycleReport(
        ell=ell,
        weight=declared_weight,
        filtrations=tuple(ws),
        k0=k0,
        case_label=case,
        drop_indices=drop_indices,
        drops=drops,
        stable=ws[0] == ws[ell - 1],
    )
