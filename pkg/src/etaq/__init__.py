"""Exact q-series arithmetic for eta-type products.

Expands reciprocal eta-product generating functions, scans their
coefficients for Ramanujan-type congruences c(ell*n + a) = 0 mod ell,
and settles candidates with certificates or explicit counterexample
witnesses. Includes a level-1 modular-forms-mod-ell workbench
(Eisenstein series, filtrations, theta cycles) used by the
certification routes.
"""

__version__ = "0.1.0"

from .backend import active_backend, set_backend
from .congruence import (
    AuditEntry,
    AuditReport,
    Certificate,
    CongruenceCandidate,
    audit_prime_range,
    certify,
    classify_family,
    divisor_reduce,
    forced_residue,
    prime_bound,
    refute,
    scan,
)
from .eisenstein import (
    FormWithWeight,
    bernoulli,
    delta,
    delta_product_form,
    eisenstein,
    residue_of_fraction,
    theta_form,
)
from .errors import EtaqError, ModulusMismatchError, PrecisionError, SpecSyntaxError
from .filtration import ThetaCycleReport, filtration, level1_basis, theta_cycle
from .series import (
    ProductSpec,
    TruncatedSeries,
    ap_extract,
    dilate,
    euler_series,
    expand_product,
    mul,
    power,
    reduce_mod,
    scale,
    shift,
    theta,
    truncate,
    u_operator,
)

__all__ = [
    "__version__",
    "active_backend",
    "set_backend",
    "AuditEntry",
    "AuditReport",
    "Certificate",
    "CongruenceCandidate",
    "audit_prime_range",
    "certify",
    "classify_family",
    "divisor_reduce",
    "forced_residue",
    "prime_bound",
    "refute",
    "scan",
    "FormWithWeight",
    "bernoulli",
    "delta",
    "delta_product_form",
    "eisenstein",
    "residue_of_fraction",
    "theta_form",
    "EtaqError",
    "ModulusMismatchError",
    "PrecisionError",
    "SpecSyntaxError",
    "ThetaCycleReport",
    "filtration",
    "level1_basis",
    "theta_cycle",
    "ProductSpec",
    "TruncatedSeries",
    "ap_extract",
    "dilate",
    "euler_series",
    "expand_product",
    "mul",
    "power",
    "reduce_mod",
    "scale",
    "shift",
    "theta",
    "truncate",
    "u_operator",
]
