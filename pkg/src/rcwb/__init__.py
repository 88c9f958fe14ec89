"""Exact radius-of-comparison bookkeeping for a Z/2-flip AH system over (S^2)^k."""

from .sequences import seq_table, kappa_interval, rank_recursion_identities
from .bundles import KClass, compare, direct_sum, min_dominating_trivial_rank
from .ah_system import (
    DiagonalSystemSpec,
    StageClassPair,
    apply_connecting,
    apply_flip,
    canonical_p,
    canonical_p_prime,
    canonical_q,
    iterate_and_check,
)
from .traces import TraceFunctional, d_tau, d_tau_max, d_tau_min
from .certificates import (
    RcCertificate,
    RcInterval,
    corner_rc_interval,
    fixed_point_relation,
    niu_upper_bound,
    rc_interval,
    rc_lower_certificate,
    verify_certificate,
)

__version__ = "0.1.0"

__all__ = [
    "seq_table",
    "kappa_interval",
    "rank_recursion_identities",
    "KClass",
    "compare",
    "direct_sum",
    "min_dominating_trivial_rank",
    "DiagonalSystemSpec",
    "StageClassPair",
    "apply_connecting",
    "apply_flip",
    "canonical_p",
    "canonical_p_prime",
    "canonical_q",
    "iterate_and_check",
    "TraceFunctional",
    "d_tau",
    "d_tau_max",
    "d_tau_min",
    "RcCertificate",
    "RcInterval",
    "corner_rc_interval",
    "fixed_point_relation",
    "niu_upper_bound",
    "rc_interval",
    "rc_lower_certificate",
    "verify_certificate",
]
