"""Radius-of-comparison certificates: generation, replay, and interval bounds."""

from .bounds import corner_rc_interval, fixed_point_relation, niu_upper_bound, rc_interval
from .generator import (
    DEFAULT_TERMS,
    DEFAULT_WINDOW,
    certified_rho_supremum,
    rc_lower_certificate,
)
from .model import RcCertificate, RcInterval, system_id
from .verifier import verify_certificate

__all__ = [
    "DEFAULT_TERMS",
    "DEFAULT_WINDOW",
    "RcCertificate",
    "RcInterval",
    "certified_rho_supremum",
    "corner_rc_interval",
    "fixed_point_relation",
    "niu_upper_bound",
    "rc_interval",
    "rc_lower_certificate",
    "system_id",
    "verify_certificate",
]
