"""Search for the smallest lower-bound certificate at a given rho.

Inequalities in this module are the generator's own. :mod:`.verifier` replays
certificates through K-classes and traces and never calls into here.
"""

import math
from fractions import Fraction

from .._exact import parse_q
from ..exceptions import RhoTooLarge
from ..sequences import kappa_interval, seq_row
from .model import RcCertificate, system_id

__all__ = ["rc_lower_certificate", "certified_rho_supremum",
           "DEFAULT_TERMS", "DEFAULT_WINDOW"]

DEFAULT_TERMS = 40
DEFAULT_WINDOW = 10

# trace normalization relative to r(n): A_n uses M_r(n), B_n uses M_2r(n)
_SCALE = {"paper-a": 1, "paper-b": 2}


def certified_rho_supremum(system, terms=DEFAULT_TERMS):
    """Every rho strictly below this value admits a certificate."""
    system = system_id(system)
    return kappa_interval(terms).lower / _SCALE[system]


def rc_lower_certificate(system, rho, terms=DEFAULT_TERMS, window=DEFAULT_WINDOW):
    """Certificate that ``system`` does not have ``rho``-comparison.

    The stage ``n`` is the least one with ``1/r(n) < bound - rho``. ``M`` is the
    least integer with ``rho + 1/c < M/(c r(n)) < bound + 1/c``, where ``c`` is
    the trace normalization (1 for A, 2 for B) and ``bound`` is
    ``kappa_lb / c``.
    """
    system = system_id(system)
    rho = parse_q(rho)
    if rho < 0:
        raise ValueError(f"rho must be nonnegative, got {rho}")
    if window < 1:
        raise ValueError("window must contain at least one stage")
    kap = kappa_interval(terms)
    c = _SCALE[system]
    bound = kap.lower / c
    if rho >= bound:
        raise RhoTooLarge(
            f"rho={rho} is not below the certified bound {float(bound):.15g} "
            f"at terms={terms}"
        )
    n = 1
    while Fraction(1, seq_row(n).r) >= bound - rho:
        n += 1
    r = seq_row(n).r
    floor_lo = math.floor((c * rho + 1) * r)
    M = floor_lo + 1
    if not Fraction(M, c * r) < bound + Fraction(1, c):
        # unreachable: the open window has length > 1 once 1/r(n) < bound - rho
        raise RhoTooLarge(f"no admissible M at stage {n}")
    return RcCertificate(
        system=system,
        rho=rho,
        kappa_lb=kap.lower,
        kappa_ub=kap.upper,
        terms=terms,
        n=n,
        M=M,
        window=tuple(range(n + 1, n + 1 + window)),
    )
