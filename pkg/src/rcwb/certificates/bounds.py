"""Upper bounds from mean dimension and interval transport through corners."""

from fractions import Fraction

from ..ah_system import DiagonalSystemSpec
from ..exceptions import BadRange, Divergent
from .generator import DEFAULT_TERMS, certified_rho_supremum
from .model import RcInterval, system_id

__all__ = ["niu_upper_bound", "corner_rc_interval", "fixed_point_relation",
           "rc_interval"]


def _dim_ratio(shape):
    # each S^2 factor contributes 2 to the covering dimension
    return max((Fraction(2 * k, shape.matrix_size) for k in shape.coords),
               default=Fraction(0))


def niu_upper_bound(spec, terms=DEFAULT_TERMS, tail=8):
    """``rc <= gamma / 2`` with gamma bounded by the limit of max dim/size.

    The ratio at stage ``N = terms`` bounds the limit from above once the
    ratios are non-increasing from ``N`` on. For the presets this holds
    because ``u`` decreases. Custom (finite) systems use their last listed
    stage and must be non-increasing over the final ``tail`` stages.
    """
    if not isinstance(spec, DiagonalSystemSpec):
        spec = DiagonalSystemSpec.load(spec)
    if terms < 0:
        raise ValueError("terms must be >= 0")
    N = terms if spec.last_stage is None else min(terms, spec.last_stage)
    ratios = [_dim_ratio(spec.stage(n)) for n in range(max(0, N - tail), N + 1)]
    if any(b > a for a, b in zip(ratios, ratios[1:])):
        raise Divergent(
            f"dim/size ratios increase near stage {N}: "
            + ", ".join(f"{float(x):.6g}" for x in ratios)
        )
    return RcInterval(0, ratios[-1] / 2, ("niu-mean-dimension",))


def corner_rc_interval(rc, lam, eta):
    """Transport an rc interval to a corner ``p M_n(A) p``.

    ``lam`` and ``eta`` are the infimum and supremum of the trace of ``p``:
    ``rc(A)/eta <= rc(corner) <= rc(A)/lam``.
    """
    lam, eta = Fraction(lam), Fraction(eta)
    if lam <= 0 or lam > eta:
        raise BadRange(f"need 0 < lambda <= eta, got lambda={lam}, eta={eta}")
    return RcInterval(rc.lower / eta, rc.upper / lam,
                      rc.provenance + (f"corner[{lam},{eta}]",))


def fixed_point_relation(rc_crossed, group_order):
    """rc of the fixed-point algebra from rc of the crossed product.

    The fixed-point algebra is the corner cut by the averaging projection,
    whose trace is ``1/|G|`` everywhere.
    """
    if group_order < 1:
        raise ValueError("group order must be >= 1")
    w = Fraction(1, group_order)
    return corner_rc_interval(rc_crossed, w, w)


def rc_interval(system, terms=DEFAULT_TERMS):
    """Bracket rc: lower from certificates, upper from mean dimension."""
    system = system_id(system)
    lower = certified_rho_supremum(system, terms)
    upper = niu_upper_bound(DiagonalSystemSpec(system), terms).upper
    return RcInterval(lower, upper, ("lower-certificates", "niu-mean-dimension"))
