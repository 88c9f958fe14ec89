"""Extreme tracial states ``tr_r (x) ev_x`` and the pairing ``d_tau`` on K-classes.

Each summand of a homogeneous stage contributes one family of extreme traces,
indexed by a point of its base space. Every class here has constant fiber
rank, so the point does not matter and one functional per summand suffices.
"""

from dataclasses import dataclass
from fractions import Fraction

from .exceptions import StageMismatch

__all__ = ["TraceFunctional", "extreme_traces", "d_tau", "d_tau_max", "d_tau_min"]


@dataclass(frozen=True)
class TraceFunctional:
    stage: int
    summand: int  # 0-based
    normalization: int  # matrix size of the stage

    def __post_init__(self):
        if self.normalization <= 0:
            raise ValueError("normalization must be positive")


def extreme_traces(x):
    """One extreme trace per summand of the stage ``x`` lives on."""
    return [
        TraceFunctional(x.stage, i, x.matrix_size) for i in range(len(x.classes))
    ]


def d_tau(x, tau):
    """Fiber rank on ``tau.summand`` divided by the matrix size, as an exact rational."""
    if tau.stage != x.stage:
        raise StageMismatch(f"trace at stage {tau.stage}, class at stage {x.stage}")
    if not 0 <= tau.summand < len(x.classes):
        raise StageMismatch(f"no summand {tau.summand} at stage {x.stage}")
    return Fraction(x.classes[tau.summand].rank, tau.normalization)


def d_tau_max(x):
    return max(d_tau(x, tau) for tau in extreme_traces(x))


def d_tau_min(x):
    return min(d_tau(x, tau) for tau in extreme_traces(x))
