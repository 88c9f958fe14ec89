"""Certificate and interval value types with their JSON wire format."""

import json
from dataclasses import dataclass, field
from fractions import Fraction

from .._exact import fmt_q, parse_q
from ..exceptions import BadRange

__all__ = ["RcCertificate", "RcInterval", "system_id", "SYSTEMS"]

SYSTEMS = ("paper-a", "paper-b")


def system_id(name):
    key = str(name).strip().lower()
    if key in ("a", "b"):
        key = "paper-" + key
    if key not in SYSTEMS:
        raise ValueError(f"unknown system {name!r}; expected one of {SYSTEMS}")
    return key


@dataclass(frozen=True)
class RcCertificate:
    """Replayable witness that a system does not have rho-comparison.

    ``M`` is the rank of a trivial projection at stage ``n``; ``window`` lists
    the later stages replayed explicitly. ``monotone_tail`` records that
    stages past the window are covered by u(m) decreasing to kappa.
    """

    system: str
    rho: Fraction
    kappa_lb: Fraction
    kappa_ub: Fraction
    terms: int
    n: int
    M: int
    window: tuple
    monotone_tail: bool = True

    def __post_init__(self):
        object.__setattr__(self, "rho", Fraction(self.rho))
        object.__setattr__(self, "kappa_lb", Fraction(self.kappa_lb))
        object.__setattr__(self, "kappa_ub", Fraction(self.kappa_ub))
        object.__setattr__(self, "window", tuple(int(m) for m in self.window))

    def to_dict(self):
        return {
            "system": self.system,
            "rho": fmt_q(self.rho),
            "kappa_lb": fmt_q(self.kappa_lb),
            "kappa_ub": fmt_q(self.kappa_ub),
            "terms": self.terms,
            "n": self.n,
            "M": self.M,
            "window": list(self.window),
        }

    def to_json(self, **kwargs):
        return json.dumps(self.to_dict(), **kwargs)

    @classmethod
    def from_dict(cls, data):
        return cls(
            system=str(data["system"]),
            rho=parse_q(data["rho"]),
            kappa_lb=parse_q(data["kappa_lb"]),
            kappa_ub=parse_q(data["kappa_ub"]),
            terms=int(data["terms"]),
            n=int(data["n"]),
            M=int(data["M"]),
            window=tuple(int(m) for m in data["window"]),
        )

    @classmethod
    def from_json(cls, text):
        return cls.from_dict(json.loads(text))


@dataclass(frozen=True)
class RcInterval:
    lower: Fraction
    upper: Fraction
    provenance: tuple = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "lower", Fraction(self.lower))
        object.__setattr__(self, "upper", Fraction(self.upper))
        object.__setattr__(self, "provenance", tuple(self.provenance))
        if self.lower > self.upper:
            raise BadRange(f"empty interval [{self.lower}, {self.upper}]")

    def same_bounds(self, other):
        return (self.lower, self.upper) == (other.lower, other.upper)

    def within(self, lower, upper):
        return lower <= self.lower and self.upper <= upper

    def to_dict(self):
        return {
            "lower": fmt_q(self.lower),
            "upper": fmt_q(self.upper),
            "provenance": list(self.provenance),
        }

    @classmethod
    def from_dict(cls, data):
        return cls(parse_q(data["lower"]), parse_q(data["upper"]),
                   tuple(data.get("provenance", ())))
