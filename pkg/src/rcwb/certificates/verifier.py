"""Independent replay of lower-bound certificates.

Nothing here imports :mod:`.generator`. Every inequality is restated in terms
of the symbolic system: a trivial class is pushed through the connecting maps,
traces are evaluated with :func:`rcwb.traces.d_tau`, and the embedding
question goes to :func:`rcwb.bundles.compare`.

Steps, each reported as pass/fail:

0. well-formedness (stage indices, window layout, tail flag)
i. kappa bounds equal the certified interval at ``terms``; rho is below the
   system's bound and stage ``n`` is deep enough
ii. for every window stage and every extreme trace, the pushed trivial class
    beats the target projection by more than rho
iii. for every window stage, the oracle refutes target <= pushed class with
     the Villadsen obstruction
iv. past the window: rank ratio below 1 + kappa_lb <= 1 + u(m), traces
    constant along the system
v. canonical form: n and M are the least admissible values
"""

from fractions import Fraction

from ..ah_system import (
    DiagonalSystemSpec,
    apply_connecting,
    canonical_p_prime,
    canonical_q,
    trivial_stage_class,
)
from ..bundles import NO, compare
from ..report import Report
from ..sequences import kappa_interval, seq_row
from ..traces import d_tau, d_tau_max, d_tau_min, extreme_traces
from .model import SYSTEMS

__all__ = ["verify_certificate"]

_TARGET = {"paper-a": canonical_p_prime, "paper-b": canonical_q}


def _target_value(system, n):
    # d_tau of the target is constant over traces (1 for p'_n, 1/2 for q_n)
    target = _TARGET[system](n)
    lo, hi = d_tau_min(target), d_tau_max(target)
    return lo if lo == hi else None


def _rho_admissible(rho, bound, n):
    return Fraction(1, seq_row(n).r) < bound - rho


def _M_gap(spec, system, n, M, rho, bound):
    """(above, below): trace of rank-M trivial class vs target + rho, target + bound."""
    e = trivial_stage_class(spec, n, M)
    t = _target_value(system, n)
    value = d_tau_min(e)
    return value > t + rho, d_tau_max(e) < t + bound


def verify_certificate(cert):
    report = Report(f"certificate {cert.system} rho={cert.rho}")
    system = str(cert.system).lower()

    # step 0
    if not report.add("system known", system in SYSTEMS, system):
        return report
    spec = DiagonalSystemSpec(system)
    ok = report.add("terms >= 1", cert.terms >= 1, str(cert.terms))
    ok &= report.add("stage n >= 1", cert.n >= 1, str(cert.n))
    ok &= report.add("M >= 0", cert.M >= 0, str(cert.M))
    window = list(cert.window)
    ok &= report.add(
        "window is n+1..n+k",
        bool(window) and window == list(range(cert.n + 1, cert.n + 1 + len(window))),
        str(window),
    )
    report.add("monotone tail applied", cert.monotone_tail is True)
    if not ok:
        return report

    # step i
    kap = kappa_interval(cert.terms)
    report.add("kappa_lb matches certified interval", cert.kappa_lb == kap.lower)
    report.add("kappa_ub matches certified interval", cert.kappa_ub == kap.upper)
    report.add("kappa_lb <= kappa_ub", cert.kappa_lb <= cert.kappa_ub)
    t_n = _target_value(system, cert.n)
    # bound on rho: kappa_lb scaled by the target's trace value (1 or 1/2)
    bound = cert.kappa_lb * t_n
    report.add("rho >= 0", cert.rho >= 0, str(cert.rho))
    report.add("rho below certified bound", cert.rho < bound,
               f"{float(cert.rho):.12g} < {float(bound):.12g}")
    report.add("1/r(n) < bound - rho", _rho_admissible(cert.rho, bound, cert.n))
    above, below = _M_gap(spec, system, cert.n, cert.M, cert.rho, bound)
    report.add("d_tau(e_n) > d_tau(target_n) + rho", above)
    report.add("d_tau(e_n) < d_tau(target_n) + bound", below)

    # step v
    if cert.n > 1:
        report.add("n is least admissible",
                   not _rho_admissible(cert.rho, bound, cert.n - 1))
    if cert.M > 0:
        prev_above, _ = _M_gap(spec, system, cert.n, cert.M - 1, cert.rho, bound)
        report.add("M is least admissible", not prev_above)

    # steps ii and iii
    e = trivial_stage_class(spec, cert.n, cert.M)
    e_trace = d_tau_min(e)
    r_n = seq_row(cert.n).r
    for m in window:
        while e.stage < m:
            e = apply_connecting(e, spec)
        target = _TARGET[system](m)
        expected_rank = cert.M * seq_row(m).r // r_n
        report.add(f"m={m} rank bookkeeping",
                   all(rk == expected_rank for rk in e.ranks),
                   f"{e.ranks[0]} == M*r(m)/r(n)")
        gap = all(d_tau(e, tau) > d_tau(target, tau) + cert.rho
                  for tau in extreme_traces(e))
        report.add(f"m={m} trace gap at every extreme trace", gap)
        report.add(f"m={m} trace of e constant", d_tau_max(e) == e_trace)
        verdicts = [compare(t, f) for t, f in zip(target.classes, e.classes)]
        refuted = all(v.verdict == NO and v.reason == "villadsen-obstruction"
                      for v in verdicts)
        report.add(f"m={m} target not below e", refuted,
                   ", ".join(f"{v.verdict}/{v.reason}" for v in verdicts))

    # step iv: rank(e_m) < r(m) + s(m) for all m > n follows from
    # M/r(n) < 1 + kappa_lb, kappa_lb <= kappa < u(m)
    ratio = Fraction(cert.M, r_n)
    report.add("tail: M/r(n) < 1 + kappa_lb", ratio < 1 + cert.kappa_lb)
    last = window[-1]
    decreasing = all(seq_row(m + 1).u < seq_row(m).u for m in range(cert.n, last))
    report.add("tail: u strictly decreasing through window", decreasing)
    report.add("tail: kappa_lb < u(m) at window end", cert.kappa_lb < seq_row(last).u)
    return report
