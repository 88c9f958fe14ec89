"""Acceptance criteria, one test each, at the stated tolerances and time limits.

Every criterion prints one ``PASS``/``FAIL`` line; the lines are repeated in
the pytest terminal summary. ``python3 tests/test_acceptance.py`` runs the
same checks without pytest.
"""

import dataclasses
import math
import random
import sys
import time
from decimal import Decimal
from fractions import Fraction

import mpmath
import numpy as np
import pytest

from rcwb.ah_system import (
    DiagonalSystemSpec,
    StageClassPair,
    canonical_p,
    canonical_p_prime,
    canonical_q,
    iterate_and_check,
)
from rcwb.bundles import YES, IndexSet, KClass, no_rule, yes_rule
from rcwb.certificates import (
    certified_rho_supremum,
    fixed_point_relation,
    niu_upper_bound,
    rc_interval,
    rc_lower_certificate,
    verify_certificate,
)
from rcwb.matrix_model import (
    average_intertwiner,
    lemma_suite,
    random_invariant_pair,
)
from rcwb.sequences import kappa_interval, rank_recursion_identities, seq_row, seq_table
from rcwb.traces import d_tau, extreme_traces

pytestmark = pytest.mark.acceptance

RESULTS = []


class Criterion:
    """Collects named sub-checks and a wall-clock limit for one criterion."""

    def __init__(self, number, title, limit_s):
        self.number, self.title, self.limit_s = number, title, limit_s
        self.failed = []
        self.notes = []
        self._t0 = time.perf_counter()

    def check(self, name, ok, note=""):
        if not ok:
            self.failed.append(name)
        if note:
            self.notes.append(note)
        return ok

    def finish(self):
        elapsed = time.perf_counter() - self._t0
        self.check(f"runtime < {self.limit_s} s", elapsed < self.limit_s)
        status = "FAIL" if self.failed else "PASS"
        line = f"{status} criterion {self.number}: {self.title} ({elapsed:.2f} s)"
        if self.notes:
            line += " [" + "; ".join(self.notes) + "]"
        if self.failed:
            line += " failed: " + ", ".join(self.failed)
        RESULTS.append(line)
        print(line)
        assert not self.failed, line


def criterion_1():
    c = Criterion(1, "sequence exactness", 1.0)
    table = seq_table(12)
    c.check("t(0..4)", table.column("t")[:5] == [0, 1, 10, 172, 5672])
    c.check("r(3)", table[3].r == 512)
    c.check("s(3)", table[3].s == 315)
    c.check("u(3)", table[3].u == Fraction(315, 512))
    # hand recursion, restated without the library
    r, s, t = 1, 1, 0
    for n in range(1, 13):
        d = 2 ** (n + 1) - 1
        r, s, t = r * 2 ** (n + 1), s * d, d * t + r - t
        c.check(f"row {n} matches hand recursion", (table[n].r, table[n].s, table[n].t) == (r, s, t))
    rows = [seq_row(n) for n in range(65)]
    c.check("0 <= t < r to 64", all(0 <= x.t < x.r for x in rows))
    c.check("u strictly decreasing to 64", all(b.u < a.u for a, b in zip(rows, rows[1:])))
    c.finish()


def criterion_2():
    c = Criterion(2, "kappa certification", 1.0)
    kap = kappa_interval(40)
    c.check("width < 1e-12", kap.width < Fraction(1, 10 ** 12),
            f"width ~{float(kap.width):.3e}")
    # independent oracle: exact partial product to 60 terms with the tail factor
    partial = Fraction(1)
    for k in range(1, 61):
        partial *= 1 - Fraction(1, 2 ** (k + 1))
    oracle = (partial * (1 - Fraction(1, 2 ** 61)), partial)
    c.check("oracle interval (terms=60) inside", kap.lower <= oracle[0] and oracle[1] <= kap.upper)
    with mpmath.workdps(50):
        qp = mpmath.qp(mpmath.mpf(1) / 2) * 2
        c.check("q-Pochhammer value inside",
                mpmath.mpf(kap.lower.numerator) / kap.lower.denominator <= qp
                <= mpmath.mpf(kap.upper.numerator) / kap.upper.denominator)
    # the literal carries 13 decimals; it stands for every real within half a unit of its last digit
    literal = Fraction(Decimal("0.5775761901732"))
    half_ulp = Fraction(1, 2 * 10 ** 13)
    gap = max(kap.lower - literal, literal - kap.upper, Fraction(0))
    c.check("contains 0.5775761901732 at its 13-decimal precision", gap <= half_ulp,
            f"literal is {float(gap):.2e} outside the exact interval, tolerance {float(half_ulp):.0e}")
    c.finish()


def criterion_3():
    c = Criterion(3, "rank lemmas", 5.0)
    report = iterate_and_check(10)
    c.check("p, p', q closed forms to 10", report.passed)
    c.check("33 closed-form checks", len(report.checks) == 33)
    c.check("rank recursion identities to 64", rank_recursion_identities(64).passed)
    c.finish()


def criterion_4():
    c = Criterion(4, "trace pairings", 1.0)
    for n in range(13):
        pp, q, p = canonical_p_prime(n), canonical_q(n), canonical_p(n)
        c.check(f"d_tau(p'_{n}) = 1", all(d_tau(pp, tau) == 1 for tau in extreme_traces(pp)))
        c.check(f"d_tau(q_{n}) = 1/2",
                all(d_tau(q, tau) == Fraction(1, 2) for tau in extreme_traces(q)))
        row = seq_row(n)
        values = [d_tau(p, tau) for tau in extreme_traces(p)]
        c.check(f"d_tau(p_{n}) values",
                values == [Fraction(row.r - row.t, row.r), Fraction(row.t, row.r)])
        c.check(f"d_tau(p_{n}) <= 1", max(values) <= 1)
    c.finish()


def _mutations(cert):
    for name in ("rho", "kappa_lb", "kappa_ub", "terms", "n", "M"):
        for step in (-1, 1):
            yield dataclasses.replace(cert, **{name: getattr(cert, name) + step})
    for i in range(len(cert.window)):
        for step in (-1, 1):
            window = list(cert.window)
            window[i] += step
            yield dataclasses.replace(cert, window=tuple(window))
    yield dataclasses.replace(cert, monotone_tail=False)


def criterion_5():
    c = Criterion(5, "certificates", 10.0)
    a = rc_lower_certificate("paper-a", Fraction(1, 2))
    c.check("A, 1/2 -> (2, 49)", (a.n, a.M) == (2, 49))
    c.check("A, 1/2 verifies", verify_certificate(a).passed)
    b = rc_lower_certificate("paper-b", Fraction(1, 4))
    c.check("B, 1/4 -> (2, 49)", (b.n, b.M) == (2, 49))
    c.check("B, 1/4 verifies", verify_certificate(b).passed)
    rng = random.Random(2024)
    certs = [a, b]
    for system in ("paper-a", "paper-b"):
        bound = certified_rho_supremum(system)
        ok = 0
        for _ in range(50):
            den = rng.randint(1, 10 ** 9)
            rho = bound * Fraction(rng.randrange(den), den)
            cert = rc_lower_certificate(system, rho)
            ok += verify_certificate(cert).passed
            certs.append(cert)
        c.check(f"50 random rho verify on {system}", ok == 50, f"{system} {ok}/50")
    trials = detected = 0
    for cert in certs:
        for bad in _mutations(cert):
            trials += 1
            detected += not verify_certificate(bad).passed
    c.check("tampering detected in every trial", detected == trials,
            f"tampering {detected}/{trials}")
    c.finish()


def criterion_6():
    c = Criterion(6, "bound squeeze", 5.0)
    for terms in (10, 20, 40):
        kap = kappa_interval(terms)
        lower_a = certified_rho_supremum("paper-a", terms)
        upper_a = niu_upper_bound(DiagonalSystemSpec("paper-a"), terms).upper
        lower_b = certified_rho_supremum("paper-b", terms)
        upper_b = niu_upper_bound(DiagonalSystemSpec("paper-b"), terms).upper
        c.check(f"A bracket inside kappa interval ({terms})",
                kap.lower <= lower_a <= upper_a <= kap.upper)
        c.check(f"B bracket inside half interval ({terms})",
                kap.lower / 2 <= lower_b <= upper_b <= kap.upper / 2)
        rc_a, rc_b = rc_interval("paper-a", terms), rc_interval("paper-b", terms)
        c.check(f"fixed point of B equals A ({terms})", fixed_point_relation(rc_b, 2).same_bounds(rc_a))
        c.check(f"B upper <= A upper / 2 ({terms})", rc_b.upper <= rc_a.upper / 2)
    c.finish()


def criterion_7():
    c = Criterion(7, "matrix suite", 30.0)
    report = lemma_suite(seed=0, trials=1000, dim_max=16, tol=1e-9, workers=1)
    for name in ("cutdown_composition", "norm_perturbation", "shifted_perturbation",
                 "flip_equivalence", "two_sided_cutdown", "scalar_inequalities"):
        counts = report.counts[name]
        c.check(f"{name} zero failures",
                counts["failures"] == 0 and counts["trials"] >= 1000)
    kr = report.counts["kr_witness_norm"]
    c.check("kr_witness 1000/1000", kr["passes"] == kr["trials"] == 1000,
            f"kr_witness {kr['passes']}/{kr['trials']}")
    ok = 0
    for trial in range(200):
        rng = np.random.default_rng([1, trial])
        dim = int(rng.integers(2, 17))
        a, b, u = random_invariant_pair(rng, dim, 1e-9)
        res = average_intertwiner(a, b, [np.eye(dim), u], 1e-9)
        ok += res.error <= res.baseline_error + 1e-9
    c.check("averaging 200/200", ok == 200, f"averaging {ok}/200")
    c.finish()


def criterion_8():
    c = Criterion(8, "comparison-oracle soundness", 5.0)
    rng = random.Random(8)
    both = yes_count = bad_rank = bad_trace = 0
    for _ in range(10_000):
        k = rng.randint(0, 24)
        e = KClass(k, rng.randint(0, 40), IndexSet.of(i for i in range(1, k + 1) if rng.random() < 0.5))
        f = KClass(k, rng.randint(0, 40), IndexSet.of(i for i in range(1, k + 1) if rng.random() < 0.4))
        yes, no = yes_rule(e, f), no_rule(e, f)
        both += bool(yes and no)
        if yes:
            yes_count += 1
            size = max(e.rank, f.rank, 1)
            pe = StageClassPair(0, (e,), size)
            pf = StageClassPair(0, (f,), size)
            bad_rank += e.rank > f.rank
            bad_trace += any(d_tau(pe, tau) > d_tau(pf, tau) for tau in extreme_traces(pe))
    c.check("rules never both fire", both == 0)
    c.check("Yes implies rank monotone", bad_rank == 0)
    c.check("Yes implies d_tau monotone", bad_trace == 0, f"{yes_count} Yes verdicts")
    c.finish()


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4,
            criterion_5, criterion_6, criterion_7, criterion_8]


@pytest.mark.parametrize("criterion", CRITERIA, ids=[f.__name__ for f in CRITERIA])
def test_criterion(criterion):
    criterion()


if __name__ == "__main__":
    failures = 0
    for criterion in CRITERIA:
        try:
            criterion()
        except AssertionError:
            failures += 1
    sys.exit(1 if failures else 0)
