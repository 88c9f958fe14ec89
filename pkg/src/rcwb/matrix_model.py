"""Cuntz calculus in full matrix algebras.

In ``M_N`` Cuntz subequivalence of positive matrices is rank comparison, so the
cutdown lemmas become rank inequalities and spectral identities that can be
checked on random samples. Ranks count eigenvalues above ``tol * max(1, norm)``.
Samplers keep the relevant spectra at least ``10 * tol`` away from every
cut level, so numerical ranks agree with exact ones.
"""

import json
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from decimal import Decimal, localcontext

import numpy as np

from .exceptions import DimMismatch, NotHereditary, NotInvariant, NotPSD, RankDeficit

__all__ = [
    "HermitianSample",
    "SuiteReport",
    "IntertwinerResult",
    "numerical_rank",
    "cutdown",
    "cuntz_leq",
    "kr_witness",
    "average_intertwiner",
    "random_unitary",
    "random_psd",
    "lemma_suite",
    "CHECKS",
]

HERMITIAN_RTOL = 1e-12
PSD_RTOL = 1e-12


def _op_norm(m):
    return float(np.linalg.norm(m, 2)) if m.size else 0.0


@dataclass(frozen=True, eq=False)
class HermitianSample:
    """Hermitian matrix with its cached eigendecomposition (ascending)."""

    entries: np.ndarray
    eigvals: np.ndarray
    eigvecs: np.ndarray

    @classmethod
    def from_matrix(cls, m):
        m = np.asarray(m, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError(f"expected a square matrix, got shape {m.shape}")
        scale = max(1.0, float(np.abs(m).max(initial=0.0)))
        if np.abs(m - m.conj().T).max(initial=0.0) > HERMITIAN_RTOL * scale:
            raise ValueError("matrix is not Hermitian")
        m = (m + m.conj().T) / 2
        vals, vecs = np.linalg.eigh(m)
        return cls(m, vals, vecs)

    @classmethod
    def from_spectrum(cls, eigvals, frame):
        eigvals = np.asarray(eigvals, dtype=float)
        order = np.argsort(eigvals, kind="stable")
        eigvals, frame = eigvals[order], frame[:, order]
        m = (frame * eigvals) @ frame.conj().T
        return cls((m + m.conj().T) / 2, eigvals, frame)

    @property
    def dim(self):
        return self.entries.shape[0]

    @property
    def norm(self):
        return float(np.abs(self.eigvals).max(initial=0.0))

    def is_psd(self):
        return self.eigvals.size == 0 or self.eigvals[0] >= -PSD_RTOL * max(1.0, self.norm)


def _sample(x):
    return x if isinstance(x, HermitianSample) else HermitianSample.from_matrix(x)


def _require_psd(a):
    if not a.is_psd():
        raise NotPSD(f"min eigenvalue {a.eigvals[0]:.3e} below zero")


def _threshold(a, tol):
    return tol * max(1.0, a.norm)


def numerical_rank(a, tol=1e-9):
    a = _sample(a)
    return int(np.count_nonzero(a.eigvals > _threshold(a, tol)))


def cutdown(a, eps):
    """``(a - eps)_+``: eigenvalues ``max(0, lambda - eps)`` on the same frame."""
    a = _sample(a)
    _require_psd(a)
    if eps < 0:
        raise ValueError(f"eps must be nonnegative, got {eps}")
    return HermitianSample.from_spectrum(np.maximum(a.eigvals - eps, 0.0), a.eigvecs)


def cuntz_leq(a, b, tol=1e-9):
    a, b = _sample(a), _sample(b)
    if a.dim != b.dim:
        raise DimMismatch(f"{a.dim}x{a.dim} vs {b.dim}x{b.dim}")
    _require_psd(a)
    _require_psd(b)
    return numerical_rank(a, tol) <= numerical_rank(b, tol)


def kr_witness(a, b, delta, tol=1e-9):
    """Bounded witness ``w`` with ``w b w* = (a - eps)_+``, ``eps = tol*max(1, |a|)``.

    The range of ``(b - delta)_+`` is aligned with the range of ``a`` by the
    polar factor of their overlap. ``b`` is inverted on that subspace, where
    its eigenvalues exceed ``delta``. That gives
    ``|w| <= |a|^{1/2} delta^{-1/2}``.
    """
    a, b = _sample(a), _sample(b)
    if a.dim != b.dim:
        raise DimMismatch(f"{a.dim}x{a.dim} vs {b.dim}x{b.dim}")
    _require_psd(a)
    _require_psd(b)
    if delta <= 0:
        raise ValueError("delta must be positive")
    eps = _threshold(a, tol)
    keep_a = a.eigvals > eps
    k = int(keep_a.sum())
    bd = cutdown(b, delta)
    keep_b = bd.eigvals > _threshold(bd, tol)
    if k > int(keep_b.sum()):
        raise RankDeficit(
            f"rank(a)={k} exceeds rank((b - {delta})_+)={int(keep_b.sum())}"
        )
    w = np.zeros((a.dim, a.dim), dtype=complex)
    if k == 0:
        return w
    ua = a.eigvecs[:, keep_a]
    lam = a.eigvals[keep_a] - eps
    vb = b.eigvecs[:, keep_b]
    p, _, qh = np.linalg.svd(vb.conj().T @ ua, full_matrices=False)
    y = vb @ (p[:, :k] @ qh)
    cvals, cvecs = np.linalg.eigh(y.conj().T @ b.entries @ y)
    c_inv_half = (cvecs / np.sqrt(cvals)) @ cvecs.conj().T
    return (ua * np.sqrt(lam)) @ c_inv_half @ y.conj().T


@dataclass(frozen=True, eq=False)
class IntertwinerResult:
    d: np.ndarray
    error: float
    baseline_error: float
    invariance_error: float


def average_intertwiner(a, b, actions, tol=1e-9, c=None):
    """Average a solution of ``a ~ b c b`` over a finite group of unitaries.

    ``actions`` holds one unitary per group element. When ``c`` is omitted,
    it is the pseudo-inverse solve ``b^+ a b^+``.
    """
    a = np.asarray(a.entries if isinstance(a, HermitianSample) else a, dtype=complex)
    b_s = _sample(b)
    b = b_s.entries
    if a.shape != b.shape:
        raise DimMismatch(f"{a.shape} vs {b.shape}")
    if not actions:
        raise ValueError("need at least one group element")
    scale = max(1.0, _op_norm(a), b_s.norm)
    for u in actions:
        u = np.asarray(u)
        drift = max(_op_norm(u @ a @ u.conj().T - a), _op_norm(u @ b @ u.conj().T - b))
        if drift > tol * scale:
            raise NotInvariant(f"conjugation moves a or b by {drift:.3e}")
    support = b_s.eigvals > _threshold(b_s, tol)
    frame = b_s.eigvecs[:, support]
    proj = frame @ frame.conj().T
    leak = _op_norm(a - proj @ a @ proj)
    if leak > np.sqrt(tol) * scale:
        raise NotHereditary(f"a leaves the support of b by {leak:.3e}")
    if c is None:
        b_pinv = (frame / b_s.eigvals[support]) @ frame.conj().T
        c = b_pinv @ a @ b_pinv
    c = np.asarray(c, dtype=complex)
    d = sum(np.asarray(u) @ c @ np.asarray(u).conj().T for u in actions) / len(actions)
    invariance = max(_op_norm(np.asarray(u) @ d @ np.asarray(u).conj().T - d)
                     for u in actions)
    return IntertwinerResult(
        d=d,
        error=_op_norm(a - b @ d @ b),
        baseline_error=_op_norm(a - b @ c @ b),
        invariance_error=invariance,
    )


# -- random model -------------------------------------------------------------


def random_unitary(rng, dim):
    """Haar unitary from the QR factorization of a complex Gaussian matrix."""
    z = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    phases = np.diag(r) / np.abs(np.diag(r))
    return q * phases


def random_psd(rng, dim, tol=1e-9, kernel_prob=0.5):
    """PSD contraction, with spectrum uniform on [0, 1] and a genuine kernel half the time."""
    vals = rng.uniform(0.0, 1.0, dim)
    if dim > 1 and rng.random() < kernel_prob:
        vals[rng.choice(dim, size=int(rng.integers(1, dim)), replace=False)] = 0.0
    vals[vals < 100 * tol] = 0.0
    return HermitianSample.from_spectrum(vals, random_unitary(rng, dim))


def _psd_part(m):
    s = HermitianSample.from_matrix(m)
    return HermitianSample.from_spectrum(np.maximum(s.eigvals, 0.0), s.eigvecs)


def _random_hermitian(rng, dim, norm):
    z = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    h = (z + z.conj().T) / 2
    return h * (norm / max(_op_norm(h), 1e-300))


def _clear_of(vals, level, margin):
    return bool(np.all(np.abs(vals - level) > margin))


# -- the suite ----------------------------------------------------------------

CHECKS = (
    "cutdown_composition",
    "norm_perturbation",
    "shifted_perturbation",
    "flip_equivalence",
    "two_sided_cutdown",
    "scalar_inequalities",
    "kr_witness_norm",
    "averaging_monotone",
)

COMPOSITION_RTOL = 1e-10
WITNESS_SLACK = 1e-8
AVERAGING_SLACK = 1e-9


@dataclass
class SuiteReport:
    seed: int
    trials: int
    dim_max: int
    tol: float
    counts: dict = field(default_factory=dict)
    failing: dict = field(default_factory=dict)
    probes: dict = field(default_factory=dict)
    skipped: dict = field(default_factory=dict)

    def record(self, check, ok, seed=None, trial=None):
        """Count one outcome; ``ok=None`` marks a sample with no usable cut level."""
        if ok is None:
            self.skipped[check] = self.skipped.get(check, 0) + 1
            return
        c = self.counts.setdefault(check, {"trials": 0, "passes": 0, "failures": 0})
        c["trials"] += 1
        if ok:
            c["passes"] += 1
        else:
            c["failures"] += 1
            self.failing.setdefault(check, []).append([seed, trial])

    def merge(self, other):
        for check, c in other.counts.items():
            mine = self.counts.setdefault(check, {"trials": 0, "passes": 0, "failures": 0})
            for key in mine:
                mine[key] += c[key]
        for check, seeds in other.failing.items():
            self.failing.setdefault(check, []).extend(seeds)
        for check, n in other.skipped.items():
            self.skipped[check] = self.skipped.get(check, 0) + n
        for key, value in other.probes.items():
            self.probes.setdefault(key, []).extend(value)

    @property
    def passed(self):
        return all(c["failures"] == 0 for c in self.counts.values())

    def failures(self, check):
        return self.counts.get(check, {}).get("failures", 0)

    def to_dict(self):
        delta = sorted(self.probes.get("delta_for_eps", []))
        return {
            "seed": self.seed,
            "trials": self.trials,
            "dim_max": self.dim_max,
            "tol": self.tol,
            "passed": self.passed,
            "checks": {
                name: dict(self.counts[name],
                           skipped=self.skipped.get(name, 0),
                           failing_seeds=sorted(self.failing.get(name, [])))
                for name in CHECKS if name in self.counts
            },
            # reported only; an existence statement cannot fail a finite test
            "probes": {
                "delta_for_eps": {
                    "eps": 0.05,
                    "samples": len(delta),
                    "min_delta": delta[0] if delta else None,
                    "median_delta": delta[len(delta) // 2] if delta else None,
                }
            },
        }

    def to_json(self, **kwargs):
        return json.dumps(self.to_dict(), **kwargs)


def _check_composition(rng, dim, tol):
    a = random_psd(rng, dim, tol)
    e1, e2 = rng.uniform(0, 0.5, 2)
    # second cutdown starts from the matrix, not the cached spectrum
    twice = cutdown(HermitianSample.from_matrix(cutdown(a, e1).entries), e2)
    once = cutdown(a, e1 + e2)
    return _op_norm(twice.entries - once.entries) <= COMPOSITION_RTOL * max(1.0, a.norm)


def _perturbed_pair(rng, dim, tol):
    a = random_psd(rng, dim, tol)
    b = _psd_part(a.entries + _random_hermitian(rng, dim, rng.uniform(0, 0.3)))
    dist = _op_norm(a.entries - b.entries)
    margin = 10 * tol * max(1.0, b.norm) + 1e-12
    eps = dist + rng.uniform(margin, 0.2 + margin)
    return a, b, eps


def _check_perturbation(rng, dim, tol, probes):
    a, b, eps = _perturbed_pair(rng, dim, tol)
    ok = cuntz_leq(cutdown(a, eps), b, tol)
    # existence of delta with (a - eps')_+ <= (b - delta)_+ is only probed
    target = numerical_rank(cutdown(a, eps + 0.05), tol)
    for k in range(1, 40):
        delta = 2.0 ** -k
        if numerical_rank(cutdown(b, delta), tol) >= target:
            probes.setdefault("delta_for_eps", []).append(delta)
            break
    return ok


def _check_shifted(rng, dim, tol):
    a, b, eps = _perturbed_pair(rng, dim, tol)
    lam = rng.uniform(0, 0.5)
    return cuntz_leq(cutdown(a, lam + eps), cutdown(b, lam), tol)


def _check_flip(rng, dim, tol):
    z = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    if rng.random() < 0.5:
        inner = int(rng.integers(1, dim))
        z = z[:, :inner] @ (rng.standard_normal((inner, dim)) + 0j)
    c = z / max(_op_norm(z), 1e-300)
    left = HermitianSample.from_matrix(c.conj().T @ c)
    right = HermitianSample.from_matrix(c @ c.conj().T)
    margin = 10 * tol * max(1.0, left.norm)
    for _ in range(50):
        lam = rng.uniform(0, max(left.norm, 1e-3))
        if _clear_of(left.eigvals, lam + _threshold(left, tol), margin):
            break
    else:
        return None
    lo, ro = cutdown(left, lam), cutdown(right, lam)
    return cuntz_leq(lo, ro, tol) and cuntz_leq(ro, lo, tol)


def _check_two_sided(rng, dim, tol):
    eye = np.eye(dim)
    for _ in range(50):
        a = random_psd(rng, dim, tol)
        g = random_psd(rng, dim, tol)
        mid = HermitianSample.from_matrix((eye - g.entries) @ a.entries @ (eye - g.entries))
        e1, e2 = rng.uniform(0, 0.5, 2)
        margin = 10 * tol
        if (_clear_of(a.eigvals, e1 + e2, margin)
                and _clear_of(mid.eigvals, e1, margin)
                and _clear_of(g.eigvals, e2 / 2, margin)):
            break
    else:
        return None
    lhs = numerical_rank(cutdown(a, e1 + e2), tol)
    rhs = numerical_rank(cutdown(mid, e1), tol) + numerical_rank(cutdown(g, e2 / 2), tol)
    return lhs <= rhs


def _check_witness(rng, dim, tol):
    b = random_psd(rng, dim, tol, kernel_prob=0.25)
    delta = rng.uniform(0.01, 0.5)
    room = numerical_rank(cutdown(b, delta), tol)
    vals = rng.uniform(0, 1, dim) * rng.uniform(0.1, 2.0)
    vals[room:] = 0.0
    a = HermitianSample.from_spectrum(vals, random_unitary(rng, dim))
    w = kr_witness(a, b, delta, tol)
    eps = _threshold(a, tol)
    residual = _op_norm(w @ b.entries @ w.conj().T - cutdown(a, eps).entries)
    bound = np.sqrt(a.norm / delta) + WITNESS_SLACK
    return _op_norm(w) <= bound and residual <= tol


def random_invariant_pair(rng, dim, tol=1e-9):
    """``(a, b, U)`` with ``U`` an order-2 unitary fixing both and ``a`` in ``her(b)``."""
    frame = random_unitary(rng, dim)
    signs = rng.choice([-1.0, 1.0], dim)
    u = (frame * signs) @ frame.conj().T
    x = random_psd(rng, dim, tol).entries
    b = HermitianSample.from_matrix(x + u @ x @ u.conj().T)
    y = random_psd(rng, dim, tol).entries
    kept = np.where(b.eigvals > _threshold(b, tol), b.eigvals, 0.0)
    root = HermitianSample.from_spectrum(np.sqrt(kept), b.eigvecs).entries
    a = root @ (y + u @ y @ u.conj().T) @ root
    return (a + a.conj().T) / 2, b, u


def _check_averaging(rng, dim, tol):
    a, b, u = random_invariant_pair(rng, dim, tol)
    support = b.eigvals > _threshold(b, tol)
    frame = b.eigvecs[:, support]
    b_pinv = (frame / b.eigvals[support]) @ frame.conj().T
    noise = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    c = b_pinv @ a @ b_pinv + rng.uniform(0, 0.1) * noise
    res = average_intertwiner(a, b, [np.eye(dim), u], tol, c=c)
    return res.error <= res.baseline_error + AVERAGING_SLACK


def _scalar_grid(report):
    with localcontext() as ctx:
        ctx.prec = 50
        step = Decimal("0.01")
        for i in range(100):
            s = step * i
            root = (1 - s).sqrt()
            half_ok = 1 - root >= s / 2
            for j in range(100):
                t = step * j
                lhs = 2 * t - t * t - s > 0
                rhs = t - 1 + root > 0
                report.record("scalar_inequalities", lhs == rhs and half_ok, "grid", i * 100 + j)


def _run_trials(seed, indices, dim_max, tol):
    part = SuiteReport(seed, 0, dim_max, tol)
    for trial in indices:
        rng = np.random.default_rng([seed, trial])
        dim = int(rng.integers(2, dim_max + 1))
        part.record("cutdown_composition", _check_composition(rng, dim, tol), seed, trial)
        part.record("norm_perturbation", _check_perturbation(rng, dim, tol, part.probes), seed, trial)
        part.record("shifted_perturbation", _check_shifted(rng, dim, tol), seed, trial)
        part.record("flip_equivalence", _check_flip(rng, dim, tol), seed, trial)
        part.record("two_sided_cutdown", _check_two_sided(rng, dim, tol), seed, trial)
        part.record("kr_witness_norm", _check_witness(rng, dim, tol), seed, trial)
        part.record("averaging_monotone", _check_averaging(rng, dim, tol), seed, trial)
    return part


def _default_workers():
    try:
        return max(1, int(os.environ.get("RCWB_THREADS", "1")))
    except ValueError:
        return 1


def lemma_suite(seed=0, trials=1000, dim_max=16, tol=1e-9, workers=None):
    """Randomized replay of the cutdown lemmas; one sample per check per trial.

    Trial ``i`` draws from ``default_rng([seed, i])``, so any failure listed
    under ``failing_seeds`` can be replayed alone. ``workers`` (default
    ``$RCWB_THREADS`` or 1) only changes scheduling, never the results.
    """
    if trials < 1 or dim_max < 2:
        raise ValueError("need trials >= 1 and dim_max >= 2")
    if tol <= 0:
        raise ValueError("tol must be positive")
    workers = workers or _default_workers()
    report = SuiteReport(seed, trials, dim_max, tol)
    chunks = [range(i, trials, workers) for i in range(workers)]
    if workers == 1:
        parts = [_run_trials(seed, chunks[0], dim_max, tol)]
    else:
        with ThreadPoolExecutor(workers) as pool:
            parts = list(pool.map(lambda idx: _run_trials(seed, idx, dim_max, tol), chunks))
    for part in parts:
        report.merge(part)
    _scalar_grid(report)
    return report
