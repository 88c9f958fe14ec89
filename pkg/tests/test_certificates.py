import ast
import dataclasses
import json
import random
from fractions import Fraction
from pathlib import Path

import pytest

import rcwb.certificates.generator as generator
from rcwb.ah_system import DiagonalSystemSpec
from rcwb.certificates import (
    RcCertificate,
    RcInterval,
    certified_rho_supremum,
    corner_rc_interval,
    fixed_point_relation,
    niu_upper_bound,
    rc_interval,
    rc_lower_certificate,
    verify_certificate,
)
from rcwb.exceptions import BadRange, Divergent, RhoTooLarge
from rcwb.sequences import kappa_interval

HALF = Fraction(1, 2)


def custom_spec(stages):
    return DiagonalSystemSpec.from_dict({
        "preset": "custom",
        "stages": [{"matrix_size": m, "coords": list(c)} for m, c in stages],
    })


# generation

def test_paper_a_half():
    cert = rc_lower_certificate("paper-a", HALF)
    assert (cert.n, cert.M) == (2, 49)
    assert Fraction(3, 2) < Fraction(cert.M, 32) < 1 + cert.kappa_lb
    assert cert.window == tuple(range(3, 13))
    report = verify_certificate(cert)
    assert report.passed, list(report.lines())


def test_paper_b_quarter():
    cert = rc_lower_certificate("paper-b", Fraction(1, 4))
    assert (cert.n, cert.M) == (2, 49)
    assert Fraction(3, 4) < Fraction(cert.M, 64) < cert.kappa_lb / 2 + HALF
    assert verify_certificate(cert).passed


def test_rho_zero_passes():
    cert = rc_lower_certificate("a", 0)
    assert (cert.n, cert.M) == (1, 5)
    assert verify_certificate(cert).passed


@pytest.mark.parametrize("terms", [10, 20, 40])
def test_rho_too_large(terms):
    with pytest.raises(RhoTooLarge):
        rc_lower_certificate("paper-a", Fraction(3, 5), terms=terms)
    with pytest.raises(RhoTooLarge):
        rc_lower_certificate("paper-b", kappa_interval(terms).lower / 2, terms=terms)


def test_negative_rho_rejected():
    with pytest.raises(ValueError):
        rc_lower_certificate("paper-a", Fraction(-1, 3))


def test_window_stages_refuted_by_villadsen():
    report = verify_certificate(rc_lower_certificate("paper-a", HALF))
    refutations = [c for c in report.checks if c.name.endswith("target not below e")]
    assert len(refutations) == 10
    assert all(c.detail == "No/villadsen-obstruction, No/villadsen-obstruction"
               for c in refutations)


@pytest.mark.parametrize("system", ["paper-a", "paper-b"])
def test_fifty_random_rho_verify(system):
    rng = random.Random({"paper-a": 11, "paper-b": 23}[system])
    bound = certified_rho_supremum(system)
    for _ in range(50):
        den = rng.randint(1, 10 ** 6)
        rho = Fraction(rng.randrange(0, den), den) * bound
        cert = rc_lower_certificate(system, rho)
        assert verify_certificate(cert).passed, rho


# tampering

def mutations(cert):
    for name in ("rho", "kappa_lb", "kappa_ub", "terms", "n", "M"):
        for step in (-1, 1):
            yield name, step, dataclasses.replace(cert, **{name: getattr(cert, name) + step})
    for i in range(len(cert.window)):
        for step in (-1, 1):
            window = list(cert.window)
            window[i] += step
            yield f"window[{i}]", step, dataclasses.replace(cert, window=tuple(window))
    yield "monotone_tail", 0, dataclasses.replace(cert, monotone_tail=False)


@pytest.mark.parametrize("system,rho", [
    ("paper-a", HALF), ("paper-b", Fraction(1, 4)), ("paper-a", Fraction(0)),
    ("paper-a", Fraction(57, 100)), ("paper-b", Fraction(1, 7)),
])
def test_single_field_tampering_detected(system, rho):
    cert = rc_lower_certificate(system, rho)
    trials = list(mutations(cert))
    assert len(trials) >= 30
    missed = [(name, step) for name, step, bad in trials if verify_certificate(bad).passed]
    assert missed == []


def test_relabeled_system_fails():
    # at rho=0 the A and B searches agree, so relabeling is only wrong for rho > 0
    cert = rc_lower_certificate("paper-a", HALF)
    assert not verify_certificate(dataclasses.replace(cert, system="paper-b")).passed
    cert = rc_lower_certificate("paper-b", Fraction(1, 4))
    assert not verify_certificate(dataclasses.replace(cert, system="paper-a")).passed
    assert not verify_certificate(dataclasses.replace(cert, system="paper-c")).passed


def test_tampered_m_52_fails():
    cert = dataclasses.replace(rc_lower_certificate("paper-a", HALF), M=52)
    failed = {c.name for c in verify_certificate(cert).failures}
    assert "tail: M/r(n) < 1 + kappa_lb" in failed


# independence of generator and verifier

def test_verifier_does_not_import_generator():
    import rcwb.certificates.verifier as verifier

    tree = ast.parse(Path(verifier.__file__).read_text())
    imported = set()
    for node in ast.walk(tree):
        if isinstance(node, ast.ImportFrom):
            imported.add(node.module or "")
            imported.update(alias.name for alias in node.names)
        elif isinstance(node, ast.Import):
            imported.update(alias.name for alias in node.names)
    assert not any("generator" in name for name in imported)


def test_mutated_generator_is_caught(monkeypatch):
    # a generator that forgets the B normalization must be rejected
    monkeypatch.setitem(generator._SCALE, "paper-b", 1)
    cert = generator.rc_lower_certificate("paper-b", Fraction(1, 4))
    assert not verify_certificate(cert).passed


def test_off_by_one_generator_is_caught(monkeypatch):
    real_floor = generator.math.floor
    monkeypatch.setattr(generator.math, "floor", lambda x: real_floor(x) + 1)
    cert = generator.rc_lower_certificate("paper-a", HALF)
    assert cert.M == 50
    assert not verify_certificate(cert).passed


# serialization

def test_certificate_json_round_trip():
    cert = rc_lower_certificate("paper-b", Fraction(1, 4))
    data = json.loads(cert.to_json())
    assert set(data) == {"system", "rho", "kappa_lb", "kappa_ub", "terms", "n", "M", "window"}
    assert data["rho"] == "1/4"
    assert RcCertificate.from_json(cert.to_json()) == cert


# bounds

def test_niu_upper_bound_presets():
    kap = kappa_interval(40)
    a = niu_upper_bound(DiagonalSystemSpec("paper-a"), 40)
    b = niu_upper_bound(DiagonalSystemSpec("paper-b"), 40)
    assert a.lower == 0 and kap.lower <= a.upper <= kap.upper
    assert kap.lower / 2 <= b.upper <= kap.upper / 2


def test_niu_upper_bound_zero_dimension():
    spec = custom_spec([(1, [0]), (2, [0]), (4, [0])])
    assert niu_upper_bound(spec).upper == 0


def test_niu_upper_bound_constant_dimension_decays():
    spec = custom_spec([(2 ** n, [1]) for n in range(12)])
    assert niu_upper_bound(spec).upper == Fraction(1, 2 ** 11)


def test_niu_upper_bound_divergent():
    spec = custom_spec([(1, [1]), (2, [3]), (4, [9])])
    with pytest.raises(Divergent):
        niu_upper_bound(spec)


@pytest.mark.parametrize("terms", [10, 20, 40])
def test_bound_squeeze(terms):
    kap = kappa_interval(terms)
    a, b = rc_interval("paper-a", terms), rc_interval("paper-b", terms)
    assert a.within(kap.lower, kap.upper)
    assert b.within(kap.lower / 2, kap.upper / 2)
    assert certified_rho_supremum("paper-a", terms) <= niu_upper_bound(
        DiagonalSystemSpec("paper-a"), terms).upper
    assert b.upper <= a.upper / 2
    assert fixed_point_relation(b, 2).same_bounds(a)


def test_squeeze_gap_shrinks():
    gaps = [rc_interval("paper-a", t).upper - rc_interval("paper-a", t).lower
            for t in (10, 20, 40)]
    assert gaps[0] > gaps[1] > gaps[2] > 0


def test_corner_examples():
    kap = kappa_interval(40)
    rc_b = RcInterval(kap.lower / 2, kap.upper / 2)
    assert corner_rc_interval(rc_b, HALF, HALF).same_bounds(
        RcInterval(kap.lower, kap.upper))
    rc = RcInterval(Fraction(1, 5), Fraction(2, 5))
    assert corner_rc_interval(rc, 1, 1).same_bounds(rc)
    assert corner_rc_interval(RcInterval(0, 0), HALF, 1).same_bounds(RcInterval(0, 0))


def test_corner_bad_range():
    rc = RcInterval(0, 1)
    with pytest.raises(BadRange):
        corner_rc_interval(rc, 0, 1)
    with pytest.raises(BadRange):
        corner_rc_interval(rc, 1, HALF)
    with pytest.raises(BadRange):
        RcInterval(1, 0)


def test_fixed_point_examples():
    rc = RcInterval(Fraction(1, 4), Fraction(1, 3))
    assert fixed_point_relation(rc, 1).same_bounds(rc)
    assert fixed_point_relation(rc, 3).same_bounds(RcInterval(Fraction(3, 4), 1))
    with pytest.raises(ValueError):
        fixed_point_relation(rc, 0)


def test_interval_json_round_trip():
    rc = rc_interval("paper-b", 20)
    assert RcInterval.from_dict(json.loads(json.dumps(rc.to_dict()))) == rc
