import dataclasses
from fractions import Fraction

import pytest
from hypothesis import HealthCheck, assume, given, settings

from app.core.exceptions import ExpCertError, SelectionError
from app.schemas.schemas import CertificateRecord, SolveConfig
from certify import solver
from certify.certificate import (
    certificate_from_record, certificate_from_text, certificate_to_text, check_box, verify_certificate,
)
from certify.krawczyk import krawczyk_step
from certify.solver import SolveReport, rank_of, refine_certificate, select_coordinate, solve_in_box
from exppoly.calculus import evaluate_float, partial_derivative
from interval.arith import Interval, IntervalBox, IntervalContext
from interval.evaluate import eval_poly
from khovanskii.system import KhovanskiiSystem
from oracles import e_bounds, encloses, evaluate, exp_minus_x_minus_2_roots, omega, sampled_roots
from samples import E_SYSTEM, OMEGA_SYSTEM, box_of
from strategies import polys
from syntax.parser import parse_system


@pytest.fixture(scope="module")
def e_report(cfg):
    return solve_in_box(parse_system(E_SYSTEM), box_of((0, 4)), cfg)


@pytest.fixture(scope="module")
def omega_report(cfg):
    return solve_in_box(parse_system(OMEGA_SYSTEM), box_of((0, 1)), cfg)


def test_e_is_certified(e_report, cfg):
    assert e_report.complete
    assert len(e_report.certificates) == 1
    certificate = e_report.certificates[0]
    lo, hi = certificate.enclosure.fractions()
    e_lo, e_hi = e_bounds()
    assert lo <= e_lo and e_hi <= hi
    assert certificate.enclosure.width() <= cfg.eps
    assert certificate.valid


def test_omega_is_certified(omega_report):
    assert len(omega_report.certificates) == 1
    certificate = omega_report.certificates[0]
    assert encloses(certificate.enclosure, omega())
    assert not certificate.jacobian_nonzero.contains_zero()
    assert verify_certificate(certificate)


def test_two_roots_in_ascending_order(two_roots_report):
    assert two_roots_report.complete
    certificates = two_roots_report.certificates
    assert len(certificates) == 2
    for certificate, root in zip(certificates, exp_minus_x_minus_2_roots()):
        assert encloses(certificate.enclosure, root)
    assert certificates[0].enclosure.precedes(certificates[1].enclosure)
    assert not certificates[0].box.overlaps(certificates[1].box)


def test_select_and_rank(two_roots_report):
    first = select_coordinate(two_roots_report, 1)
    second = select_coordinate(two_roots_report, 2)
    assert first.precedes(second)
    assert rank_of(two_roots_report, second) == 2
    assert rank_of(two_roots_report, first) == 1
    with pytest.raises(SelectionError):
        select_coordinate(two_roots_report, 3)
    with pytest.raises(SelectionError):
        select_coordinate(two_roots_report, 0)
    with pytest.raises(SelectionError):
        rank_of(two_roots_report, Interval.of(5, 6))


def test_volume_accounting(two_roots_report):
    assert 0 < two_roots_report.excluded_volume <= two_roots_report.total_volume


def test_no_roots(cfg):
    report = solve_in_box(parse_system("x1 - 5"), box_of((0, 1)), cfg)
    assert report.certificates == ()
    assert report.complete
    assert report.excluded_volume == report.total_volume


def test_budget_exhaustion_leaves_residue(cfg):
    report = solve_in_box(parse_system("E(x1) - x1 - 2"), box_of((-3, 3)), cfg.model_copy(update={"max_splits": 1}))
    assert report.budget_exhausted
    assert report.undecided
    assert not report.complete


def test_solving_is_deterministic(cfg):
    system = parse_system("E(x1) - x1 - 2")
    first = solve_in_box(system, box_of((-3, 3)), cfg)
    second = solve_in_box(system, box_of((-3, 3)), cfg)
    assert [c.box for c in first.certificates] == [c.box for c in second.certificates]
    assert first.splits == second.splits


def test_parallel_workers_find_the_same_roots(cfg, two_roots_report):
    report = solve_in_box(two_roots_report.system, box_of((-3, 3)), cfg.model_copy(update={"workers": 2}))
    assert len(report.certificates) == 2
    for parallel, sequential in zip(report.certificates, two_roots_report.certificates):
        assert parallel.enclosure.overlaps(sequential.enclosure)


def test_box_shape_is_checked(cfg):
    with pytest.raises(ExpCertError):
        solve_in_box(parse_system("x1 - 1"), box_of((0, 1), (0, 1)), cfg)
    with pytest.raises(ExpCertError):
        solve_in_box(parse_system("x1 - 1"), IntervalBox.from_decimal([("0", "inf")], 64), cfg)


def test_linear_system_in_two_variables(cfg):
    report = solve_in_box(parse_system("x1 + x2 - 3; x1 - x2 - 1"), box_of((-5, 5), (-5, 5)), cfg)
    assert len(report.certificates) == 1
    assert report.certificates[0].box.contains_point([2, 1])


def test_every_certified_box_has_a_residual_containing_zero(cfg):
    system = parse_system("x1^2 + x2^2 - 4; x2 - E(x1)")
    report = solve_in_box(system, box_of((-3, 3), (-3, 3)), cfg)
    assert report.complete and report.certificates
    for certificate in report.certificates:
        for equation in system.equations:
            assert eval_poly(equation, certificate.box, IntervalContext(certificate.precision)).contains_zero()
        assert verify_certificate(certificate)


CORPUS = [
    ("x1^2 - 2", -3, 3),
    ("E(x1) - 3*x1", -2, 3),
    ("E(-x1) - x1", -1, 2),
    ("x1^3 - x1", -2, 2),
    ("E(E(x1)) - 10", -2, 2),
    ("x1*E(x1) - 1", -1, 2),
    ("2*E(x1) - x1^2 - 3", -4, 4),
]


@pytest.mark.parametrize("source, lo, hi", CORPUS)
def test_univariate_corpus_against_sampling(source, lo, hi, cfg):
    system = parse_system(source)
    report = solve_in_box(system, box_of((lo, hi)), cfg)
    f = system.equations[0]
    expected = sampled_roots(lambda x: evaluate(f, {1: x}), lo, hi)
    assert report.complete
    assert len(report.certificates) == len(expected)
    for certificate, root in zip(report.certificates, expected):
        assert encloses(certificate.enclosure, root, slack=Fraction(1, 10 ** 20))


def _cleanly_separated(f, lo: float = -3.0, hi: float = 3.0, samples: int = 4000) -> bool:
    """Sign changes sit on steep slopes away from the ends, and |f| has no shallow dip"""
    slope = partial_derivative(f, 1)
    xs = [lo + (hi - lo) * i / samples for i in range(samples + 1)]
    values = [evaluate_float(f, {1: x}) for x in xs]
    if min(abs(values[0]), abs(values[-1])) < 0.5:
        return False
    margin = samples // 100
    for i in range(1, samples + 1):
        a, b = values[i - 1], values[i]
        if (a < 0) != (b < 0) or b == 0:
            if i <= margin or i >= samples - margin:
                return False
            if min(abs(evaluate_float(slope, {1: xs[i - 1]})), abs(evaluate_float(slope, {1: xs[i]}))) < 0.05:
                return False
        elif i < samples:
            c = values[i + 1]
            if abs(b) < 1 and abs(b) <= min(abs(a), abs(c)) and (a < 0) == (c < 0):
                return False
    return True


@given(f=polys(n=1, tower=1, max_terms=3, max_coeff=5))
@settings(
    max_examples=50, deadline=None, derandomize=True,
    suppress_health_check=[HealthCheck.filter_too_much, HealthCheck.too_slow],
)
def test_random_univariate_systems_against_sampling(f, cfg):
    assume(not partial_derivative(f, 1).is_zero)
    assume(_cleanly_separated(f))
    report = solve_in_box(KhovanskiiSystem.build([f]), box_of((-3, 3)), cfg)
    expected = sampled_roots(lambda x: evaluate(f, {1: x}), -3, 3)
    assert report.complete
    assert not report.undecided
    assert len(report.certificates) == len(expected)
    for certificate, root in zip(report.certificates, expected):
        assert encloses(certificate.enclosure, root, slack=Fraction(1, 10 ** 20))


def test_certificate_text_round_trip(omega_report):
    certificate = omega_report.certificates[0]
    text = certificate_to_text(certificate)
    assert text.startswith("kind: certificate")
    restored = certificate_from_text(text)
    assert restored == certificate
    assert verify_certificate(restored)
    assert certificate_from_record(CertificateRecord.from_text(text)) == certificate
    assert restored.reference() == certificate.reference()


def test_tampered_certificate_is_rejected(e_report):
    certificate = e_report.certificates[0]
    moved = dataclasses.replace(certificate, box=box_of((3, 4)))
    assert not verify_certificate(moved)
    wrong_system = dataclasses.replace(certificate, system=parse_system("x1 - 3"))
    assert not verify_certificate(wrong_system)


def test_check_box_and_krawczyk_exclusion(ctx):
    system = parse_system(OMEGA_SYSTEM)
    assert krawczyk_step(system, box_of((2, 3)), ctx).excluded
    assert check_box(system, box_of((0.5, 0.6)), 64) is not None


def test_refine_certificate(omega_report):
    certificate = omega_report.certificates[0]
    finer = refine_certificate(certificate, 1e-30, 256)
    assert finer.enclosure.width() <= 1e-30
    assert finer.enclosure.overlaps(certificate.enclosure)
    assert encloses(finer.enclosure, omega())


def test_smaller_eps_keeps_every_root(two_roots_report, cfg):
    coarse = solve_in_box(two_roots_report.system, box_of((-3, 3)), cfg.model_copy(update={"eps": 1e-4}))
    assert len(coarse.certificates) == len(two_roots_report.certificates) == 2
    for rough, fine in zip(coarse.certificates, two_roots_report.certificates):
        assert fine.enclosure.overlaps(rough.enclosure)
        assert fine.enclosure.width() <= cfg.eps


def test_refinement_is_monotone(omega_report):
    certificate = omega_report.certificates[0]
    for width in (1e-14, 1e-20, 1e-30):
        finer = refine_certificate(certificate, width, 256)
        assert finer.enclosure.width() <= width
        assert finer.enclosure.overlaps(certificate.enclosure)
        assert encloses(finer.enclosure, omega())
        certificate = finer


def test_overlapping_certificates_become_undecided(omega_report, cfg, monkeypatch):
    certificate = omega_report.certificates[0]
    report = SolveReport(
        omega_report.system, omega_report.box, (certificate, certificate), (), Fraction(0), 0,
    )
    monkeypatch.setattr(solver, "refine_certificate", lambda c, width, precision: c)
    separated = solver._separate(report, cfg)
    assert separated.certificates == ()
    assert separated.undecided == (certificate.box, certificate.box)
    assert not separated.complete


def test_solve_config_ladder():
    assert SolveConfig(precision=64, max_precision=256).precision_ladder == [64, 128, 256]
    assert SolveConfig(precision=64, max_precision=100).precision_ladder == [64, 100]
    with pytest.raises(ValueError):
        SolveConfig(precision=128, max_precision=64)
