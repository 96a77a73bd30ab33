import mpmath
import mpmath.libmp as mlib
import pytest

from app.core.exceptions import DomainError, SelectionError
from app.schemas.schemas import EnumerationBound
from ecl import catalog, catalog_lines, ecl_add, ecl_exp, ecl_inv, ecl_log, ecl_mul, ecl_neg, ecl_sub, from_system
from ecl.enumerate import coefficients, count_systems, enumerate_systems, polynomials, power_products, system_key
from exppoly.calculus import partial_derivative
from exppoly.canonical import normalize
from interval.arith import CEILING, FLOOR, Interval, IntervalContext
from oracles import WORKING_PREC, e_value, encloses, grammar_by_text, omega
from samples import E_SYSTEM, box_of
from syntax.parser import parse_system, parse_term

SMALL = EnumerationBound(max_n=1, max_tower=0, max_coeff_bits=2, max_monomials=2, max_degree=1)


def _exact(f):
    with mpmath.workprec(WORKING_PREC):
        return f()


def test_generators(e_number, omega_number):
    assert encloses(e_number.enclosure, e_value())
    assert encloses(omega_number.enclosure, omega())
    assert e_number.verify() and omega_number.verify()


def test_from_system_rejects_missing_roots(cfg):
    with pytest.raises(SelectionError):
        from_system(parse_system(E_SYSTEM), box_of((0, 4)), 2, cfg)


def test_sum(e_number, omega_number, cfg):
    total = ecl_add(e_number, omega_number, cfg)
    assert total.system.n == 3
    assert encloses(total.enclosure, _exact(lambda: e_value() + omega()))
    assert total.verify()


def test_product_with_inverse_is_one(omega_number, cfg):
    inverse = ecl_inv(omega_number, cfg)
    with mpmath.workprec(WORKING_PREC):
        assert encloses(inverse.enclosure, 1 / omega())
    one = ecl_mul(omega_number, inverse, cfg)
    assert encloses(one.enclosure, 1)
    assert one.verify()


def test_exp_of_omega(omega_number, cfg):
    result = ecl_exp(omega_number, cfg)
    with mpmath.workprec(WORKING_PREC):
        assert encloses(result.enclosure, mpmath.exp(omega()))
    assert result.system.tower_height >= 1


def test_log_of_e(e_number, cfg):
    result = ecl_log(e_number, cfg)
    assert result.system.names[0] == "y"
    assert encloses(result.enclosure, 1)
    assert result.verify()


def test_negation_and_difference(e_number, omega_number, cfg):
    assert encloses(ecl_neg(omega_number, cfg).enclosure, -omega())
    difference = ecl_sub(e_number, omega_number, cfg)
    assert encloses(difference.enclosure, _exact(lambda: e_value() - omega()))


def test_log_undoes_exp(omega_number, cfg):
    back = ecl_log(ecl_exp(omega_number, cfg), cfg)
    assert back.enclosure.overlaps(omega_number.enclosure)
    assert encloses(back.enclosure, omega())
    assert back.verify()


def test_log_of_omega_is_minus_omega(omega_number, cfg):
    result = ecl_log(omega_number, cfg)
    assert encloses(result.enclosure, -omega())
    assert result.verify()


def _image(operation, a, b, ctx):
    if operation == "add":
        return ctx.add(a, b)
    if operation == "mul":
        return ctx.mul(a, b)
    if operation == "neg":
        return ctx.neg(a)
    if operation == "inv":
        return ctx.reciprocal(a)
    if operation == "exp":
        return ctx.exp(a)
    return Interval(mlib.mpf_log(a.lo, ctx.prec, FLOOR), mlib.mpf_log(a.hi, ctx.prec, CEILING))


OPERATIONS = {
    "add": lambda a, b, cfg: ecl_add(a, b, cfg),
    "mul": lambda a, b, cfg: ecl_mul(a, b, cfg),
    "neg": lambda a, b, cfg: ecl_neg(a, cfg),
    "inv": lambda a, b, cfg: ecl_inv(a, cfg),
    "exp": lambda a, b, cfg: ecl_exp(a, cfg),
    "log": lambda a, b, cfg: ecl_log(a, cfg),
}


@pytest.mark.parametrize("operation", sorted(OPERATIONS))
def test_results_lie_in_the_interval_image(operation, e_number, omega_number, cfg):
    a, b = omega_number, e_number
    precision = max(a.certificate.precision, cfg.precision)
    if operation in ("add", "mul"):
        precision = max(precision, b.certificate.precision)
    image = _image(operation, a.enclosure, b.enclosure, IntervalContext(precision))
    result = OPERATIONS[operation](a, b, cfg)
    assert result.enclosure.is_subset(image)
    assert result.verify()


def test_domain_errors(e_number, omega_number, cfg):
    zero = ecl_sub(e_number, e_number, cfg)
    assert zero.enclosure.contains_zero()
    with pytest.raises(DomainError):
        ecl_inv(zero, cfg)
    with pytest.raises(DomainError):
        ecl_log(ecl_neg(omega_number, cfg), cfg)


def test_coefficients_and_power_products():
    assert coefficients(2) == [1, -1, 2, -2, 3, -3]
    assert len(power_products(2, 2)) == 6


def test_small_enumeration_count():
    assert count_systems(SMALL) == 15


def test_enumerated_polynomials():
    listed = set(polynomials(1, SMALL))
    for source in ("x1 - 1", "x1 - 2", "x1 + 1", "2*x1 - 1"):
        assert normalize(parse_term(source)) in listed
    # not primitive, or not sign-normalised
    assert normalize(parse_term("2*x1 - 2")) not in listed
    assert normalize(parse_term("1 - x1")) not in listed


def test_tower_one_polynomials_include_e():
    bound = EnumerationBound(max_n=1, max_tower=1, max_coeff_bits=1, max_monomials=2, max_degree=1)
    assert normalize(parse_term("x1 - E(1)")) in set(polynomials(1, bound))
    towers = [system.tower_height for system in enumerate_systems(bound)]
    assert towers == sorted(towers)


def test_enumeration_matches_the_text_grammar():
    bound = EnumerationBound(max_n=1, max_tower=1, max_coeff_bits=1, max_monomials=2, max_degree=1)
    listed = polynomials(1, bound)
    assert len(set(listed)) == len(listed)
    assert set(listed) == grammar_by_text(max_tower=1, max_coeff_bits=1, max_monomials=2)
    solvable = [p for p in listed if not partial_derivative(p, 1).is_zero]
    assert count_systems(bound) == len(solvable)


def test_atom_arguments_range_over_the_bound():
    listed = set(polynomials(1, EnumerationBound(max_n=1, max_tower=1, max_coeff_bits=2, max_monomials=2)))
    for source in ("E(x1 + 1) - 3", "E(2*x1) - 3", "x1*E(-x1 - 3) + 2", "x1 - E(x1)", "x1*E(x1) - 1"):
        assert normalize(parse_term(source)) in listed
    assert normalize(parse_term("E(x1^2) - 1")) not in listed


def test_enumeration_is_deterministic_and_duplicate_free():
    bound = EnumerationBound(max_n=2, max_tower=0, max_coeff_bits=1, max_monomials=2, max_degree=1)
    first = list(enumerate_systems(bound))
    assert first == list(enumerate_systems(bound))
    keys = [system_key(system) for system in first]
    assert len(set(keys)) == len(keys)
    assert all(not system.determinant.is_zero for system in first)
    assert sum(1 for system in first if system.n == 2) == 22


def test_empty_bound_gives_empty_catalog(cfg):
    result = catalog(EnumerationBound(max_n=0), Interval.of(-1, 1), cfg)
    assert len(result) == 0
    assert result.unresolved == () and result.failures == ()


def test_small_catalog(cfg):
    bound = EnumerationBound(max_n=1, max_tower=0, max_coeff_bits=1, max_monomials=2, max_degree=1)
    result = catalog(bound, Interval.of(-2, 2), cfg)
    assert len(result) == 3
    for enclosure, value in zip(result.enclosures(), (-1, 0, 1)):
        assert encloses(enclosure, value)
    parallel = catalog(bound, Interval.of(-2, 2), cfg.model_copy(update={"workers": 2}))
    assert [e.sort_key() for e in parallel.enclosures()] == [e.sort_key() for e in result.enclosures()]


def test_catalog_orders_the_given_systems(cfg):
    systems = [parse_system(s) for s in ("x1 - 1", "2*x1 - 1", "E(x1) - x1 - 2")]
    result = catalog(SMALL, Interval.of(-3, 3), cfg, systems=systems)
    enclosures = result.enclosures()
    assert len(enclosures) == 4
    assert all(a.precedes(b) for a, b in zip(enclosures, enclosures[1:]))
    lines = catalog_lines(result)
    assert lines[1].system == "vars: 1; 2*x1 - 1"
    assert encloses(enclosures[1], 0.5)
    assert len(lines[0].certificate_ref) == 16


def test_equal_numbers_are_merged_and_reported(cfg):
    systems = [parse_system("x1 - E(1)"), parse_system("E(-1)*x1 - 1")]
    result = catalog(SMALL, Interval.of(0, 4), cfg, systems=systems)
    assert len(result) == 1
    entry = result.entries[0]
    assert sorted([entry.system, *entry.aliases], key=system_key) == sorted(systems, key=system_key)
    assert len(result.unresolved) == 1
    assert encloses(result.entries[0].number.enclosure, e_value())


def test_undecided_systems_are_failures(cfg):
    result = catalog(SMALL, Interval.of(-1, 1), cfg.model_copy(update={"max_splits": 50}),
                     systems=[parse_system("x1^2")])
    assert len(result) == 0
    assert len(result.failures) == 1
    assert "boxes" in result.failures[0].reason
