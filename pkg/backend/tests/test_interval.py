from fractions import Fraction

import mpmath
import mpmath.libmp as mlib
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from app.core.exceptions import DomainError, MissingVariableError
from exppoly.canonical import CanonicalPoly, exp_of, variable
from interval.arith import CEILING, FLOOR, ENTIRE, Interval, IntervalBox, IntervalContext
from interval.evaluate import Truth3, eval_formula, eval_poly
from interval.expfn import SATURATION, exp_bound, exp_enclosure, exp_point_enclosure, ln2_enclosure
from oracles import encloses, evaluate, to_fraction
from strategies import dyadic, polys
from syntax.parser import parse_box, parse_formula


@pytest.mark.parametrize("prec", [53, 64, 128, 256])
def test_ln2_enclosure_against_mpmath(prec):
    enclosure = ln2_enclosure(prec)
    with mpmath.workprec(prec + 200):
        reference = to_fraction(mpmath.log(2))
    lo, hi = enclosure.fractions()
    margin = Fraction(1, 2 ** (prec + 150))
    assert lo - margin <= reference <= hi + margin
    assert hi - lo < Fraction(1, 2 ** prec)


@given(st.integers(-400, 400), st.sampled_from([53, 64, 113]))
@settings(max_examples=120, deadline=None)
def test_exp_point_enclosure_contains_exp(k, prec):
    x = Fraction(k, 8)
    enclosure = exp_point_enclosure(mlib.from_man_exp(k, -3), prec)
    with mpmath.workprec(prec + 200):
        value = mpmath.exp(mpmath.mpf(k) / 8)
    assert encloses(enclosure, value, slack=Fraction(1, 2 ** (prec + 100)))
    lo, hi = enclosure.fractions()
    _, _, exponent, bits = enclosure.hi
    ulp = Fraction(2) ** (exponent + bits - prec)
    assert hi - lo <= 4 * ulp, f"wider than 4 ulp at x = {x}"


def test_exp_special_values():
    assert exp_enclosure(Interval.point(0)) == Interval.point(1)
    assert exp_enclosure(Interval(mlib.fninf, mlib.fzero)) == Interval(mlib.fzero, mlib.fone)
    huge = mlib.from_int(2 * SATURATION)
    assert exp_bound(huge, 64, CEILING) == mlib.finf
    assert exp_bound(huge, 64, FLOOR) == mlib.from_man_exp(1, SATURATION)
    assert exp_bound(mlib.mpf_neg(huge), 64, FLOOR) == mlib.fzero


def test_exp_is_monotone_on_intervals():
    ctx = IntervalContext(64)
    a = ctx.exp(Interval.of(-1, 1))
    with mpmath.workprec(200):
        assert encloses(a, mpmath.exp(-1)) and encloses(a, mpmath.exp(1))
    assert a.contains(1)


@given(dyadic(), dyadic(), dyadic(), dyadic())
@settings(max_examples=200, deadline=None)
def test_multiplication_encloses_all_endpoint_products(a, b, c, d):
    x = Interval.of(min(a, b), max(a, b))
    y = Interval.of(min(c, d), max(c, d))
    product = IntervalContext(64).mul(x, y)
    lo, hi = product.fractions()
    corners = [p * q for p in (a, b) for q in (c, d)]
    # dyadic inputs with small numerators multiply exactly at 64 bits
    assert lo == min(corners) and hi == max(corners)


def test_even_power_across_zero(ctx):
    assert ctx.pow_nat(Interval.of(-2, 1), 2) == Interval.of(0, 4)
    assert ctx.pow_nat(Interval.of(-3, -1), 2) == Interval.of(1, 9)
    assert ctx.pow_nat(Interval.of(-2, 1), 3) == Interval.of(-8, 1)


def test_reciprocal(ctx):
    assert ctx.reciprocal(Interval.of(2, 4)) == Interval.of(Fraction(1, 4), Fraction(1, 2))
    with pytest.raises(DomainError):
        ctx.reciprocal(Interval.of(-1, 1))


def test_outward_rounding_of_decimals():
    tenth = Interval.from_decimal("0.1", "0.1", 64)
    lo, hi = tenth.fractions()
    assert lo < Fraction(1, 10) < hi
    printed = parse_box(tenth.to_decimal())[0]
    assert tenth.is_subset(Interval.from_decimal(*printed, 64))
    assert Interval.from_binary(tenth.to_binary()) == tenth


def test_box_helpers(ctx):
    box = IntervalBox.of([Interval.of(0, 2), Interval.of(-1, 1)])
    assert box.volume() == 4
    assert box.contains_point([1, 0])
    assert not box.contains_point([3, 0])
    point = ctx.split_point(box[0], Fraction(1, 3))
    assert box[0].contains(point)
    wider = ctx.inflate(box[1], relative=0.25)
    assert box[1].is_interior(wider)
    assert ctx.intersect(Interval.of(0, 1), Interval.of(2, 3)) is None
    assert not ENTIRE.is_finite


def _box_of(bounds):
    ordered = [(min(a, b), max(a, b)) for a, b in bounds]
    return IntervalBox.of([Interval.of(lo, hi) for lo, hi in ordered]), ordered


POINTS_PER_BOX = 20


@given(polys(), st.lists(st.tuples(dyadic(), dyadic()), min_size=2, max_size=2), st.data())
@settings(max_examples=500, deadline=None)
def test_polynomial_enclosures_are_sound(p, bounds, data):
    box, ordered = _box_of(bounds)
    enclosure = eval_poly(p, box, IntervalContext(64))
    for _ in range(POINTS_PER_BOX):
        point = {}
        for index, (lo, hi) in enumerate(ordered, start=1):
            point[index] = lo + (hi - lo) * Fraction(data.draw(st.integers(0, 64)), 64)
        assert encloses(enclosure, evaluate(p, point))


@given(polys(), st.lists(st.tuples(dyadic(), dyadic()), min_size=2, max_size=2), st.data())
@settings(max_examples=200, deadline=None)
def test_refined_boxes_give_nested_enclosures(p, bounds, data):
    box, ordered = _box_of(bounds)
    inner = []
    for lo, hi in ordered:
        a, b = sorted(data.draw(st.lists(st.integers(0, 16), min_size=2, max_size=2)))
        inner.append(Interval.of(lo + (hi - lo) * Fraction(a, 16), lo + (hi - lo) * Fraction(b, 16)))
    ctx = IntervalContext(64)
    outer_lo, outer_hi = eval_poly(p, box, ctx).fractions()
    inner_lo, inner_hi = eval_poly(p, IntervalBox.of(inner), ctx).fractions()
    # endpoint rounding of exp may differ by an ulp between the two boxes
    magnitude = sum(
        max(abs(x) for x in eval_poly(CanonicalPoly((m,)), box, ctx).fractions()) for m in p.monomials
    )
    slack = Fraction(1, 2 ** 50) * (1 + magnitude)
    assert outer_lo - slack <= inner_lo
    assert inner_hi <= outer_hi + slack


@given(polys(tower=0, max_coeff=3), polys(tower=0, max_coeff=3), dyadic(), dyadic())
@settings(max_examples=150, deadline=None)
def test_exp_of_a_sum_agrees_with_the_product_of_exps(a, b, u, v):
    box = IntervalBox.of([Interval.point(u), Interval.point(v)])
    ctx = IntervalContext(64)
    joint = eval_poly(exp_of(a + b), box, ctx)
    split = eval_poly(exp_of(a) * exp_of(b), box, ctx)
    assert joint.overlaps(split)


def test_evaluation_needs_every_coordinate():
    with pytest.raises(MissingVariableError):
        eval_poly(variable(2) * exp_of(variable(1)), IntervalBox.of([Interval.of(0, 1)]))


@pytest.mark.parametrize("lo, hi, expected", [
    (3, 4, Truth3.TRUE),
    (0, 1, Truth3.FALSE),
    (1, 3, Truth3.UNKNOWN),
])
def test_formula_truth(lo, hi, expected):
    box = IntervalBox.of([Interval.of(lo, hi)])
    assert eval_formula(parse_formula("x1 > 2"), box) is expected


def test_formula_connectives():
    box = IntervalBox.of([Interval.of(1, 3)])
    assert eval_formula(parse_formula("x1 > 2 | x1 < 5"), box) is Truth3.TRUE
    assert eval_formula(parse_formula("x1 > 2 & x1 > 5"), box) is Truth3.FALSE
    assert eval_formula(parse_formula("!(x1 > 2)"), box) is Truth3.UNKNOWN
    assert eval_formula(parse_formula("x1 = x1"), box) is Truth3.TRUE
    assert eval_formula(parse_formula("x1 = 0"), IntervalBox.of([Interval.point(0)])) is Truth3.TRUE
    assert eval_formula(parse_formula("x1 != 0"), box) is Truth3.TRUE


def test_truth3_tables():
    t, f, u = Truth3.TRUE, Truth3.FALSE, Truth3.UNKNOWN
    assert (t & u, f & u, u & u) == (u, f, u)
    assert (t | u, f | u, u | u) == (t, u, u)
    assert (~t, ~f, ~u) == (f, t, u)
