"""
Reference values computed independently of the library: exact Taylor
partial sums, mpmath bisection and direct mpmath evaluation of canonical
polynomials.
"""
import itertools
from fractions import Fraction
from functools import reduce
from math import factorial, gcd
from typing import Callable, Iterator, List, Mapping, Set, Tuple

import mpmath
import mpmath.libmp as mlib

from exppoly.canonical import CanonicalPoly, normalize
from interval.arith import Interval
from syntax.parser import parse_term

WORKING_PREC = 192


def e_bounds(terms: int = 30) -> Tuple[Fraction, Fraction]:
    """sum_{k<terms} 1/k! <= e <= that sum + 2/terms!"""
    partial = sum(Fraction(1, factorial(k)) for k in range(terms))
    return partial, partial + Fraction(2, factorial(terms))


def to_fraction(x) -> Fraction:
    # mpf(x) would round an existing mpf to the ambient precision
    raw = x._mpf_ if isinstance(x, mpmath.mpf) else mpmath.mpf(x)._mpf_
    p, q = mlib.to_rational(raw)
    return Fraction(p, q)


def bisect(f: Callable, lo, hi, tol: str = "1e-40"):
    with mpmath.workprec(WORKING_PREC):
        a, b = mpmath.mpf(lo), mpmath.mpf(hi)
        fa, fb = f(a), f(b)
        if fa == 0:
            return a
        if fb == 0:
            return b
        assert (fa < 0) != (fb < 0), "no sign change"
        while b - a > mpmath.mpf(tol):
            m = (a + b) / 2
            fm = f(m)
            if fm == 0:
                return m
            if (fa < 0) == (fm < 0):
                a, fa = m, fm
            else:
                b = m
        return (a + b) / 2


def e_value():
    with mpmath.workprec(WORKING_PREC):
        return +mpmath.e


def omega():
    return bisect(lambda x: x * mpmath.exp(x) - 1, 0, 1)


def exp_minus_x_minus_2_roots() -> List:
    f = lambda x: mpmath.exp(x) - x - 2  # noqa: E731
    return [bisect(f, -3, 0), bisect(f, 0, 3)]


def sampled_roots(f: Callable, lo: float, hi: float, samples: int = 4000) -> List:
    """Roots located by sign changes on a uniform grid, then bisected"""
    roots = []
    with mpmath.workprec(WORKING_PREC):
        step = (mpmath.mpf(hi) - mpmath.mpf(lo)) / samples
        previous_x = mpmath.mpf(lo)
        previous = f(previous_x)
        for i in range(1, samples + 1):
            x = mpmath.mpf(lo) + i * step
            value = f(x)
            if previous == 0:
                roots.append(previous_x)
            elif (previous < 0) != (value < 0) and value != 0:
                roots.append(bisect(f, previous_x, x))
            previous_x, previous = x, value
        if previous == 0:
            roots.append(previous_x)
    return roots


def mp(x):
    if isinstance(x, Fraction):
        return mpmath.mpf(x.numerator) / x.denominator
    return mpmath.mpf(x)


def evaluate(p: CanonicalPoly, point: Mapping[int, object]):
    """Value of p at point (index -> number) in mpmath at WORKING_PREC"""
    with mpmath.workprec(WORKING_PREC):
        total = mpmath.mpf(0)
        for monomial in p.monomials:
            term = mpmath.mpf(monomial.coefficient)
            for index, exponent in monomial.powers:
                term *= mp(point[index]) ** exponent
            for argument, multiplicity in monomial.atoms:
                term *= mpmath.exp(multiplicity * evaluate(argument, point))
            total += term
        return total


def encloses(interval: Interval, value, slack: Fraction = Fraction(1, 10 ** 30)) -> bool:
    lo, hi = interval.fractions()
    v = to_fraction(value)
    margin = slack * (1 + abs(v))
    return lo - margin <= v <= hi + margin


def distance(interval: Interval, value) -> Fraction:
    lo, hi = interval.fractions()
    v = to_fraction(value)
    if v < lo:
        return lo - v
    if v > hi:
        return v - hi
    return Fraction(0)


def grammar_by_text(max_tower: int, max_coeff_bits: int, max_monomials: int) -> Set[CanonicalPoly]:
    """
    Primitive sign-normalised polynomials in x1 with degree at most 1 per
    monomial, spelled out as source text and parsed one by one.
    """
    values = [c for k in range(1, 2 ** max_coeff_bits) for c in (k, -k)]

    def sums(monomials: List[str]) -> Iterator[Tuple[int, str]]:
        for size in range(1, max_monomials + 1):
            for chosen in itertools.combinations(monomials, size):
                for coeffs in itertools.product(values, repeat=size):
                    yield size, " + ".join(f"({c})*({m})" for c, m in zip(coeffs, chosen))

    monomials = ["1", "x1"]
    for _ in range(max_tower):
        atoms = [f"E({text})" for _, text in sums(monomials)]
        monomials = ["1", "x1"] + atoms + [f"x1*{atom}" for atom in atoms]
    found = set()
    for size, text in sums(monomials):
        p = normalize(parse_term(text))
        if len(p.monomials) != size or p.is_constant:
            continue
        coeffs = [m.coefficient for m in p.monomials]
        if coeffs[-1] < 0 or reduce(gcd, coeffs) != 1:
            continue
        found.add(p)
    return found
