"""Hypothesis strategies for canonical exponential polynomials"""
from fractions import Fraction

from hypothesis import strategies as st

from exppoly.canonical import ZERO, constant, exp_of, variable
from exppoly.terms import Const, Exp, Pow, Prod, Sum, Var
from khovanskii.system import KhovanskiiSystem


@st.composite
def linear_args(draw, n: int = 2):
    """Small affine argument a*x_i + b, keeping exp values moderate"""
    index = draw(st.integers(1, n))
    return constant(draw(st.integers(-2, 2))) * variable(index) + draw(st.integers(-2, 2))


@st.composite
def polys(draw, n: int = 2, tower: int = 1, max_terms: int = 3, max_coeff: int = 5, deep_args: bool = False):
    total = ZERO
    for _ in range(draw(st.integers(0, max_terms))):
        term = constant(draw(st.integers(-max_coeff, max_coeff)))
        for index in range(1, n + 1):
            term = term * variable(index) ** draw(st.integers(0, 2))
        if tower > 0 and draw(st.booleans()):
            if deep_args:
                argument = draw(polys(n, tower - 1, 2, 3, deep_args=True))
            else:
                argument = draw(linear_args(n))
            term = term * exp_of(argument)
        total = total + term
    return total


def raw_terms(n: int = 2, max_leaves: int = 8):
    """Unnormalized expression trees"""
    leaves = st.one_of(st.integers(-5, 5).map(Const), st.integers(1, n).map(Var))

    def extend(children):
        return st.one_of(
            st.lists(children, min_size=1, max_size=3).map(lambda items: Sum(tuple(items))),
            st.lists(children, min_size=1, max_size=3).map(lambda items: Prod(tuple(items))),
            st.tuples(children, st.integers(0, 2)).map(lambda pair: Pow(*pair)),
            children.map(Exp),
        )

    return st.recursive(leaves, extend, max_leaves=max_leaves)


@st.composite
def square_systems(draw, max_n: int = 3, tower: int = 2, max_coeff: int = 5):
    n = draw(st.integers(1, max_n))
    equations = [draw(polys(n, tower, max_terms=3, max_coeff=max_coeff, deep_args=True)) for _ in range(n)]
    return KhovanskiiSystem.build(equations)


def dyadic(lo: int = -24, hi: int = 24, denominator: int = 8):
    return st.integers(lo, hi).map(lambda k: Fraction(k, denominator))
