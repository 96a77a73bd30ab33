from exppoly.terms import Const, Exp, ExpTerm, Pow, Prod, Sum, Var, tower_height
from exppoly.canonical import (
    ONE, ZERO, CanonicalPoly, Limits, Monomial, add, constant, exp_of, mul, neg, normalize, power,
    variable,
)
from exppoly.calculus import (
    Complexity, complexity, partial_derivative, rename_variables, shift_variables, substitute,
    variables,
)
