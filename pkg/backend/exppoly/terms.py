"""
Raw expression trees for exponential polynomials.

An ExpTerm is what the parser produces and what `normalize` consumes. Nodes
are immutable; integer constants are arbitrary precision.
"""
from dataclasses import dataclass
from typing import FrozenSet, Tuple


class ExpTerm:
    """Base class of expression nodes"""
    __slots__ = ()


@dataclass(frozen=True)
class Const(ExpTerm):
    value: int


@dataclass(frozen=True)
class Var(ExpTerm):
    index: int

    def __post_init__(self):
        if self.index < 1:
            raise ValueError(f"variable index must be >= 1, got {self.index}")


@dataclass(frozen=True)
class Sum(ExpTerm):
    terms: Tuple[ExpTerm, ...]


@dataclass(frozen=True)
class Prod(ExpTerm):
    factors: Tuple[ExpTerm, ...]


@dataclass(frozen=True)
class Pow(ExpTerm):
    base: ExpTerm
    exponent: int

    def __post_init__(self):
        if self.exponent < 0:
            raise ValueError(f"power exponent must be >= 0, got {self.exponent}")


@dataclass(frozen=True)
class Exp(ExpTerm):
    argument: ExpTerm


def negate(term: ExpTerm) -> ExpTerm:
    """-t as a product with the constant -1"""
    if isinstance(term, Const):
        return Const(-term.value)
    return Prod((Const(-1), term))


def children(term: ExpTerm) -> Tuple[ExpTerm, ...]:
    if isinstance(term, Sum):
        return term.terms
    if isinstance(term, Prod):
        return term.factors
    if isinstance(term, Pow):
        return (term.base,)
    if isinstance(term, Exp):
        return (term.argument,)
    return ()


def tower_height(term: ExpTerm) -> int:
    """Maximum nesting of exp-nodes"""
    inner = max((tower_height(child) for child in children(term)), default=0)
    return inner + 1 if isinstance(term, Exp) else inner


def term_depth(term: ExpTerm) -> int:
    return 1 + max((term_depth(child) for child in children(term)), default=0)


def term_variables(term: ExpTerm) -> FrozenSet[int]:
    if isinstance(term, Var):
        return frozenset((term.index,))
    found = frozenset()
    for child in children(term):
        found |= term_variables(child)
    return found
