"""
Quantifier-free constraint formulas over exponential polynomials.

Atoms keep their sides in canonical form, so syntactically different but
ring-equal sides compare equal and print identically.
"""
from dataclasses import dataclass
from enum import Enum
from typing import FrozenSet, Tuple, Union

from exppoly.calculus import variables
from exppoly.canonical import CanonicalPoly, normalize
from exppoly.terms import ExpTerm


class Relation(str, Enum):
    EQ = "="
    NE = "!="
    LT = "<"
    LE = "<="


@dataclass(frozen=True)
class Atom:
    lhs: CanonicalPoly
    relation: Relation
    rhs: CanonicalPoly

    @classmethod
    def build(cls, lhs: Union[ExpTerm, CanonicalPoly], relation: Relation, rhs: Union[ExpTerm, CanonicalPoly]) -> "Atom":
        return cls(normalize(lhs), Relation(relation), normalize(rhs))


@dataclass(frozen=True)
class And:
    operands: Tuple["Formula", ...]


@dataclass(frozen=True)
class Or:
    operands: Tuple["Formula", ...]


@dataclass(frozen=True)
class Not:
    operand: "Formula"


Formula = Union[Atom, And, Or, Not]


def conjunction(formulas) -> Formula:
    """AND of a non-empty sequence, flattening nested conjunctions"""
    flat = []
    for formula in formulas:
        if isinstance(formula, And):
            flat.extend(formula.operands)
        else:
            flat.append(formula)
    if not flat:
        raise ValueError("empty conjunction")
    return flat[0] if len(flat) == 1 else And(tuple(flat))


def atoms(formula: Formula) -> Tuple[Atom, ...]:
    if isinstance(formula, Atom):
        return (formula,)
    if isinstance(formula, Not):
        return atoms(formula.operand)
    found = ()
    for operand in formula.operands:
        found += atoms(operand)
    return found


def formula_variables(formula: Formula) -> FrozenSet[int]:
    found = frozenset()
    for atom in atoms(formula):
        found |= variables(atom.lhs) | variables(atom.rhs)
    return found
