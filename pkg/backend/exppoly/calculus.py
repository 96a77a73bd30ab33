import math
from collections import defaultdict
from dataclasses import dataclass
from typing import Dict, FrozenSet, Mapping

from app.core.exceptions import MissingVariableError
from exppoly.canonical import (
    DEFAULT_LIMITS, CanonicalPoly, Limits, accumulate, assemble, constant, exp_of, mul, power,
    variable,
)


@dataclass(frozen=True)
class Complexity:
    tower_height: int
    monomial_count: int
    coefficient_bits: int

    def as_tuple(self):
        return (self.tower_height, self.monomial_count, self.coefficient_bits)


def variables(p: CanonicalPoly) -> FrozenSet[int]:
    """Indices of all variables occurring in p, including inside exp-atoms"""
    found = set()
    for monomial in p.monomials:
        found.update(index for index, _ in monomial.powers)
        for argument, _ in monomial.atoms:
            found.update(variables(argument))
    return frozenset(found)


def substitute(
    p: CanonicalPoly,
    assignment: Mapping[int, CanonicalPoly],
    limits: Limits = DEFAULT_LIMITS,
) -> CanonicalPoly:
    """Ring homomorphism x_i -> assignment[i], extended through E"""
    cache: Dict[CanonicalPoly, CanonicalPoly] = {}

    def visit(poly: CanonicalPoly) -> CanonicalPoly:
        if poly in cache:
            return cache[poly]
        terms = defaultdict(int)
        for monomial in poly.monomials:
            term = constant(monomial.coefficient)
            for index, exponent in monomial.powers:
                if index not in assignment:
                    raise MissingVariableError(f"no value assigned to x{index}")
                term = mul(term, power(assignment[index], exponent, limits), limits)
            for argument, multiplicity in monomial.atoms:
                term = mul(term, power(exp_of(visit(argument), limits), multiplicity, limits), limits)
            accumulate(terms, term)
        result = assemble(terms, limits)
        cache[poly] = result
        return result

    return visit(p)


def rename_variables(p: CanonicalPoly, mapping: Mapping[int, int]) -> CanonicalPoly:
    """Rename variables by index; indices missing from mapping are kept"""
    assignment = {index: variable(mapping.get(index, index)) for index in variables(p)}
    return substitute(p, assignment)


def shift_variables(p: CanonicalPoly, offset: int) -> CanonicalPoly:
    return rename_variables(p, {index: index + offset for index in variables(p)})


def partial_derivative(p: CanonicalPoly, i: int, limits: Limits = DEFAULT_LIMITS) -> CanonicalPoly:
    """d/dx_i with (E(u))' = u' E(u)"""
    if i < 1:
        raise ValueError(f"variable index must be >= 1, got {i}")
    cache: Dict[CanonicalPoly, CanonicalPoly] = {}

    def visit(poly: CanonicalPoly) -> CanonicalPoly:
        if poly in cache:
            return cache[poly]
        terms = defaultdict(int)
        for monomial in poly.monomials:
            exponents = dict(monomial.powers)
            if i in exponents:
                e = exponents[i]
                lowered = tuple((index, (k - 1) if index == i else k) for index, k in monomial.powers)
                lowered = tuple((index, k) for index, k in lowered if k)
                terms[(lowered, monomial.atoms)] += monomial.coefficient * e
            whole = None
            for argument, multiplicity in monomial.atoms:
                inner = visit(argument)
                if inner.is_zero:
                    continue
                if whole is None:
                    whole = CanonicalPoly((monomial,))
                accumulate(terms, mul(whole, inner, limits), multiplicity)
        result = assemble(terms, limits)
        cache[poly] = result
        return result

    return visit(p)


def _coefficient_bits(p: CanonicalPoly) -> int:
    bits = 0
    for monomial in p.monomials:
        bits = max(bits, abs(monomial.coefficient).bit_length())
        for argument, _ in monomial.atoms:
            bits = max(bits, _coefficient_bits(argument))
    return bits


def complexity(p: CanonicalPoly) -> Complexity:
    return Complexity(p.height, len(p.monomials), _coefficient_bits(p))


def evaluate_float(p: CanonicalPoly, point: Mapping[int, float]) -> float:
    """Plain floating-point value, for diagnostics only (no rounding control)"""
    total = 0.0
    for monomial in p.monomials:
        term = float(monomial.coefficient)
        for index, exponent in monomial.powers:
            if index not in point:
                raise MissingVariableError(f"no value assigned to x{index}")
            term *= point[index] ** exponent
        exponent_sum = sum(k * evaluate_float(argument, point) for argument, k in monomial.atoms)
        total += term * math.exp(exponent_sum) if monomial.atoms else term
    return total
