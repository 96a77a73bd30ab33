"""
Bounded enumeration of Khovanskii systems over Z^E.

The bound describes a grammar, level by level:

- an argument of tower height at most t is a nonzero sum of up to
  `max_monomials` distinct shapes of height at most t, with coefficients
  of magnitude below 2^max_coeff_bits and either sign;
- a shape of height 0 is a power product of degree at most `max_degree`;
- a shape of height at most t + 1 is a power product times nothing or
  times E(a) for one argument a of height at most t, normalized, so
  E(x1 + 1) becomes the two atoms E(x1)E(1) and E(2*x1) becomes E(x1)^2.

Polynomials are built like arguments from the shapes of height at most
`max_tower`, and are kept only when primitive with a positive leading (last
canonical) coefficient, so every polynomial is listed once up to sign and
content. A system is an unordered set of n such polynomials with a
structurally nonzero Jacobian determinant. The stream is ordered by n, then
tower height, then generation order, and is identical on every run.
"""
import itertools
import logging
from functools import reduce
from math import gcd
from typing import Iterable, Iterator, List, Sequence, Tuple

from app.schemas.schemas import EnumerationBound
from exppoly.canonical import ONE, CanonicalPoly, assemble, exp_of, mul, variable
from khovanskii.system import KhovanskiiSystem

logger = logging.getLogger(__name__)

Choice = Tuple[Tuple[CanonicalPoly, ...], Tuple[int, ...]]


def coefficients(bits: int) -> List[int]:
    limit = 2 ** bits
    values = []
    for magnitude in range(1, limit):
        values.extend([magnitude, -magnitude])
    return values


def power_products(n: int, max_degree: int) -> List[CanonicalPoly]:
    products = [ONE]
    for degree in range(1, max_degree + 1):
        for indices in itertools.combinations_with_replacement(range(1, n + 1), degree):
            term = ONE
            for index in indices:
                term = mul(term, variable(index))
            products.append(term)
    return products


def _by_shape(polys: Iterable[CanonicalPoly]) -> List[CanonicalPoly]:
    unique = {p.monomials[0].shape: p for p in polys}
    return sorted(unique.values(), key=lambda p: p.sort_key)


def _choices(pool: Sequence[CanonicalPoly], bound: EnumerationBound) -> Iterator[Choice]:
    # pool is sorted, so the last chosen shape is the leading monomial
    values = coefficients(bound.max_coeff_bits)
    for size in range(1, bound.max_monomials + 1):
        for chosen in itertools.combinations(pool, size):
            for coeffs in itertools.product(values, repeat=size):
                yield chosen, coeffs


def _assemble(chosen: Tuple[CanonicalPoly, ...], coeffs: Tuple[int, ...]) -> CanonicalPoly:
    return assemble({p.monomials[0].shape: c for p, c in zip(chosen, coeffs)})


def arguments(n: int, tower: int, bound: EnumerationBound) -> List[CanonicalPoly]:
    """Every argument of tower height at most `tower`, any sign and content"""
    pool = shapes(n, tower, bound)
    return [_assemble(chosen, coeffs) for chosen, coeffs in _choices(pool, bound)]


def shapes(n: int, max_tower: int, bound: EnumerationBound) -> List[CanonicalPoly]:
    """Monic single-monomial shapes of tower height at most max_tower"""
    base = power_products(n, bound.max_degree)
    if max_tower == 0:
        return _by_shape(base)
    atoms = _by_shape(exp_of(argument) for argument in arguments(n, max_tower - 1, bound))
    level = _by_shape(base + [mul(b, atom) for b in base for atom in atoms])
    logger.debug(f"{len(level)} shapes of tower height <= {max_tower} in {n} variables")
    return level


def polynomials(n: int, bound: EnumerationBound) -> List[CanonicalPoly]:
    """Primitive sign-normalised polynomials over the shapes, in generation order"""
    pool = shapes(n, bound.max_tower, bound)
    result = []
    for chosen, coeffs in _choices(pool, bound):
        if coeffs[-1] < 0 or reduce(gcd, coeffs) != 1:
            continue
        if len(chosen) == 1 and chosen[0].is_constant:
            continue
        result.append(_assemble(chosen, coeffs))
    logger.debug(f"{len(result)} polynomials in {n} variables from {len(pool)} shapes")
    return result


def enumerate_systems(bound: EnumerationBound) -> Iterator[KhovanskiiSystem]:
    """Every system within bound, each exactly once"""
    for n in range(1, bound.max_n + 1):
        pool = polynomials(n, bound)
        for tower in range(bound.max_tower + 1):
            candidates = [p for p in pool if p.height <= tower]
            for equations in itertools.combinations(candidates, n):
                if max(p.height for p in equations) != tower:
                    continue
                system = KhovanskiiSystem(tuple(equations), tuple(f"x{i}" for i in range(1, n + 1)))
                if system.determinant.is_zero:
                    continue
                yield system


def count_systems(bound: EnumerationBound) -> int:
    return sum(1 for _ in enumerate_systems(bound))


def system_key(system: KhovanskiiSystem) -> Tuple:
    return tuple(p.sort_key for p in system.equations)
