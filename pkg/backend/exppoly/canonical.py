"""
Canonical form of exponential polynomials over Z^E.

A CanonicalPoly is a sorted tuple of monomials. Each monomial is an integer
coefficient times a power product of variables times a product of exp-atoms
E(q)^k, where q is itself canonical. Two values are structurally equal iff
they are equal as elements of the commutative ring Z[variables, atoms].

E is split over sums as follows: every monomial c*m of the argument with
c > 0 becomes the atom E(m)^c with m monic; the monomials with negative
coefficients stay together as a single atom E(rest). E(0) is 1. Under this
rule E(a)E(a) and E(2a) share a normal form, while E(a)E(-a) does not reduce
to 1; denotational equality in those cases is settled numerically.
"""
import logging
from collections import defaultdict
from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, Iterable, Optional, Tuple

from app.core.config import settings
from app.core.exceptions import ResourceLimitExceeded
from exppoly.terms import Const, Exp, ExpTerm, Pow, Prod, Sum, Var

logger = logging.getLogger(__name__)

Powers = Tuple[Tuple[int, int], ...]
Atoms = Tuple[Tuple["CanonicalPoly", int], ...]
Shape = Tuple[Powers, Atoms]


@dataclass(frozen=True)
class Limits:
    max_depth: int = field(default_factory=lambda: settings.MAX_DEPTH)
    max_monomials: int = field(default_factory=lambda: settings.MAX_MONOMIALS)


DEFAULT_LIMITS = Limits()


@dataclass(frozen=True)
class Monomial:
    coefficient: int
    powers: Powers = ()
    atoms: Atoms = ()

    @cached_property
    def degree(self) -> int:
        return sum(exponent for _, exponent in self.powers)

    @cached_property
    def shape_key(self) -> tuple:
        # graded lex on variables, then recursively on atom arguments
        return (
            self.degree,
            self.powers,
            tuple((argument.sort_key, multiplicity) for argument, multiplicity in self.atoms),
        )

    @property
    def shape(self) -> Shape:
        return (self.powers, self.atoms)

    @cached_property
    def height(self) -> int:
        return max((argument.height + 1 for argument, _ in self.atoms), default=0)

    def __hash__(self):
        return self._hash

    @cached_property
    def _hash(self) -> int:
        return hash((self.coefficient, self.powers, self.atoms))


@dataclass(frozen=True)
class CanonicalPoly:
    monomials: Tuple[Monomial, ...] = ()

    @cached_property
    def sort_key(self) -> tuple:
        return tuple((monomial.shape_key, monomial.coefficient) for monomial in self.monomials)

    @cached_property
    def height(self) -> int:
        return max((monomial.height for monomial in self.monomials), default=0)

    @property
    def is_zero(self) -> bool:
        return not self.monomials

    @property
    def is_constant(self) -> bool:
        return self.is_zero or (len(self.monomials) == 1 and self.monomials[0].shape == ((), ()))

    def constant_value(self) -> Optional[int]:
        if self.is_zero:
            return 0
        if self.is_constant:
            return self.monomials[0].coefficient
        return None

    def __hash__(self):
        return self._hash

    @cached_property
    def _hash(self) -> int:
        return hash(self.monomials)

    def __add__(self, other):
        return add(self, _coerce(other))

    __radd__ = __add__

    def __sub__(self, other):
        return add(self, neg(_coerce(other)))

    def __rsub__(self, other):
        return add(_coerce(other), neg(self))

    def __mul__(self, other):
        return mul(self, _coerce(other))

    __rmul__ = __mul__

    def __neg__(self):
        return neg(self)

    def __pow__(self, exponent: int):
        return power(self, exponent)

    def __repr__(self):
        from syntax.printer import print_poly
        return f"CanonicalPoly({print_poly(self)!r})"


ZERO = CanonicalPoly()
ONE = CanonicalPoly((Monomial(1),))


def _coerce(value) -> CanonicalPoly:
    if isinstance(value, CanonicalPoly):
        return value
    if isinstance(value, int):
        return constant(value)
    raise TypeError(f"cannot combine CanonicalPoly with {type(value).__name__}")


def constant(value: int) -> CanonicalPoly:
    return CanonicalPoly((Monomial(value),)) if value else ZERO


def variable(index: int) -> CanonicalPoly:
    if index < 1:
        raise ValueError(f"variable index must be >= 1, got {index}")
    return CanonicalPoly((Monomial(1, ((index, 1),)),))


def _atom_order(atoms: Dict["CanonicalPoly", int]) -> Atoms:
    return tuple(sorted(((arg, k) for arg, k in atoms.items() if k), key=lambda item: item[0].sort_key))


def assemble(terms: Dict[Shape, int], limits: Limits = DEFAULT_LIMITS) -> CanonicalPoly:
    """Build a canonical value from shape -> coefficient, dropping zeros"""
    monomials = [Monomial(c, powers, atoms) for (powers, atoms), c in terms.items() if c]
    if len(monomials) > limits.max_monomials:
        raise ResourceLimitExceeded(
            f"monomial count {len(monomials)} exceeds limit {limits.max_monomials}"
        )
    monomials.sort(key=lambda m: m.shape_key)
    return CanonicalPoly(tuple(monomials))


def accumulate(target: Dict[Shape, int], poly: CanonicalPoly, scale: int = 1) -> None:
    for monomial in poly.monomials:
        target[monomial.shape] += scale * monomial.coefficient


def add(p: CanonicalPoly, q: CanonicalPoly, limits: Limits = DEFAULT_LIMITS) -> CanonicalPoly:
    if p.is_zero:
        return q
    if q.is_zero:
        return p
    terms: Dict[Shape, int] = defaultdict(int)
    accumulate(terms, p)
    accumulate(terms, q)
    return assemble(terms, limits)


def sum_polys(polys: Iterable[CanonicalPoly], limits: Limits = DEFAULT_LIMITS) -> CanonicalPoly:
    terms: Dict[Shape, int] = defaultdict(int)
    for poly in polys:
        accumulate(terms, poly)
    return assemble(terms, limits)


def neg(p: CanonicalPoly) -> CanonicalPoly:
    return CanonicalPoly(tuple(Monomial(-m.coefficient, m.powers, m.atoms) for m in p.monomials))


def scale(p: CanonicalPoly, factor: int) -> CanonicalPoly:
    if factor == 0:
        return ZERO
    return CanonicalPoly(tuple(Monomial(factor * m.coefficient, m.powers, m.atoms) for m in p.monomials))


def _merge_powers(a: Powers, b: Powers) -> Powers:
    merged: Dict[int, int] = dict(a)
    for index, exponent in b:
        merged[index] = merged.get(index, 0) + exponent
    return tuple(sorted(merged.items()))


def _merge_atoms(a: Atoms, b: Atoms) -> Atoms:
    if not a:
        return b
    if not b:
        return a
    merged: Dict[CanonicalPoly, int] = dict(a)
    for argument, multiplicity in b:
        merged[argument] = merged.get(argument, 0) + multiplicity
    return _atom_order(merged)


def mul(p: CanonicalPoly, q: CanonicalPoly, limits: Limits = DEFAULT_LIMITS) -> CanonicalPoly:
    if p.is_zero or q.is_zero:
        return ZERO
    if len(p.monomials) * len(q.monomials) > limits.max_monomials:
        raise ResourceLimitExceeded(
            f"product of {len(p.monomials)} x {len(q.monomials)} monomials exceeds limit {limits.max_monomials}"
        )
    terms: Dict[Shape, int] = defaultdict(int)
    for left in p.monomials:
        for right in q.monomials:
            shape = (_merge_powers(left.powers, right.powers), _merge_atoms(left.atoms, right.atoms))
            terms[shape] += left.coefficient * right.coefficient
    return assemble(terms, limits)


def product(polys: Iterable[CanonicalPoly], limits: Limits = DEFAULT_LIMITS) -> CanonicalPoly:
    result = ONE
    for poly in polys:
        result = mul(result, poly, limits)
    return result


def power(p: CanonicalPoly, exponent: int, limits: Limits = DEFAULT_LIMITS) -> CanonicalPoly:
    if exponent < 0:
        raise ValueError(f"power exponent must be >= 0, got {exponent}")
    result = ONE
    base = p
    while exponent:
        if exponent & 1:
            result = mul(result, base, limits)
        exponent >>= 1
        if exponent:
            base = mul(base, base, limits)
    return result


def monic(monomial: Monomial) -> CanonicalPoly:
    return CanonicalPoly((Monomial(1, monomial.powers, monomial.atoms),))


def exp_of(q: CanonicalPoly, limits: Limits = DEFAULT_LIMITS) -> CanonicalPoly:
    """E(q) under the splitting rule"""
    if q.is_zero:
        return ONE
    if q.height + 1 > limits.max_depth:
        raise ResourceLimitExceeded(f"tower height {q.height + 1} exceeds limit {limits.max_depth}")
    atoms: Dict[CanonicalPoly, int] = defaultdict(int)
    rest = []
    for monomial in q.monomials:
        if monomial.coefficient > 0:
            atoms[monic(monomial)] += monomial.coefficient
        else:
            rest.append(monomial)
    if rest:
        atoms[CanonicalPoly(tuple(rest))] += 1
    return CanonicalPoly((Monomial(1, (), _atom_order(atoms)),))


def normalize(term: ExpTerm, limits: Limits = DEFAULT_LIMITS) -> CanonicalPoly:
    """Canonical form of a raw expression tree"""
    if isinstance(term, CanonicalPoly):
        return term
    if isinstance(term, Const):
        return constant(term.value)
    if isinstance(term, Var):
        return variable(term.index)
    if isinstance(term, Sum):
        return sum_polys((normalize(child, limits) for child in term.terms), limits)
    if isinstance(term, Prod):
        return product((normalize(child, limits) for child in term.factors), limits)
    if isinstance(term, Pow):
        return power(normalize(term.base, limits), term.exponent, limits)
    if isinstance(term, Exp):
        return exp_of(normalize(term.argument, limits), limits)
    raise TypeError(f"not an expression node: {term!r}")
