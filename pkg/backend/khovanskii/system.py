"""
Khovanskii systems: n exponential polynomials in n variables with their
symbolic Jacobian and its determinant.
"""
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Optional, Sequence, Tuple

from app.core.exceptions import ArityError
from exppoly.calculus import partial_derivative, variables
from exppoly.canonical import ONE, ZERO, CanonicalPoly, add, mul, neg, normalize

Matrix = Tuple[Tuple[CanonicalPoly, ...], ...]


def determinant(matrix: Matrix) -> CanonicalPoly:
    """Cofactor expansion along the first row, memoized on column subsets"""
    n = len(matrix)
    if n == 0:
        raise ValueError("determinant of an empty matrix")
    cache: Dict[Tuple[int, FrozenSet[int]], CanonicalPoly] = {}

    def minor(row: int, columns: Tuple[int, ...]) -> CanonicalPoly:
        if row == n:
            return ONE
        key = (row, frozenset(columns))
        if key in cache:
            return cache[key]
        total = ZERO
        for position, column in enumerate(columns):
            entry = matrix[row][column]
            if entry.is_zero:
                continue
            rest = columns[:position] + columns[position + 1:]
            term = mul(entry, minor(row + 1, rest))
            total = add(total, neg(term) if position % 2 else term)
        cache[key] = total
        return total

    return minor(0, tuple(range(n)))


@dataclass(frozen=True)
class KhovanskiiSystem:
    """
    Square system f_1 = ... = f_n = 0 over Z^E.

    `names[i-1]` is the source-level name of variable i. The Jacobian and
    its determinant are computed on construction and excluded from equality.
    """
    equations: Tuple[CanonicalPoly, ...]
    names: Tuple[str, ...]
    jacobian: Matrix = field(init=False, compare=False, repr=False)
    determinant: CanonicalPoly = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        n = len(self.equations)
        if n == 0:
            raise ArityError("a system needs at least one equation")
        if len(self.names) != n:
            raise ArityError(f"system has {n} equations in {len(self.names)} variables")
        if len(set(self.names)) != n:
            raise ArityError(f"duplicate variable names in {self.names}")
        for equation in self.equations:
            stray = [index for index in variables(equation) if index > n]
            if stray:
                raise ArityError(f"variable index {max(stray)} exceeds system size {n}")
        jacobian = tuple(
            tuple(partial_derivative(f, j) for j in range(1, n + 1)) for f in self.equations
        )
        object.__setattr__(self, "jacobian", jacobian)
        object.__setattr__(self, "determinant", determinant(jacobian))

    @classmethod
    def build(cls, equations: Sequence, names: Optional[Sequence[str]] = None) -> "KhovanskiiSystem":
        polys = tuple(normalize(f) for f in equations)
        if names is None:
            names = tuple(f"x{i}" for i in range(1, len(polys) + 1))
        return cls(polys, tuple(names))

    @property
    def n(self) -> int:
        return len(self.equations)

    @property
    def tower_height(self) -> int:
        return max(f.height for f in self.equations)

    def source(self) -> str:
        from syntax.printer import print_system
        return print_system(self)

    def __str__(self):
        from syntax.printer import print_system_inline
        return print_system_inline(self)


def jacobian_det(system: KhovanskiiSystem) -> CanonicalPoly:
    return system.determinant
