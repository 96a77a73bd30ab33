"""
System constructions behind the closure calculus.

Coordinate 1 of every built system is the number it witnesses: augment_log
puts the new logarithm variable first, and combine puts the result variable
z first, followed by the variables of the operand systems.
"""
import logging
from enum import Enum
from typing import Optional

from app.core.exceptions import ArityError
from exppoly.calculus import shift_variables
from exppoly.canonical import ONE, CanonicalPoly, exp_of, mul, variable
from khovanskii.system import KhovanskiiSystem

logger = logging.getLogger(__name__)


class CombineOp(str, Enum):
    SUM = "sum"
    PRODUCT = "product"
    INVERSE = "inverse"
    EXP = "exp"
    NEG = "neg"

    @property
    def binary(self) -> bool:
        return self in (CombineOp.SUM, CombineOp.PRODUCT)


def _fresh_log_name(names) -> str:
    if "y" not in names:
        return "y"
    k = 2
    while f"y{k}" in names:
        k += 1
    return f"y{k}"


def augment_log(system: KhovanskiiSystem) -> KhovanskiiSystem:
    """
    Add y with E(y) = x_1 in front of the system.

    The Jacobian of the result is block triangular, so its determinant is
    E(y) times the (shifted) determinant of the input.
    """
    shifted = tuple(shift_variables(f, 1) for f in system.equations)
    first = exp_of(variable(1)) - variable(2)
    names = (_fresh_log_name(system.names),) + system.names
    return KhovanskiiSystem((first,) + shifted, names)


def _new_equation(op: CombineOp, u: CanonicalPoly, v: Optional[CanonicalPoly]) -> CanonicalPoly:
    z = variable(1)
    if op is CombineOp.SUM:
        return z - (u + v)
    if op is CombineOp.PRODUCT:
        return z - mul(u, v)
    if op is CombineOp.INVERSE:
        return mul(z, u) - 1
    if op is CombineOp.EXP:
        return z - exp_of(u)
    return z + u


def determinant_factor(op: CombineOp) -> CanonicalPoly:
    """d(new equation)/dz in the combined numbering; u is variable 2"""
    return variable(2) if CombineOp(op) is CombineOp.INVERSE else ONE


def combine(
    sa: KhovanskiiSystem,
    sb: Optional[KhovanskiiSystem],
    op: CombineOp,
) -> KhovanskiiSystem:
    """
    Witness system for op applied to the first coordinates of sa and sb.

    Variables: z = 1, sa's variables 2..na+1, sb's after them. The new
    equation comes first; det = factor * det(sa) * det(sb) with factor u for
    inverse and 1 otherwise.
    """
    op = CombineOp(op)
    if op.binary and sb is None:
        raise ArityError(f"{op.value} needs two systems")
    if not op.binary:
        sb = None
    na = sa.n
    u = variable(2)
    equations = [shift_variables(f, 1) for f in sa.equations]
    v = None
    if sb is not None:
        v = variable(na + 2)
        equations.extend(shift_variables(f, na + 1) for f in sb.equations)
    first = _new_equation(op, u, v)
    result = KhovanskiiSystem.build([first] + equations)
    logger.debug(f"combine {op.value}: {sa.n} + {sb.n if sb else 0} -> {result.n} variables")
    return result
