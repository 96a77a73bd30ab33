"""
Krawczyk operator with midpoint-inverse preconditioning.

    K(X) = m - Y f(m) + (I - Y J(X)) (X - m)

Y is any real matrix; it is computed in floating point with numpy and then
used exactly, so the inclusion properties hold regardless of its accuracy:
every root of f in X lies in K(X), and K(X) strictly inside X proves a unique
root in X with J nonsingular on X.
"""
import logging
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import mpmath.libmp as mlib
import numpy as np

from interval.arith import Interval, IntervalBox, IntervalContext
from interval.evaluate import PolyEvaluator
from khovanskii.system import KhovanskiiSystem

logger = logging.getLogger(__name__)

IntervalMatrix = List[List[Interval]]


@dataclass(frozen=True)
class KrawczykStep:
    box: IntervalBox
    values: Tuple[Interval, ...]
    image: Optional[IntervalBox]
    contracted: bool
    excluded: bool
    narrowed: Optional[IntervalBox]


def jacobian_enclosure(system: KhovanskiiSystem, box: IntervalBox, ctx: IntervalContext) -> IntervalMatrix:
    evaluator = PolyEvaluator(box, ctx)
    return [[evaluator(entry) for entry in row] for row in system.jacobian]


def preconditioner(matrix: IntervalMatrix) -> Optional[np.ndarray]:
    """Float inverse of the midpoint matrix, or None when it is unusable"""
    mid = np.array([[entry.midpoint_float() for entry in row] for row in matrix], dtype=float)
    if not np.all(np.isfinite(mid)):
        return None
    try:
        inverse = np.linalg.inv(mid)
    except np.linalg.LinAlgError:
        return None
    if not np.all(np.isfinite(inverse)):
        return None
    return inverse


def _dot(ctx: IntervalContext, row: Sequence[Interval], column: Sequence[Interval]) -> Interval:
    total = Interval(mlib.fzero, mlib.fzero)
    for a, b in zip(row, column):
        total = ctx.add(total, ctx.mul(a, b))
    return total


def krawczyk_step(system: KhovanskiiSystem, box: IntervalBox, ctx: IntervalContext) -> KrawczykStep:
    n = system.n
    evaluator = PolyEvaluator(box, ctx)
    values = tuple(evaluator(f) for f in system.equations)
    if any(not value.contains_zero() for value in values):
        return KrawczykStep(box, values, None, False, True, None)

    if not box.is_finite:
        return KrawczykStep(box, values, None, False, False, box)

    center = ctx.midpoint_box(box)
    center_box = IntervalBox(tuple(Interval(c, c) for c in center))
    center_values = [PolyEvaluator(center_box, ctx)(f) for f in system.equations]
    jac = [[evaluator(entry) for entry in row] for row in system.jacobian]

    inverse = preconditioner(jacobian_enclosure(system, center_box, ctx))
    if inverse is None:
        logger.debug(f"singular midpoint Jacobian on {box}")
        return KrawczykStep(box, values, None, False, False, box)
    y = [[Interval.point(float(inverse[i, j])) for j in range(n)] for i in range(n)]

    offsets = [ctx.sub(box[j], Interval(center[j], center[j])) for j in range(n)]
    image = []
    for i in range(n):
        residual = _dot(ctx, y[i], center_values)
        correction = Interval(mlib.fzero, mlib.fzero)
        for j in range(n):
            # (I - Y J)_ij
            yj = _dot(ctx, y[i], [jac[k][j] for k in range(n)])
            entry = ctx.sub(Interval(mlib.fone, mlib.fone), yj) if i == j else ctx.neg(yj)
            correction = ctx.add(correction, ctx.mul(entry, offsets[j]))
        image.append(ctx.add(ctx.sub(Interval(center[i], center[i]), residual), correction))
    image_box = IntervalBox(tuple(image))

    narrowed = ctx.intersect_box(image_box, box)
    if narrowed is None:
        return KrawczykStep(box, values, image_box, False, True, None)
    contracted = image_box.is_interior(box)
    return KrawczykStep(box, values, image_box, contracted, False, narrowed)
