"""
Interval evaluation of canonical exponential polynomials and three-valued
evaluation of constraint formulas over boxes.
"""
from enum import Enum
from typing import Dict, Sequence, Tuple

import mpmath.libmp as mlib

from app.core.exceptions import MissingVariableError
from exppoly.canonical import CanonicalPoly
from interval.arith import ZERO_INTERVAL, Interval, IntervalBox, IntervalContext
from syntax.formula import And, Atom, Formula, Not, Or, Relation


class Truth3(str, Enum):
    TRUE = "true"
    FALSE = "false"
    UNKNOWN = "unknown"

    def and_(self, other: "Truth3") -> "Truth3":
        if Truth3.FALSE in (self, other):
            return Truth3.FALSE
        if self is Truth3.TRUE and other is Truth3.TRUE:
            return Truth3.TRUE
        return Truth3.UNKNOWN

    def or_(self, other: "Truth3") -> "Truth3":
        if Truth3.TRUE in (self, other):
            return Truth3.TRUE
        if self is Truth3.FALSE and other is Truth3.FALSE:
            return Truth3.FALSE
        return Truth3.UNKNOWN

    def not_(self) -> "Truth3":
        if self is Truth3.UNKNOWN:
            return self
        return Truth3.FALSE if self is Truth3.TRUE else Truth3.TRUE

    __and__ = and_
    __or__ = or_
    __invert__ = not_

    @classmethod
    def of(cls, value: bool) -> "Truth3":
        return cls.TRUE if value else cls.FALSE


class PolyEvaluator:
    """Evaluates polynomials over one box, sharing exp-atom enclosures between calls"""

    def __init__(self, box: IntervalBox, ctx: IntervalContext):
        self.box = box
        self.ctx = ctx
        self._cache: Dict[CanonicalPoly, Interval] = {}

    def variable(self, index: int) -> Interval:
        if index > len(self.box):
            raise MissingVariableError(f"box has {len(self.box)} coordinates, x{index} needs more")
        return self.box[index - 1]

    def __call__(self, p: CanonicalPoly) -> Interval:
        cached = self._cache.get(p)
        if cached is not None:
            return cached
        ctx = self.ctx
        total = ZERO_INTERVAL
        for monomial in p.monomials:
            term = Interval.point(monomial.coefficient)
            for index, exponent in monomial.powers:
                term = ctx.mul(term, ctx.pow_nat(self.variable(index), exponent))
            if monomial.atoms:
                exponent_sum = ZERO_INTERVAL
                for argument, multiplicity in monomial.atoms:
                    exponent_sum = ctx.add(exponent_sum, ctx.scale(self(argument), multiplicity))
                term = ctx.mul(term, ctx.exp(exponent_sum))
            total = ctx.add(total, term)
        self._cache[p] = total
        return total


def eval_poly(p: CanonicalPoly, box: IntervalBox, ctx: IntervalContext = IntervalContext()) -> Interval:
    return PolyEvaluator(box, ctx)(p)


def eval_many(polys: Sequence[CanonicalPoly], box: IntervalBox, ctx: IntervalContext) -> Tuple[Interval, ...]:
    evaluator = PolyEvaluator(box, ctx)
    return tuple(evaluator(p) for p in polys)


def _decide(relation: Relation, difference: Interval) -> Truth3:
    zero = mlib.fzero
    if relation in (Relation.EQ, Relation.NE):
        if not difference.contains_zero():
            verdict = Truth3.FALSE
        elif difference == ZERO_INTERVAL:
            verdict = Truth3.TRUE
        else:
            verdict = Truth3.UNKNOWN
        return verdict if relation is Relation.EQ else verdict.not_()
    if relation is Relation.LT:
        if mlib.mpf_lt(difference.hi, zero):
            return Truth3.TRUE
        if mlib.mpf_ge(difference.lo, zero):
            return Truth3.FALSE
        return Truth3.UNKNOWN
    if mlib.mpf_le(difference.hi, zero):
        return Truth3.TRUE
    if mlib.mpf_gt(difference.lo, zero):
        return Truth3.FALSE
    return Truth3.UNKNOWN


def eval_atom(atom: Atom, box: IntervalBox, ctx: IntervalContext = IntervalContext(), evaluator=None) -> Truth3:
    if atom.lhs == atom.rhs:
        return Truth3.of(atom.relation in (Relation.EQ, Relation.LE))
    evaluator = evaluator or PolyEvaluator(box, ctx)
    return _decide(atom.relation, evaluator(atom.lhs - atom.rhs))


def eval_formula(formula: Formula, box: IntervalBox, ctx: IntervalContext = IntervalContext()) -> Truth3:
    """Kleene evaluation; TRUE/FALSE only when proven for every point of the box"""
    evaluator = PolyEvaluator(box, ctx)

    def visit(node: Formula) -> Truth3:
        if isinstance(node, Atom):
            return eval_atom(node, box, ctx, evaluator)
        if isinstance(node, Not):
            return visit(node.operand).not_()
        if isinstance(node, And):
            result = Truth3.TRUE
            for operand in node.operands:
                result = result.and_(visit(operand))
                if result is Truth3.FALSE:
                    break
            return result
        if isinstance(node, Or):
            result = Truth3.FALSE
            for operand in node.operands:
                result = result.or_(visit(operand))
                if result is Truth3.TRUE:
                    break
            return result
        raise TypeError(f"not a formula: {node!r}")

    return visit(formula)
