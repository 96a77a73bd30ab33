"""
Closure calculus on certified exponentially algebraic numbers.

Each operation builds the witness system with khovanskii.combine (or
augment_log), places the operand certificates' boxes next to an approximate
enclosure of the result coordinate, and certifies the product box again. A
result is only returned once certified; otherwise CertificationError. The
result enclosure is then refined until it lies inside the interval image of
the operand enclosures.
"""
import logging
from dataclasses import dataclass
from typing import Optional, Sequence

import mpmath.libmp as mlib

from app.core.exceptions import CertificationError, DomainError
from app.schemas.schemas import SolveConfig
from certify.certificate import KhovanskiiCertificate, verify_certificate
from certify.solver import certify_leaf, refine_certificate, select_coordinate, solve_in_box
from certify.krawczyk import krawczyk_step
from interval.arith import CEILING, FLOOR, Interval, IntervalBox, IntervalContext
from khovanskii.builders import CombineOp, augment_log, combine
from khovanskii.system import KhovanskiiSystem

logger = logging.getLogger(__name__)

# widening of the initial guess box before certification
GUESS_RELATIVE = 0.25
GUESS_ABSOLUTE = 1e-9
FALLBACK_ABSOLUTE = 1e-3
FALLBACK_SPLITS = 10000
IMAGE_ROUNDS = 8


@dataclass(frozen=True)
class EclNumber:
    certificate: KhovanskiiCertificate
    coordinate: int = 1

    @property
    def enclosure(self) -> Interval:
        return self.certificate.coordinate(self.coordinate)

    @property
    def system(self) -> KhovanskiiSystem:
        return self.certificate.system

    def verify(self) -> bool:
        return verify_certificate(self.certificate)

    def __str__(self):
        return self.enclosure.to_decimal()


def from_system(system: KhovanskiiSystem, box: IntervalBox, k: int = 1, cfg: Optional[SolveConfig] = None) -> EclNumber:
    """The k-th certified root (ascending first coordinate) of system in box"""
    report = solve_in_box(system, box, cfg)
    select_coordinate(report, k)
    return EclNumber(report.certificates[k - 1])


def _operand_region(certificate: KhovanskiiCertificate, ctx: IntervalContext) -> IntervalBox:
    """A slightly wider box around the operand's root that still isolates it"""
    wider = IntervalBox(tuple(ctx.inflate(iv, GUESS_RELATIVE, GUESS_ABSOLUTE) for iv in certificate.box))
    if krawczyk_step(certificate.system, wider, ctx).contracted:
        return wider
    return certificate.box


def _certify_near(
    system: KhovanskiiSystem,
    result_guess: Interval,
    operands: Sequence[KhovanskiiCertificate],
    precision: int,
    cfg: SolveConfig,
) -> KhovanskiiCertificate:
    """
    Certify the root of system whose operand blocks are the operands' roots.

    Operand coordinates are restricted to boxes that isolate the operand
    roots, so any certified root found here is the intended one.
    """
    cfg = cfg.model_copy(update={
        "precision": max(cfg.precision, precision),
        "max_precision": max(cfg.max_precision, precision),
    })
    ctx = IntervalContext(cfg.precision)
    regions = [iv for certificate in operands for iv in _operand_region(certificate, ctx)]
    candidate = IntervalBox((ctx.inflate(result_guess, GUESS_RELATIVE, GUESS_ABSOLUTE),) + tuple(regions))
    if krawczyk_step(system, candidate, ctx).contracted:
        certificate = certify_leaf(system, candidate, cfg)
        if certificate is not None:
            return certificate

    # fall back to a small branch-and-prune over a wider result coordinate
    wide = candidate.replace(0, ctx.inflate(result_guess, 1.0, FALLBACK_ABSOLUTE))
    report = solve_in_box(system, wide, cfg.model_copy(update={"max_splits": FALLBACK_SPLITS, "workers": 1}))
    if len(report.certificates) == 1:
        return report.certificates[0]
    raise CertificationError(
        f"could not certify the combined system near {result_guess} "
        f"({len(report.certificates)} certified, {len(report.undecided)} undecided)"
    )


def _within_image(certificate: KhovanskiiCertificate, image: Interval, cfg: SolveConfig) -> KhovanskiiCertificate:
    for _ in range(IMAGE_ROUNDS):
        if certificate.coordinate(1).is_subset(image):
            return certificate
        try:
            certificate = refine_certificate(certificate, certificate.box.max_width() / 16, cfg.max_precision)
        except CertificationError as e:
            logger.warning(f"stopped shrinking toward {image}: {e.detail}")
            return certificate
    logger.warning(f"{certificate.coordinate(1)} still pokes out of {image}")
    return certificate


def _approximate(op: CombineOp, a: Interval, b: Optional[Interval], ctx: IntervalContext) -> Interval:
    if op is CombineOp.SUM:
        return ctx.add(a, b)
    if op is CombineOp.PRODUCT:
        return ctx.mul(a, b)
    if op is CombineOp.INVERSE:
        return ctx.reciprocal(a)
    if op is CombineOp.EXP:
        return ctx.exp(a)
    return ctx.neg(a)


def _apply(op: CombineOp, a: EclNumber, b: Optional[EclNumber], cfg: Optional[SolveConfig]) -> EclNumber:
    cfg = cfg or SolveConfig()
    if a.coordinate != 1 or (b is not None and b.coordinate != 1):
        raise DomainError("closure operations need numbers witnessed by their first coordinate")
    precision = max(a.certificate.precision, b.certificate.precision if b else 0)
    ctx = IntervalContext(max(precision, cfg.precision))
    result_guess = _approximate(op, a.enclosure, b.enclosure if b else None, ctx)
    system = combine(a.system, b.system if b else None, op)
    operands = [a.certificate] + ([b.certificate] if b is not None else [])
    certificate = _within_image(_certify_near(system, result_guess, operands, precision, cfg), result_guess, cfg)
    logger.debug(f"{op.value}: {certificate.enclosure}")
    return EclNumber(certificate)


def ecl_add(a: EclNumber, b: EclNumber, cfg: Optional[SolveConfig] = None) -> EclNumber:
    return _apply(CombineOp.SUM, a, b, cfg)


def ecl_mul(a: EclNumber, b: EclNumber, cfg: Optional[SolveConfig] = None) -> EclNumber:
    return _apply(CombineOp.PRODUCT, a, b, cfg)


def ecl_neg(a: EclNumber, cfg: Optional[SolveConfig] = None) -> EclNumber:
    return _apply(CombineOp.NEG, a, None, cfg)


def ecl_sub(a: EclNumber, b: EclNumber, cfg: Optional[SolveConfig] = None) -> EclNumber:
    return ecl_add(a, ecl_neg(b, cfg), cfg)


def ecl_inv(a: EclNumber, cfg: Optional[SolveConfig] = None) -> EclNumber:
    if a.enclosure.contains_zero():
        raise DomainError(f"inverse of {a.enclosure}, which contains 0")
    return _apply(CombineOp.INVERSE, a, None, cfg)


def ecl_exp(a: EclNumber, cfg: Optional[SolveConfig] = None) -> EclNumber:
    return _apply(CombineOp.EXP, a, None, cfg)


def ecl_log(a: EclNumber, cfg: Optional[SolveConfig] = None) -> EclNumber:
    """Witness: augment_log of a's system, y = log of a's first coordinate"""
    cfg = cfg or SolveConfig()
    if not a.enclosure.is_positive():
        raise DomainError(f"log of {a.enclosure}, which is not strictly positive")
    if a.coordinate != 1:
        raise DomainError("closure operations need numbers witnessed by their first coordinate")
    precision = max(a.certificate.precision, cfg.precision)
    # mpf_log is only a starting guess; the certificate comes from Krawczyk
    guess = Interval(
        mlib.mpf_log(a.enclosure.lo, precision, FLOOR),
        mlib.mpf_log(a.enclosure.hi, precision, CEILING),
    )
    system = augment_log(a.system)
    certificate = _within_image(_certify_near(system, guess, [a.certificate], precision, cfg), guess, cfg)
    return EclNumber(certificate)
