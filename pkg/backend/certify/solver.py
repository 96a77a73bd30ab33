"""
Branch-and-prune search for all isolated solutions of a Khovanskii system
inside a bounded box.

Boxes are processed depth-first in a fixed order. A box is pruned when an
equation's enclosure excludes 0 or the Krawczyk image misses it; it is
certified when the Krawczyk image lies strictly inside it; otherwise it is
narrowed to its intersection with the image and bisected. Boxes that get
below `min_width`, or that remain when the split budget runs out, are
reported as undecided. A certified root lies strictly inside its leaf, so
roots from different leaves are distinct.
"""
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Tuple

from app.core.exceptions import CertificationError, ExpCertError, SelectionError
from app.schemas.schemas import SolveConfig
from certify.certificate import KhovanskiiCertificate, check_box
from certify.krawczyk import krawczyk_step
from interval.arith import Interval, IntervalBox, IntervalContext
from khovanskii.system import KhovanskiiSystem

logger = logging.getLogger(__name__)

# off-centre so that simple roots such as 0 or 1 do not land on a split plane
SPLIT_RATIO = Fraction(1237, 2531)
MAX_REFINE_STEPS = 64
SEPARATION_ROUNDS = 8
INFLATION = 0.125


@dataclass(frozen=True)
class SolveReport:
    system: KhovanskiiSystem
    box: IntervalBox
    certificates: Tuple[KhovanskiiCertificate, ...]
    undecided: Tuple[IntervalBox, ...]
    excluded_volume: Fraction
    splits: int
    budget_exhausted: bool = False

    @property
    def complete(self) -> bool:
        return not self.undecided

    @property
    def total_volume(self) -> Fraction:
        return self.box.volume()


def _absolute_slack(box: IntervalBox, precision: int) -> float:
    scale = max(1.0, max(abs(interval.midpoint_float()) for interval in box))
    return scale * 2.0 ** -(precision - 8)


def _inflate(box: IntervalBox, ctx: IntervalContext) -> IntervalBox:
    slack = _absolute_slack(box, ctx.prec)
    return IntervalBox(tuple(ctx.inflate(interval, INFLATION, slack) for interval in box))


def tighten(system: KhovanskiiSystem, box: IntervalBox, eps: float, precision: int) -> Optional[KhovanskiiCertificate]:
    """
    Krawczyk iteration with epsilon-inflation until the box is at most eps
    wide and still certifies. box must contain exactly one root (for example
    a box whose Krawczyk image is interior to it).
    """
    ctx = IntervalContext(precision)
    current = box
    for _ in range(MAX_REFINE_STEPS):
        step = krawczyk_step(system, current, ctx)
        if not step.contracted:
            return None
        if current.max_width() <= eps:
            return check_box(system, current, precision)
        candidate = _inflate(step.image, ctx)
        if candidate.max_width() >= current.max_width():
            # stagnated at this precision
            return None
        current = candidate
    return None


def certify_leaf(system: KhovanskiiSystem, box: IntervalBox, cfg: SolveConfig) -> Optional[KhovanskiiCertificate]:
    """Certify the unique root of a contracting box, escalating precision"""
    for precision in cfg.precision_ladder:
        certificate = tighten(system, box, cfg.eps, precision)
        if certificate is not None:
            return certificate
        logger.warning(f"certification at {precision} bits failed for {box}; escalating")
    return None


def _split(box: IntervalBox, ctx: IntervalContext) -> Tuple[IntervalBox, IntervalBox]:
    def relative_width(interval: Interval) -> float:
        return interval.width() / max(1.0, abs(interval.midpoint_float()))

    widths = [relative_width(interval) for interval in box]
    index = widths.index(max(widths))
    interval = box[index]
    point = ctx.split_point(interval, SPLIT_RATIO)
    left = box.replace(index, Interval(interval.lo, point))
    right = box.replace(index, Interval(point, interval.hi))
    return left, right


def _volume(box: IntervalBox) -> Fraction:
    return box.volume()


def _solve_sequential(system: KhovanskiiSystem, box: IntervalBox, cfg: SolveConfig, max_splits: int) -> SolveReport:
    ctx = IntervalContext(cfg.precision)
    stack: List[IntervalBox] = [box]
    certificates: List[KhovanskiiCertificate] = []
    undecided: List[IntervalBox] = []
    excluded = Fraction(0)
    splits = 0
    exhausted = False

    while stack:
        current = stack.pop()
        if splits >= max_splits:
            exhausted = True
            undecided.append(current)
            continue
        step = krawczyk_step(system, current, ctx)
        if step.excluded:
            excluded += _volume(current)
            continue
        if step.contracted:
            certificate = certify_leaf(system, current, cfg)
            if certificate is not None:
                # the rest of the leaf holds no other root
                overlap = ctx.intersect_box(certificate.box, current)
                excluded += _volume(current) - (_volume(overlap) if overlap is not None else 0)
                certificates.append(certificate)
                continue
        narrowed = step.narrowed
        excluded += _volume(current) - _volume(narrowed)
        if narrowed.max_width() < cfg.min_width:
            undecided.append(narrowed)
            continue
        left, right = _split(narrowed, ctx)
        splits += 1
        stack.append(right)
        stack.append(left)

    if exhausted:
        logger.warning(f"split budget {max_splits} exhausted with {len(undecided)} boxes left")
    elif undecided:
        logger.warning(f"{len(undecided)} undecided boxes below min width {cfg.min_width}")
    return SolveReport(system, box, tuple(certificates), tuple(undecided), excluded, splits, exhausted)


def _clashing(certificates: List[KhovanskiiCertificate]) -> List[int]:
    """Indices of certificates whose box overlaps another one"""
    return [
        i for i, a in enumerate(certificates)
        if any(j != i and a.box.overlaps(b.box) for j, b in enumerate(certificates))
    ]


def _separate(report: SolveReport, cfg: SolveConfig) -> SolveReport:
    """
    Shrink overlapping certificate boxes (distinct roots) until disjoint.
    Boxes that still overlap after SEPARATION_ROUNDS go to the undecided residue.
    """
    certificates = list(report.certificates)
    for _ in range(SEPARATION_ROUNDS):
        clash = _clashing(certificates)
        if not clash:
            break
        for index in clash:
            c = certificates[index]
            try:
                certificates[index] = refine_certificate(c, c.box.max_width() / 16, cfg.max_precision)
            except CertificationError as e:
                logger.warning(f"could not separate certificates: {e.detail}")
    undecided = list(report.undecided)
    clash = set(_clashing(certificates))
    if clash:
        logger.warning(f"{len(clash)} certificate boxes still overlap after refinement; reporting them as undecided")
        undecided.extend(certificates[i].box for i in sorted(clash))
        certificates = [c for i, c in enumerate(certificates) if i not in clash]
    return SolveReport(
        report.system, report.box, tuple(certificates), tuple(undecided),
        report.excluded_volume, report.splits, report.budget_exhausted,
    )


def _first_coordinate_key(certificate: KhovanskiiCertificate):
    return certificate.box.sort_key()


def solve_in_box(system: KhovanskiiSystem, box: IntervalBox, cfg: Optional[SolveConfig] = None) -> SolveReport:
    """All isolated solutions of system in box, plus the undecided residue"""
    cfg = cfg or SolveConfig()
    if len(box) != system.n:
        raise ExpCertError(f"box has {len(box)} coordinates but the system has {system.n} variables")
    if not box.is_finite:
        raise ExpCertError("solve needs a bounded box")

    if cfg.workers > 1:
        ctx = IntervalContext(cfg.precision)
        pieces = [box]
        while len(pieces) < cfg.workers:
            left, right = _split(pieces.pop(0), ctx)
            pieces.extend([left, right])
        pieces.sort(key=lambda piece: piece.sort_key())
        budget = max(1, cfg.max_splits // len(pieces))
        with ThreadPoolExecutor(max_workers=cfg.workers) as executor:
            parts = list(executor.map(lambda piece: _solve_sequential(system, piece, cfg, budget), pieces))
        report = SolveReport(
            system,
            box,
            tuple(c for part in parts for c in part.certificates),
            tuple(u for part in parts for u in part.undecided),
            sum((part.excluded_volume for part in parts), Fraction(0)),
            sum(part.splits for part in parts) + len(pieces) - 1,
            any(part.budget_exhausted for part in parts),
        )
    else:
        report = _solve_sequential(system, box, cfg, cfg.max_splits)

    report = _separate(report, cfg)
    ordered = tuple(sorted(report.certificates, key=_first_coordinate_key))
    logger.debug(f"solve: {len(ordered)} certificates, {len(report.undecided)} undecided, {report.splits} splits")
    return SolveReport(
        report.system, report.box, ordered, report.undecided,
        report.excluded_volume, report.splits, report.budget_exhausted,
    )


def refine_certificate(certificate: KhovanskiiCertificate, width: float, max_precision: int) -> KhovanskiiCertificate:
    """Same root, box at most `width` wide; raises CertificationError if unreachable"""
    precision = certificate.precision
    while True:
        tighter = tighten(certificate.system, certificate.box, width, precision)
        if tighter is not None:
            return tighter
        if precision >= max_precision:
            raise CertificationError(
                f"cannot refine {certificate.enclosure} to width {width:g} within {max_precision} bits"
            )
        precision = min(precision * 2, max_precision)
        logger.warning(f"refinement escalating to {precision} bits")


def select_coordinate(report: SolveReport, k: int) -> Interval:
    """First-coordinate enclosure of the k-th certificate in ascending order"""
    ordered = _ordered_projections(report)
    if not 1 <= k <= len(ordered):
        raise SelectionError(f"k={k} out of range: {len(ordered)} certified solutions")
    return ordered[k - 1]


def rank_of(report: SolveReport, enclosure: Interval) -> int:
    """Index k with select_coordinate(report, k) overlapping enclosure"""
    ordered = _ordered_projections(report)
    matches = [k for k, interval in enumerate(ordered, start=1) if interval.overlaps(enclosure)]
    if len(matches) != 1:
        raise SelectionError(f"{enclosure} matches {len(matches)} certified solutions")
    return matches[0]


def _ordered_projections(report: SolveReport) -> List[Interval]:
    projections = sorted((c.enclosure for c in report.certificates), key=lambda interval: interval.sort_key())
    for a, b in zip(projections, projections[1:]):
        if not a.precedes(b):
            raise SelectionError(f"first-coordinate projections {a} and {b} overlap; refine with a smaller eps")
    return projections
