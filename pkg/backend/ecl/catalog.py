"""
Catalog of exponentially algebraic numbers found by enumerating systems and
solving each one in a fixed box.

Numbers whose enclosures overlap are refined to settings.DEDUP_WIDTH. Pairs
that separate stay distinct; pairs that still overlap are merged into one
entry (the later system becomes an alias) and reported as unresolved, since
equality of exponential constants is not decided here.
"""
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterable, List, Optional, Tuple, Union

from app.core.config import settings
from app.core.exceptions import CertificationError, ExpCertError
from app.schemas.schemas import CatalogLine, EnumerationBound, SolveConfig
from certify.solver import SolveReport, refine_certificate, solve_in_box
from ecl.closure import EclNumber
from ecl.enumerate import enumerate_systems
from interval.arith import Interval, IntervalBox
from khovanskii.system import KhovanskiiSystem
from syntax.printer import print_system_inline

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CatalogEntry:
    number: EclNumber
    system: KhovanskiiSystem
    aliases: Tuple[KhovanskiiSystem, ...] = ()


@dataclass(frozen=True)
class SystemFailure:
    system: KhovanskiiSystem
    reason: str


@dataclass(frozen=True)
class UnresolvedPair:
    first: EclNumber
    second: EclNumber


@dataclass(frozen=True)
class Catalog:
    entries: Tuple[CatalogEntry, ...]
    unresolved: Tuple[UnresolvedPair, ...]
    failures: Tuple[SystemFailure, ...]

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def enclosures(self) -> List[Interval]:
        return [entry.number.enclosure for entry in self.entries]


def _search_box(box: Union[Interval, IntervalBox], n: int) -> IntervalBox:
    interval = box if isinstance(box, Interval) else box[0]
    return IntervalBox((interval,) * n)


def _solve_one(system: KhovanskiiSystem, box: Union[Interval, IntervalBox], cfg: SolveConfig):
    try:
        return solve_in_box(system, _search_box(box, system.n), cfg)
    except ExpCertError as e:
        return e


def _refined(number: EclNumber, cfg: SolveConfig) -> EclNumber:
    certificate = refine_certificate(number.certificate, settings.DEDUP_WIDTH, cfg.max_precision)
    return EclNumber(certificate, number.coordinate)


def _merge(entries: List[CatalogEntry], candidate: CatalogEntry, cfg: SolveConfig,
           unresolved: List[UnresolvedPair]) -> None:
    for position, entry in enumerate(entries):
        if not entry.number.enclosure.overlaps(candidate.number.enclosure):
            continue
        try:
            kept = _refined(entry.number, cfg)
            other = _refined(candidate.number, cfg)
        except CertificationError as e:
            logger.warning(f"dedup refinement failed: {e.detail}")
            kept, other = entry.number, candidate.number
        entries[position] = CatalogEntry(kept, entry.system, entry.aliases)
        if kept.enclosure.overlaps(other.enclosure):
            logger.warning(f"unresolved pair at {kept.enclosure}: "
                           f"{print_system_inline(entry.system)} vs {print_system_inline(candidate.system)}")
            unresolved.append(UnresolvedPair(kept, other))
            entries[position] = CatalogEntry(kept, entry.system, entry.aliases + (candidate.system,))
            return
        candidate = CatalogEntry(other, candidate.system, candidate.aliases)
    entries.append(candidate)


def catalog(
    bound: EnumerationBound,
    box: Union[Interval, IntervalBox],
    cfg: Optional[SolveConfig] = None,
    systems: Optional[Iterable[KhovanskiiSystem]] = None,
) -> Catalog:
    """
    Solve every enumerated system (or the given systems) in box, replicated
    to each system's dimension, and collect the first coordinates of all
    certified roots, sorted ascending.
    """
    cfg = cfg or SolveConfig()
    pending = list(systems) if systems is not None else list(enumerate_systems(bound))
    inner = cfg.model_copy(update={"workers": 1})
    if cfg.workers > 1:
        with ThreadPoolExecutor(max_workers=cfg.workers) as executor:
            outcomes = list(executor.map(lambda system: _solve_one(system, box, inner), pending))
    else:
        outcomes = [_solve_one(system, box, inner) for system in pending]

    failures: List[SystemFailure] = []
    found: List[CatalogEntry] = []
    for system, outcome in zip(pending, outcomes):
        if isinstance(outcome, ExpCertError):
            failures.append(SystemFailure(system, outcome.detail))
            continue
        report: SolveReport = outcome
        if report.undecided:
            reason = "split budget exhausted" if report.budget_exhausted else "undecided boxes below min width"
            failures.append(SystemFailure(system, f"{reason} ({len(report.undecided)} boxes)"))
        found.extend(CatalogEntry(EclNumber(c), system) for c in report.certificates)

    # stable sort keeps enumeration order among equal keys
    found.sort(key=lambda entry: entry.number.enclosure.sort_key())
    entries: List[CatalogEntry] = []
    unresolved: List[UnresolvedPair] = []
    for candidate in found:
        _merge(entries, candidate, cfg, unresolved)
    entries.sort(key=lambda entry: entry.number.enclosure.sort_key())

    if failures:
        logger.warning(f"{len(failures)} of {len(pending)} systems not fully decided")
    logger.info(f"catalog: {len(entries)} numbers from {len(pending)} systems")
    return Catalog(tuple(entries), tuple(unresolved), tuple(failures))


def catalog_lines(result: Catalog) -> List[CatalogLine]:
    return [
        CatalogLine(
            enclosure=entry.number.enclosure.to_decimal(),
            system=print_system_inline(entry.system),
            certificate_ref=entry.number.certificate.reference(),
        )
        for entry in result.entries
    ]
