"""
Layered candidate sets for partial embeddings of finitely many exponential
constants.

Constant c_k is interpreted among the first coordinates B_k of the certified
roots of generator system S_k in its box. Layer n holds the tuples
(b_1, ..., b_n) in B_1 x ... x B_n that the cumulative constraint psi'_n does
not refute, where psi'_n is the conjunction of every schedule formula whose
constants all have index <= n. Admission is three-valued: only tuples on
which psi'_n evaluates to FALSE are dropped, so a missing ray within the
boxes proves nothing about the reals, and a found ray is a family of
candidate embeddings rather than a single one.

Since psi'_n contains psi'_{n-1} and atoms only look at their own
coordinates, layer n is built by extending the tuples of layer n-1; tuples
refuted there would be refuted again.
"""
import itertools
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple, Union

from app.core.exceptions import ArityError, CandidateSetEmpty, ExpCertError
from app.schemas.schemas import SolveConfig
from certify.solver import select_coordinate, solve_in_box
from exppoly.calculus import rename_variables
from exppoly.canonical import ZERO, CanonicalPoly, exp_of, variable
from interval.arith import ZERO_INTERVAL, Interval, IntervalBox, IntervalContext
from interval.evaluate import Truth3, eval_formula, eval_poly
from khovanskii.system import KhovanskiiSystem
from koenig.graph import LayeredGraph, NoRay, Ray, find_ray
from syntax.formula import Atom, Formula, Relation, conjunction, formula_variables

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class EmbeddingInstance:
    systems: Tuple[KhovanskiiSystem, ...]
    boxes: Tuple[IntervalBox, ...]
    constraints: Tuple[Formula, ...]
    cfg: SolveConfig = field(default_factory=SolveConfig)

    def __post_init__(self):
        if len(self.boxes) != len(self.systems):
            raise ArityError(f"{len(self.systems)} generator systems but {len(self.boxes)} boxes")
        for k, (system, box) in enumerate(zip(self.systems, self.boxes), start=1):
            if len(box) != system.n:
                raise ArityError(f"box for c{k} has {len(box)} coordinates, system has {system.n} variables")
        for formula in self.constraints:
            stray = [index for index in formula_variables(formula) if index > self.m]
            if stray:
                raise ArityError(f"constraint mentions c{max(stray)} but only {self.m} constants exist")

    @property
    def m(self) -> int:
        return len(self.systems)

    def level(self, formula: Formula) -> int:
        """Largest constant index in formula (ground formulas count as level 1)"""
        return max(formula_variables(formula), default=1)

    def cumulative(self, n: int) -> Optional[Formula]:
        """psi'_n, or None when no formula applies yet"""
        applicable = [formula for formula in self.constraints if self.level(formula) <= n]
        return conjunction(applicable) if applicable else None


@dataclass(frozen=True)
class CandidateSet:
    index: int
    values: Tuple[Interval, ...]
    warnings: Tuple[str, ...] = ()


def candidate_set(inst: EmbeddingInstance, k: int) -> CandidateSet:
    """B_k: ascending first coordinates of the certified roots of S_k"""
    report = solve_in_box(inst.systems[k - 1], inst.boxes[k - 1], inst.cfg)
    values = tuple(select_coordinate(report, j) for j in range(1, len(report.certificates) + 1))
    warnings = ()
    if report.undecided:
        warnings = (f"B_{k}: {len(report.undecided)} undecided boxes left by the solver",)
        logger.warning(warnings[0])
    if not values:
        raise CandidateSetEmpty(k, "undecided" if report.undecided else "box_too_small")
    return CandidateSet(k, values, warnings)


def _admit(formula: Optional[Formula], payload: Tuple[Interval, ...], ctx: IntervalContext) -> Truth3:
    if formula is None:
        return Truth3.TRUE
    return eval_formula(formula, IntervalBox(payload), ctx)


def build_layers(inst: EmbeddingInstance, depth: int) -> LayeredGraph:
    if not 0 <= depth <= inst.m:
        raise ExpCertError(f"depth {depth} outside 0..{inst.m}")
    ctx = IntervalContext(inst.cfg.precision)
    layers: List[Tuple[Tuple[Interval, ...], ...]] = []
    warnings: List[Tuple[str, ...]] = []
    excluded: List[Tuple[Tuple[Interval, ...], ...]] = []
    previous: Tuple[Tuple[Interval, ...], ...] = ((),)

    for n in range(1, depth + 1):
        candidates = candidate_set(inst, n)
        formula = inst.cumulative(n)
        tuples = [prefix + (value,) for prefix, value in itertools.product(previous, candidates.values)]
        if inst.cfg.workers > 1:
            with ThreadPoolExecutor(max_workers=inst.cfg.workers) as executor:
                verdicts = list(executor.map(lambda payload: _admit(formula, payload, ctx), tuples))
        else:
            verdicts = [_admit(formula, payload, ctx) for payload in tuples]
        admitted = tuple(t for t, verdict in zip(tuples, verdicts) if verdict is not Truth3.FALSE)
        refuted = tuple(t for t, verdict in zip(tuples, verdicts) if verdict is Truth3.FALSE)
        logger.debug(f"layer {n}: {len(admitted)} admitted, {len(refuted)} refuted of {len(tuples)}")
        layers.append(admitted)
        warnings.append(candidates.warnings)
        excluded.append(refuted)
        previous = admitted

    return LayeredGraph(tuple(layers), None, tuple(warnings), tuple(excluded))


def interpret_constants(ray: Ray) -> Tuple[Interval, ...]:
    """c_i := i-th coordinate of the ray's i-th vertex"""
    return tuple(vertex[i] for i, vertex in enumerate(ray.vertices))


def check_schedule(inst: EmbeddingInstance, assignment: Sequence[Interval],
                   precision: Optional[int] = None) -> Tuple[Truth3, ...]:
    """Verdict of every schedule formula on the assignment c_1..c_k"""
    ctx = IntervalContext(precision or inst.cfg.precision)
    box = IntervalBox(tuple(assignment))
    verdicts = []
    for formula in inst.constraints:
        if inst.level(formula) > len(box):
            verdicts.append(Truth3.UNKNOWN)
        else:
            verdicts.append(eval_formula(formula, box, ctx))
    return tuple(verdicts)


def _terms(k: int, depth: int) -> List[CanonicalPoly]:
    """c_k, E(c_k), E(E(c_k)), ... up to the given term depth"""
    terms = [variable(k)]
    for _ in range(depth):
        terms.append(exp_of(terms[-1]))
    return terms


def atomic_schedule(
    systems: Sequence[KhovanskiiSystem],
    enclosures: Sequence[Interval],
    precision: int = 64,
    term_depth: int = 2,
) -> Tuple[Formula, ...]:
    """
    Atomic sentences true of the source constants, ordered by the largest
    constant index involved.

    For every k: the defining equation f(c_k) = 0 when S_k is univariate,
    then, for each pair of terms among c_k, E(c_k), E(E(c_k)) (up to
    term_depth) and the same terms of any c_j with j < k, what the source
    enclosures decide: a strict order plus the matching != when the
    difference has a sign, or = when it is exactly zero. Undecided
    comparisons are left out.
    """
    ctx = IntervalContext(precision)
    box = IntervalBox(tuple(enclosures))
    schedule: List[Formula] = []
    for k in range(1, len(systems) + 1):
        system = systems[k - 1]
        if system.n == 1:
            schedule.append(Atom(rename_variables(system.equations[0], {1: k}), Relation.EQ, ZERO))
        mine = _terms(k, term_depth)
        earlier = [t for j in range(1, k) for t in _terms(j, term_depth)]
        pairs = [(a, b) for a, b in itertools.combinations(mine, 2)]
        pairs += [(a, b) for a in earlier for b in mine]
        for a, b in pairs:
            difference = eval_poly(a - b, box, ctx)
            if difference.is_negative():
                schedule.extend([Atom(a, Relation.LT, b), Atom(a, Relation.NE, b)])
            elif difference.is_positive():
                schedule.extend([Atom(b, Relation.LT, a), Atom(a, Relation.NE, b)])
            elif difference == ZERO_INTERVAL:
                schedule.append(Atom(a, Relation.EQ, b))
            else:
                logger.debug(f"c{k}: comparison left undecided on {difference}")
    return tuple(schedule)


def instance_from_catalog(
    entries,
    box: Union[Interval, IntervalBox],
    constraints: Optional[Sequence[Formula]] = None,
    cfg: Optional[SolveConfig] = None,
) -> EmbeddingInstance:
    """
    Generators are the witnessing systems of catalog entries, searched in box
    (replicated per dimension). Without explicit constraints the atomic
    schedule of the entries' enclosures is used.
    """
    cfg = cfg or SolveConfig()
    entries = list(entries)
    interval = box if isinstance(box, Interval) else box[0]
    systems = tuple(entry.system for entry in entries)
    boxes = tuple(IntervalBox((interval,) * system.n) for system in systems)
    if constraints is None:
        constraints = atomic_schedule(systems, [entry.number.enclosure for entry in entries], cfg.precision)
    return EmbeddingInstance(systems, boxes, tuple(constraints), cfg)


def search(inst: EmbeddingInstance, depth: int) -> Tuple[LayeredGraph, Union[Ray, NoRay]]:
    graph = build_layers(inst, depth)
    return graph, find_ray(graph)
