"""
Embedding instance files.

    # comments run to end of line
    system
    vars: 1
    x1 - E(1)
    box: [0, 4]
    system
    x1*E(x1) = 1
    box: [0, 1]
    constraints:
    c1 > 2
    c2 < 1 & c2*E(c2) = 1

Each `system` block holds a system in the usual source form followed by a
`box:` line (one interval per variable, or one interval used for all of
them). The `constraints:` section lists one formula per line over c1..cm.
"""
import logging
from typing import List, Optional, Tuple

from app.core.exceptions import ParseError
from app.schemas.schemas import SolveConfig
from interval.arith import IntervalBox
from koenig.embedding import EmbeddingInstance
from syntax.parser import parse_box, parse_formula, parse_system

logger = logging.getLogger(__name__)


def _positioned(entries) -> str:
    """Rebuild source text with each line at its original line number"""
    rows = [""] * entries[-1][0]
    for number, raw in entries:
        rows[number - 1] = raw
    return "\n".join(rows)


def _strip(line: str) -> str:
    return line.split("#", 1)[0].strip()


def _box_line(text: str, line: int, n: int, precision: int) -> IntervalBox:
    try:
        pairs = parse_box(text)
    except ParseError as e:
        raise ParseError(f"bad box: {e.detail}", line, 1, ("[lo, hi]",))
    if len(pairs) == 1 and n > 1:
        pairs = pairs * n
    if len(pairs) != n:
        raise ParseError(f"box has {len(pairs)} intervals for {n} variables", line, 1)
    return IntervalBox.from_decimal(pairs, precision)


def parse_instance(text: str, cfg: Optional[SolveConfig] = None) -> EmbeddingInstance:
    cfg = cfg or SolveConfig()
    lines = text.splitlines()
    blocks: List[Tuple[int, list, Tuple[int, str]]] = []
    constraints = []
    current: Optional[Tuple[int, list]] = None
    box_seen: Optional[Tuple[int, str]] = None
    in_constraints = False

    def close(at: int):
        if current is None:
            return
        if box_seen is None:
            raise ParseError("system block without a box line", at, 1, ("box:",))
        blocks.append((current[0], current[1], box_seen))

    for number, raw in enumerate(lines, start=1):
        line = _strip(raw)
        if not line:
            continue
        if in_constraints:
            constraints.append((number, raw.split("#", 1)[0]))
            continue
        if line == "system":
            close(number)
            current, box_seen = (number + 1, []), None
            continue
        if line == "constraints:":
            close(number)
            current = None
            in_constraints = True
            continue
        if current is None:
            raise ParseError(f"unexpected line {line!r} outside a system block", number, 1, ("system", "constraints:"))
        if line.startswith("box:"):
            if box_seen is not None:
                raise ParseError("second box line in one system block", number, 1)
            box_seen = (number, line[len("box:"):])
            continue
        if box_seen is not None:
            raise ParseError("equations must come before the box line", number, 1, ("system", "constraints:"))
        current[1].append((number, raw))
    if not in_constraints:
        close(len(lines) + 1)
    if not blocks:
        raise ParseError("instance has no system blocks", 1, 1, ("system",))

    systems, boxes = [], []
    for _, body, (box_number, box_text) in blocks:
        if not body:
            raise ParseError("system block has no equations", box_number, 1, ("equation",))
        system = parse_system(_positioned(body))
        systems.append(system)
        boxes.append(_box_line(box_text, box_number, system.n, cfg.precision))

    formulas = []
    for number, raw in constraints:
        formulas.append(parse_formula(_positioned([(number, raw)])))
    logger.debug(f"instance: {len(systems)} generators, {len(formulas)} constraints")
    return EmbeddingInstance(tuple(systems), tuple(boxes), tuple(formulas), cfg)
