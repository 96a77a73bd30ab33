import logging
from typing import Optional

import click

from app.commands.common import config_options, emit, guarded, load_box, load_source
from app.core.exceptions import EXIT_BUDGET, EXIT_NEGATIVE, ArityError
from app.schemas.schemas import CliConfig, EclRecord, EnumerationBound
from ecl.catalog import catalog, catalog_lines
from ecl.closure import EclNumber, ecl_add, ecl_exp, ecl_inv, ecl_log, ecl_mul, ecl_neg, ecl_sub, from_system
from syntax.parser import parse_system
from syntax.printer import print_system_inline

logger = logging.getLogger(__name__)

router = click.Group("closure")

UNARY = {"neg": ecl_neg, "inv": ecl_inv, "exp": ecl_exp, "log": ecl_log}
BINARY = {"add": ecl_add, "sub": ecl_sub, "mul": ecl_mul}


def _operand(system_source: Optional[str], box_source: Optional[str], k: int, cfg: CliConfig, label: str) -> EclNumber:
    if system_source is None or box_source is None:
        raise ArityError(f"operand {label} needs --{label} and --{label}-box")
    system = parse_system(load_source(system_source))
    return from_system(system, load_box(box_source, cfg.precision), k, cfg.solve_config())


@router.command("ecl-op")
@click.argument("operation", type=click.Choice(sorted(UNARY) + sorted(BINARY)))
@click.option("--a", "a_system", default=None, help="System witnessing the first operand")
@click.option("--a-box", default=None, help="Box holding the first operand's root")
@click.option("--a-k", default=1, type=int, help="Which root (ascending first coordinate)")
@click.option("--b", "b_system", default=None, help="System witnessing the second operand")
@click.option("--b-box", default=None, help="Box holding the second operand's root")
@click.option("--b-k", default=1, type=int, help="Which root (ascending first coordinate)")
@guarded
@config_options
def ecl_op_command(operation, a_system, a_box, a_k, b_system, b_box, b_k, cfg: CliConfig):
    """Apply a closure operation to certified numbers"""
    solve_cfg = cfg.solve_config()
    a = _operand(a_system, a_box, a_k, cfg, "a")
    if operation in BINARY:
        b = _operand(b_system, b_box, b_k, cfg, "b")
        result = BINARY[operation](a, b, solve_cfg)
    else:
        result = UNARY[operation](a, solve_cfg)
    record = EclRecord(
        operation=operation,
        enclosure=result.enclosure.to_decimal(),
        system=print_system_inline(result.system),
        certificate_ref=result.certificate.reference(),
    )
    emit(cfg, [record.enclosure, record.system], record)


@router.command("ecl-enum")
@click.option("--box", "box_source", required=True, help="Search interval, used for every coordinate")
@click.option("--max-n", default=1, type=int)
@click.option("--max-tower", default=1, type=int)
@click.option("--max-coeff-bits", default=2, type=int)
@click.option("--max-monomials", default=2, type=int)
@click.option("--max-degree", default=1, type=int)
@guarded
@config_options
def ecl_enum_command(box_source, max_n, max_tower, max_coeff_bits, max_monomials, max_degree, cfg: CliConfig):
    """Catalog the numbers certified by all systems within the bounds"""
    bound = EnumerationBound(
        max_n=max_n, max_tower=max_tower, max_coeff_bits=max_coeff_bits,
        max_monomials=max_monomials, max_degree=max_degree,
    )
    box = load_box(box_source, cfg.precision)
    result = catalog(bound, box[0], cfg.solve_config())
    lines = catalog_lines(result)
    emit(cfg, [line.line() for line in lines], lines)
    for pair in result.unresolved:
        click.echo(f"unresolved: {pair.first.enclosure.to_decimal()} vs {pair.second.enclosure.to_decimal()}", err=True)
    for failure in result.failures:
        click.echo(f"undecided: {print_system_inline(failure.system)}: {failure.reason}", err=True)
    if result.failures:
        raise SystemExit(EXIT_BUDGET)
    if not result.entries:
        raise SystemExit(EXIT_NEGATIVE)
