import logging

import click

from app.commands.common import config_options, emit, guarded, load_source
from app.core.exceptions import ExpCertError, ParseError
from app.schemas.schemas import CliConfig, ExpressionRecord, JacobianRecord
from exppoly.calculus import partial_derivative
from exppoly.canonical import normalize
from khovanskii.builders import augment_log
from syntax.parser import infer_names, is_variable_name, parse_formula, parse_system, parse_term, source_names
from syntax.printer import print_formula, print_poly, print_system, print_system_inline

logger = logging.getLogger(__name__)

router = click.Group("expressions")


@router.command("parse")
@click.option("--term", "term_source", default=None, help="Exponential polynomial")
@click.option("--system", "system_source", default=None, help="System, ';'-separated or @file")
@click.option("--formula", "formula_source", default=None, help="Constraint formula")
@guarded
@config_options
def parse_command(term_source, system_source, formula_source, cfg: CliConfig):
    """Parse and print in canonical form"""
    given = [s for s in (term_source, system_source, formula_source) if s is not None]
    if len(given) != 1:
        raise ExpCertError("give exactly one of --term, --system, --formula")
    if system_source is not None:
        system = parse_system(load_source(system_source))
        emit(cfg, print_system(system),
             ExpressionRecord(kind="parse", value=print_system_inline(system), tower_height=system.tower_height))
    elif term_source is not None:
        source = load_source(term_source)
        names = infer_names(source_names(source))
        p = normalize(parse_term(source, names))
        emit(cfg, print_poly(p, names), ExpressionRecord(kind="parse", value=print_poly(p, names), tower_height=p.height))
    else:
        source = load_source(formula_source)
        names = infer_names(source_names(source))
        formula = parse_formula(source, names)
        text = print_formula(formula, names)
        emit(cfg, text, ExpressionRecord(kind="parse", value=text, tower_height=0))


@router.command("diff")
@click.option("--term", "term_source", required=True, help="Exponential polynomial")
@click.option("--wrt", required=True, help="Variable to differentiate by, e.g. x1 or y")
@guarded
@config_options
def diff_command(term_source, wrt, cfg: CliConfig):
    """Partial derivative of a term"""
    if not is_variable_name(wrt):
        raise ParseError(f"bad variable name {wrt!r}", 1, 1, ("variable",))
    source = load_source(term_source)
    names = infer_names(source_names(source) + [wrt])
    index = int(wrt[1:]) if names is None else names.index(wrt) + 1
    derivative = partial_derivative(normalize(parse_term(source, names)), index)
    text = print_poly(derivative, names)
    emit(cfg, text, ExpressionRecord(kind="diff", value=text, tower_height=derivative.height))


@router.command("jacobian")
@click.option("--system", "system_source", required=True, help="System, ';'-separated or @file")
@guarded
@config_options
def jacobian_command(system_source, cfg: CliConfig):
    """Symbolic Jacobian matrix and its determinant"""
    system = parse_system(load_source(system_source))
    entries = []
    for i, row in enumerate(system.jacobian, start=1):
        for j, entry in enumerate(row, start=1):
            entries.append(f"d f{i}/d {system.names[j - 1]} = {print_poly(entry, system.names)}")
    det = print_poly(system.determinant, system.names)
    emit(cfg, entries + [f"det = {det}"], JacobianRecord(entry=entries, det=det))


@router.command("augment")
@click.option("--system", "system_source", required=True, help="System, ';'-separated or @file")
@guarded
@config_options
def augment_command(system_source, cfg: CliConfig):
    """Add a logarithm variable y with E(y) = x1 in front of the system"""
    augmented = augment_log(parse_system(load_source(system_source)))
    emit(cfg, print_system(augmented),
         ExpressionRecord(kind="augment", value=print_system_inline(augmented), tower_height=augmented.tower_height))
