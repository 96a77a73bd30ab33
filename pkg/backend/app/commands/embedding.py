import logging
from pathlib import Path

import click

from app.commands.common import config_options, emit, guarded
from app.core.exceptions import EXIT_NEGATIVE
from app.schemas.schemas import ChainRecord, CliConfig, RayRecord
from koenig.embedding import build_layers, interpret_constants
from koenig.graph import NoRay, check_chain, find_ray
from koenig.instance import parse_instance

logger = logging.getLogger(__name__)

router = click.Group("embedding")


def _vertex_text(vertex) -> str:
    return "(" + ", ".join(value.to_decimal() for value in vertex) + ")"


@router.command("embed-search")
@click.option("--instance", "instance_path", required=True, type=click.Path(exists=True, dir_okay=False), help="Instance file")
@click.option("--depth", required=True, type=int, help="Number of constants to place")
@guarded
@config_options
def embed_search_command(instance_path, depth, cfg: CliConfig):
    """Search a ray through the layered candidate sets"""
    inst = parse_instance(Path(instance_path).read_text(), cfg.solve_config())
    graph = build_layers(inst, depth)
    result = find_ray(graph)
    warnings = [w for layer in graph.warnings for w in layer]
    for warning in warnings:
        click.echo(f"warning: {warning}", err=True)

    sizes = list(graph.layer_sizes())
    if isinstance(result, NoRay):
        record = RayRecord(found=False, depth=depth, no_ray_layer=result.layer, layer_sizes=sizes, warning=warnings)
        emit(cfg, [f"no ray: every path dies at layer {result.layer}",
                   "layer sizes: " + " ".join(str(s) for s in sizes)], record)
        raise SystemExit(EXIT_NEGATIVE)

    vertices = [_vertex_text(vertex) for vertex in result.vertices]
    record = RayRecord(found=True, depth=depth, vertex=vertices, layer_sizes=sizes, warning=warnings)
    constants = interpret_constants(result)
    lines = [f"v{n}: {text}" for n, text in enumerate(vertices, start=1)]
    lines += [f"c{k} in {value.to_decimal()}" for k, value in enumerate(constants, start=1)]
    emit(cfg, lines, record)


@router.command("chain-check")
@click.option("--instance", "instance_path", required=True, type=click.Path(exists=True, dir_okay=False), help="Instance file")
@click.option("--depth", required=True, type=int)
@guarded
@config_options
def chain_check_command(instance_path, depth, cfg: CliConfig):
    """Check that each layer projects into the one above it"""
    inst = parse_instance(Path(instance_path).read_text(), cfg.solve_config())
    graph = build_layers(inst, depth)
    holds = check_chain(graph)
    sizes = list(graph.layer_sizes())
    emit(cfg, f"chain {'holds' if holds else 'BROKEN'}; layer sizes {sizes}",
         ChainRecord(holds=holds, depth=depth, layer_sizes=sizes))
    if not holds:
        raise SystemExit(EXIT_NEGATIVE)
