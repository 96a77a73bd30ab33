"""
Shared pieces of the command layer: common flags, input loading, output
formatting and the mapping from library errors to exit codes.
"""
import functools
import logging
import sys
from pathlib import Path
from typing import Iterable, Union

import click
from pydantic import ValidationError

from app.core.config import settings
from app.core.exceptions import EXIT_INPUT, ExpCertError
from app.schemas.schemas import CliConfig, Record
from interval.arith import IntervalBox
from syntax.parser import parse_box

logger = logging.getLogger(__name__)


def config_options(command):
    """--precision, --eps, --max-splits and --format, collected into a CliConfig `cfg`"""
    @click.option("--precision", type=int, default=None, help=f"Working precision in bits (default {settings.PRECISION})")
    @click.option("--eps", type=float, default=None, help=f"Target certificate width (default {settings.EPS:g})")
    @click.option("--max-splits", type=int, default=None, help="Split budget for branch-and-prune")
    @click.option("--format", "output_format", type=click.Choice(["text", "structured"]), default=None,
                  help="Output format")
    @functools.wraps(command)
    def wrapper(*args, precision, eps, max_splits, output_format, **kwargs):
        values = {"precision": precision, "eps": eps, "max_splits": max_splits, "format": output_format}
        cfg = CliConfig(**{key: value for key, value in values.items() if value is not None})
        return command(*args, cfg=cfg, **kwargs)

    return wrapper


def guarded(command):
    """Report library errors on stderr and exit with their code"""
    @functools.wraps(command)
    def wrapper(*args, **kwargs):
        try:
            return command(*args, **kwargs)
        except ExpCertError as e:
            click.echo(f"error: {e.detail}", err=True)
            sys.exit(e.exit_code)
        except ValidationError as e:
            click.echo(f"error: invalid parameters: {e}", err=True)
            sys.exit(EXIT_INPUT)

    return wrapper


def load_source(value: str) -> str:
    """Inline source text, or the contents of a file when written @path"""
    if value.startswith("@"):
        path = Path(value[1:])
        if not path.is_file():
            raise ExpCertError(f"no such file: {path}")
        return path.read_text()
    return value


def load_box(text: str, precision: int) -> IntervalBox:
    return IntervalBox.from_decimal(parse_box(text), precision)


def emit(cfg: CliConfig, text: Union[str, Iterable[str]], record: Union[Record, Iterable[Record], None] = None):
    """Print the text form, or the record(s) in structured mode"""
    if cfg.format == "structured" and record is not None:
        records = [record] if isinstance(record, Record) else list(record)
        click.echo("\n\n".join(r.to_text() for r in records))
        return
    lines = [text] if isinstance(text, str) else list(text)
    if lines:
        click.echo("\n".join(lines))
