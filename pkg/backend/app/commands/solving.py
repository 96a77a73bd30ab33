import logging
from pathlib import Path

import click

from app.commands.common import config_options, emit, guarded, load_box, load_source
from app.core.exceptions import EXIT_BUDGET, EXIT_NEGATIVE, ExpCertError
from app.schemas.schemas import CliConfig, SolveRecord, VerifyRecord
from certify.certificate import certificate_from_text, certificate_to_text, verify_certificate
from certify.solver import SolveReport, solve_in_box
from syntax.parser import parse_system
from syntax.printer import print_system_inline

logger = logging.getLogger(__name__)

router = click.Group("solving")

RECORD_SEPARATOR = "\n---\n"


def status_of(report: SolveReport) -> str:
    if report.undecided:
        return "undecided"
    return "complete" if report.certificates else "no_roots"


def solve_record(report: SolveReport) -> SolveRecord:
    return SolveRecord(
        system=print_system_inline(report.system),
        box=report.box.to_decimal(),
        certificates=len(report.certificates),
        enclosure=[c.box.to_decimal() for c in report.certificates],
        undecided=[box.to_decimal() for box in report.undecided],
        excluded_volume=str(report.excluded_volume),
        splits=report.splits,
        status=status_of(report),
    )


@router.command("solve")
@click.option("--system", "system_source", required=True, help="System, ';'-separated or @file")
@click.option("--box", "box_source", required=True, help="Search box, '[lo, hi]' per variable, ';'-separated")
@click.option("--certificates", "certificate_path", type=click.Path(dir_okay=False), default=None,
              help="Write the certificate records to this file")
@guarded
@config_options
def solve_command(system_source, box_source, certificate_path, cfg: CliConfig):
    """Certify every isolated solution inside a bounded box"""
    system = parse_system(load_source(system_source))
    box = load_box(box_source, cfg.precision)
    report = solve_in_box(system, box, cfg.solve_config())

    lines = [f"{k}: {c.box.to_decimal()}" for k, c in enumerate(report.certificates, start=1)]
    lines += [f"undecided: {box.to_decimal()}" for box in report.undecided]
    lines.append(f"status: {status_of(report)} ({len(report.certificates)} certified, {report.splits} splits)")
    emit(cfg, lines, solve_record(report))

    if certificate_path:
        Path(certificate_path).write_text(
            RECORD_SEPARATOR.join(certificate_to_text(c) for c in report.certificates) + "\n"
        )
    if report.undecided:
        raise SystemExit(EXIT_BUDGET)
    if not report.certificates:
        raise SystemExit(EXIT_NEGATIVE)


@router.command("verify")
@click.argument("certificate_file", type=click.Path(exists=True, dir_okay=False))
@guarded
@config_options
def verify_command(certificate_file, cfg: CliConfig):
    """Re-check certificate records from scratch"""
    chunks = [chunk for chunk in Path(certificate_file).read_text().split("---") if chunk.strip()]
    if not chunks:
        raise ExpCertError(f"{certificate_file} holds no certificate records")
    try:
        certificates = [certificate_from_text(chunk) for chunk in chunks]
    except ValueError as e:
        raise ExpCertError(f"malformed certificate record: {e}")
    verdicts = [verify_certificate(c) for c in certificates]
    lines = [f"{'valid' if ok else 'INVALID'}: {c.enclosure.to_decimal()}" for c, ok in zip(certificates, verdicts)]
    records = [VerifyRecord(valid=ok, enclosure=c.enclosure.to_decimal()) for c, ok in zip(certificates, verdicts)]
    emit(cfg, lines, records)
    if not all(verdicts):
        raise SystemExit(EXIT_NEGATIVE)
