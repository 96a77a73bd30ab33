"""
Certificates of isolated solutions and their self-contained text records.
"""
import hashlib
import logging
from dataclasses import dataclass
from typing import Optional

from app.schemas.schemas import CertificateRecord
from certify.krawczyk import krawczyk_step
from interval.arith import Interval, IntervalBox, IntervalContext
from interval.evaluate import eval_poly
from khovanskii.system import KhovanskiiSystem

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class KhovanskiiCertificate:
    """
    A box holding exactly one solution of `system` with nonzero Jacobian.

    `newton_contraction` records that the Krawczyk image was strictly inside
    the box; `jacobian_nonzero` is the determinant enclosure over the box.
    """
    system: KhovanskiiSystem
    box: IntervalBox
    precision: int
    newton_contraction: bool
    jacobian_nonzero: Interval

    @property
    def enclosure(self) -> Interval:
        return self.box[0]

    def coordinate(self, k: int) -> Interval:
        return self.box[k - 1]

    @property
    def valid(self) -> bool:
        return self.newton_contraction and not self.jacobian_nonzero.contains_zero()

    def to_record(self) -> CertificateRecord:
        return certificate_to_record(self)

    def reference(self) -> str:
        """Stable short digest of the certificate record"""
        return hashlib.sha256(self.to_record().to_text().encode()).hexdigest()[:16]


def check_box(system: KhovanskiiSystem, box: IntervalBox, precision: int) -> Optional[KhovanskiiCertificate]:
    """Certificate for box if the Krawczyk test and the determinant test both pass"""
    ctx = IntervalContext(precision)
    step = krawczyk_step(system, box, ctx)
    if not step.contracted:
        return None
    det = eval_poly(system.determinant, box, ctx)
    if det.contains_zero():
        return None
    return KhovanskiiCertificate(system, box, precision, True, det)


def verify_certificate(certificate: KhovanskiiCertificate) -> bool:
    """Recompute both conditions from scratch at the certificate's precision"""
    ctx = IntervalContext(certificate.precision)
    step = krawczyk_step(certificate.system, certificate.box, ctx)
    if not step.contracted:
        logger.info(f"Krawczyk image not interior for {certificate.box}")
        return False
    det = eval_poly(certificate.system.determinant, certificate.box, ctx)
    if det.contains_zero():
        logger.info(f"Jacobian determinant enclosure {det} contains 0")
        return False
    return True


def certificate_to_record(certificate: KhovanskiiCertificate) -> CertificateRecord:
    from syntax.printer import print_system_inline

    return CertificateRecord(
        system=print_system_inline(certificate.system),
        box=[interval.to_binary() for interval in certificate.box],
        precision=certificate.precision,
        newton_contraction=certificate.newton_contraction,
        jacobian=certificate.jacobian_nonzero.to_binary(),
    )


def certificate_from_record(record: CertificateRecord) -> KhovanskiiCertificate:
    from syntax.parser import parse_system

    return KhovanskiiCertificate(
        system=parse_system(record.system),
        box=IntervalBox(tuple(Interval.from_binary(text) for text in record.box)),
        precision=record.precision,
        newton_contraction=record.newton_contraction,
        jacobian_nonzero=Interval.from_binary(record.jacobian),
    )


def certificate_to_text(certificate: KhovanskiiCertificate) -> str:
    return certificate_to_record(certificate).to_text()


def certificate_from_text(text: str) -> KhovanskiiCertificate:
    return certificate_from_record(CertificateRecord.from_text(text))
