from pydantic import BaseModel, Field, field_validator, model_validator, ConfigDict
from typing import Dict, List, Literal, Optional, Type, TypeVar, get_origin

from app.core.config import settings

# Solver / enumeration configuration
class SolveConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    eps: float = Field(default_factory=lambda: settings.EPS, gt=0)
    precision: int = Field(default_factory=lambda: settings.PRECISION, ge=8)
    max_precision: int = Field(default_factory=lambda: settings.MAX_PRECISION, ge=8)
    max_splits: int = Field(default_factory=lambda: settings.MAX_SPLITS, gt=0)
    min_width: float = Field(default_factory=lambda: settings.MIN_WIDTH, gt=0)
    workers: int = Field(default_factory=lambda: settings.WORKERS, ge=1)

    @model_validator(mode='after')
    def check_precision_order(self):
        if self.max_precision < self.precision:
            raise ValueError(f"max_precision {self.max_precision} is below precision {self.precision}")
        return self

    @property
    def precision_ladder(self) -> List[int]:
        """Precisions tried in order when certification needs escalation"""
        ladder = []
        prec = self.precision
        while prec < self.max_precision:
            ladder.append(prec)
            prec *= 2
        ladder.append(self.max_precision)
        return ladder


class EnumerationBound(BaseModel):
    """
    Limits of the system grammar. Exp-atom arguments are drawn from the same
    bound one tower level lower, so max_coeff_bits and max_monomials also cap
    every argument; max_degree caps the power product of each monomial.
    """

    model_config = ConfigDict(frozen=True)

    max_n: int = Field(1, ge=0)
    max_tower: int = Field(1, ge=0)
    max_coeff_bits: int = Field(2, ge=1)
    max_monomials: int = Field(2, ge=1)
    max_degree: int = Field(1, ge=1)


class CliConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    precision: int = Field(default_factory=lambda: settings.PRECISION, ge=8)
    eps: float = Field(default_factory=lambda: settings.EPS, gt=0)
    max_splits: int = Field(default_factory=lambda: settings.MAX_SPLITS, gt=0)
    format: Literal["text", "structured"] = Field(default_factory=lambda: settings.OUTPUT_FORMAT)

    def solve_config(self) -> SolveConfig:
        return SolveConfig(
            eps=self.eps,
            precision=self.precision,
            max_precision=max(self.precision, settings.MAX_PRECISION),
            max_splits=self.max_splits,
        )


# Records (line-oriented "key: value" text)
RecordT = TypeVar("RecordT", bound="Record")


class Record(BaseModel):
    """Base for text records; list fields repeat their key once per item"""
    model_config = ConfigDict(extra='ignore')

    def to_text(self) -> str:
        lines = []
        for key, value in self.model_dump(mode='json').items():
            if isinstance(value, list):
                lines.extend(f"{key}: {item}" for item in value)
            elif value is None:
                continue
            elif isinstance(value, bool):
                lines.append(f"{key}: {'true' if value else 'false'}")
            else:
                lines.append(f"{key}: {value}")
        return "\n".join(lines)

    @classmethod
    def from_text(cls: Type[RecordT], text: str) -> RecordT:
        fields: Dict[str, object] = {}
        for line in text.splitlines():
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            key, sep, value = line.partition(":")
            if not sep:
                raise ValueError(f"malformed record line {line!r}")
            key, value = key.strip(), value.strip()
            info = cls.model_fields.get(key)
            if info is None:
                continue
            if get_origin(info.annotation) in (list, List):
                fields.setdefault(key, []).append(value)
            else:
                fields[key] = value
        return cls.model_validate(fields)


class CertificateRecord(Record):
    kind: Literal["certificate"] = "certificate"
    system: str
    box: List[str]
    precision: int = Field(..., ge=2)
    newton_contraction: bool
    jacobian: str

    @field_validator('system')
    @classmethod
    def single_line(cls, v):
        if "\n" in v:
            raise ValueError("system must be in inline form")
        return v


class SolveRecord(Record):
    kind: Literal["solve"] = "solve"
    system: str
    box: str
    certificates: int
    enclosure: List[str] = []
    undecided: List[str] = []
    excluded_volume: str
    splits: int
    status: Literal["complete", "no_roots", "undecided"]


class CatalogLine(Record):
    kind: Literal["catalog"] = "catalog"
    enclosure: str
    system: str
    certificate_ref: str

    def line(self) -> str:
        return f"({self.enclosure}, {self.system}, {self.certificate_ref})"


class RayRecord(Record):
    kind: Literal["ray"] = "ray"
    found: bool
    depth: int
    vertex: List[str] = []
    no_ray_layer: Optional[int] = None
    layer_sizes: List[int] = []
    warning: List[str] = []


class ExpressionRecord(Record):
    kind: Literal["parse", "diff", "augment"]
    value: str
    tower_height: int


class JacobianRecord(Record):
    kind: Literal["jacobian"] = "jacobian"
    entry: List[str] = []
    det: str


class VerifyRecord(Record):
    kind: Literal["verify"] = "verify"
    valid: bool
    enclosure: str


class EclRecord(Record):
    kind: Literal["ecl"] = "ecl"
    operation: str
    enclosure: str
    system: str
    certificate_ref: str


class ChainRecord(Record):
    kind: Literal["chain"] = "chain"
    holds: bool
    depth: int
    layer_sizes: List[int] = []
