# JSON payloads emitted by the CLI
#
# Vertex sets are sorted integer lists in the digraph's (flat) labeling.

from typing import Dict, List, Optional

from pydantic import BaseModel, Field, model_serializer

from .ecd_solver import DominationNumbers, EcdCertificate
from .families import D0Witness, D1Witness, D2Witness, D3Witness, FamilyWitness
from .theorems import DecisionReport

# ==================== Models ====================


class CertificateModel(BaseModel):
    """ECD set with the dominator of every vertex"""
    s: List[int]
    dominator: List[int]


class WitnessModel(BaseModel):
    """Family membership evidence: family tag plus named blocks"""
    family: str
    blocks: Dict[str, List[int]]
    trivial: Optional[bool] = None
    d1: Optional["WitnessModel"] = None
    d2: Optional["WitnessModel"] = None

    @model_serializer(mode="wrap")
    def _drop_unset(self, handler):
        return {key: value for key, value in handler(self).items() if value is not None}


WitnessModel.model_rebuild()


class DecisionReportModel(BaseModel):
    decision: bool
    method: str
    refutation: Optional[str] = None
    witnesses: List[WitnessModel] = Field(default_factory=list)
    certificate: Optional[CertificateModel] = None
    construction: str


class DominationModel(BaseModel):
    gamma: int = Field(..., ge=0)
    gamma_a: int = Field(..., ge=0)


class EnumerationModel(BaseModel):
    count: int
    sets: List[List[int]]


class MixedStarModel(BaseModel):
    """Block assignment for F [] K_{1,t1+t2} and the set it produces"""
    blocks: Optional[List[List[int]]] = None
    s: Optional[List[int]] = None
    verified: bool = False


# ==================== Conversions ====================


def certificate_model(certificate: EcdCertificate) -> CertificateModel:
    return CertificateModel(s=certificate.members(), dominator=list(certificate.dominator))


def witness_model(witness: FamilyWitness) -> WitnessModel:
    if isinstance(witness, D1Witness):
        blocks = {"W": sorted(witness.W), "Z": sorted(witness.Z), "Vp": sorted(witness.Vp)}
        return WitnessModel(family="D1", blocks=blocks, trivial=True if witness.trivial else None)
    if isinstance(witness, D2Witness):
        blocks = {"U1": sorted(witness.U1), "U2": sorted(witness.U2), "U3": sorted(witness.U3)}
        return WitnessModel(family="D2", blocks=blocks)
    if isinstance(witness, D3Witness):
        return WitnessModel(
            family="D3",
            blocks={"part1": sorted(witness.part1), "part2": sorted(witness.part2)},
            d1=witness_model(witness.d1),
            d2=witness_model(witness.d2),
        )
    if isinstance(witness, D0Witness):
        return WitnessModel(family="D0", blocks={"S": sorted(witness.S), "Sp": sorted(witness.Sp)})
    raise TypeError(f"not a family witness: {type(witness).__name__}")


def report_model(report: DecisionReport) -> DecisionReportModel:
    return DecisionReportModel(
        decision=report.decision,
        method=report.method.value,
        refutation=report.refutation,
        witnesses=[witness_model(w) for w in report.witnesses],
        certificate=certificate_model(report.certificate) if report.certificate else None,
        construction=report.construction,
    )


def domination_model(numbers: DominationNumbers) -> DominationModel:
    return DominationModel(gamma=numbers.gamma, gamma_a=numbers.gamma_a)


def to_json(model: BaseModel) -> str:
    return model.model_dump_json()
