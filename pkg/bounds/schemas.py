"""
Pydantic schemas for input documents and bound reports
"""

import math
from typing import Dict, List, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

ATOM_SUM_TOLERANCE = 1e-9


# ==================== Input Schemas ====================

class IntersectionIn(BaseModel):
    model_config = ConfigDict(extra='forbid')

    subset: List[int] = Field(..., min_length=1)
    p: float

    @field_validator('subset')
    @classmethod
    def subset_strictly_increasing(cls, value):
        if value[0] < 1:
            raise ValueError('indices are 1-based')
        if any(a >= b for a, b in zip(value, value[1:])):
            raise ValueError('subset must be a strictly increasing index list')
        return value


class SystemIn(BaseModel):
    """Explicit intersection table"""
    model_config = ConfigDict(extra='forbid')

    n: int = Field(..., ge=1)
    depth: int = Field(..., ge=1)
    intersections: List[IntersectionIn]

    @model_validator(mode='after')
    def indices_within_range(self):
        if self.depth > self.n:
            raise ValueError(f'depth {self.depth} exceeds n {self.n}')
        seen = set()
        for entry in self.intersections:
            key = tuple(entry.subset)
            if key[-1] > self.n:
                raise ValueError(f'subset {entry.subset} has an index above n={self.n}')
            if len(key) > self.depth:
                raise ValueError(f'subset {entry.subset} is deeper than depth={self.depth}')
            if key in seen:
                raise ValueError(f'subset {entry.subset} is listed twice')
            seen.add(key)
        return self


class IndependentIn(BaseModel):
    model_config = ConfigDict(extra='forbid')

    alphas: List[float] = Field(..., min_length=1)
    depth: int = Field(..., ge=1)

    @field_validator('alphas')
    @classmethod
    def alphas_are_probabilities(cls, value):
        for alpha in value:
            if not (math.isfinite(alpha) and 0.0 <= alpha <= 1.0):
                raise ValueError(f'alpha {alpha} is outside [0, 1]')
        return value

    @model_validator(mode='after')
    def depth_within_range(self):
        if self.depth > len(self.alphas):
            raise ValueError(f'depth {self.depth} exceeds n {len(self.alphas)}')
        return self


class GeneratorIn(BaseModel):
    model_config = ConfigDict(extra='forbid')

    independent: IndependentIn


class JointIn(BaseModel):
    """Dense atom masses; bit i-1 of the list index is set when event i occurs"""
    model_config = ConfigDict(extra='forbid')

    atoms: List[float] = Field(..., min_length=2)

    @field_validator('atoms')
    @classmethod
    def atoms_form_a_distribution(cls, value):
        size = len(value)
        if size & (size - 1):
            raise ValueError(f'atom count {size} is not a power of two')
        if any(not math.isfinite(a) or a < 0 for a in value):
            raise ValueError('atom masses must be finite and nonnegative')
        total = math.fsum(value)
        if abs(total - 1.0) > ATOM_SUM_TOLERANCE:
            raise ValueError(f'atom masses sum to {total!r}, not 1')
        return value

    @property
    def n(self):
        return len(self.atoms).bit_length() - 1


class InputDocument(BaseModel):
    """Exactly one of system, generator or joint"""
    model_config = ConfigDict(extra='forbid')

    system: Optional[SystemIn] = None
    generator: Optional[GeneratorIn] = None
    joint: Optional[JointIn] = None

    @model_validator(mode='after')
    def exactly_one_variant(self):
        present = [name for name in ('system', 'generator', 'joint') if getattr(self, name) is not None]
        if len(present) != 1:
            raise ValueError(f'expected exactly one of system, generator, joint; got {present or "none"}')
        return self


# ==================== Report Schemas ====================

class BoundRowOut(BaseModel):
    method: str
    r: int
    k: int
    direction: str
    partial: float
    correction: float
    value: float
    clamped: float
    labeling_note: str = ''

    @classmethod
    def from_result(cls, result):
        return cls(
            method=str(result.method),
            r=result.r,
            k=result.k,
            direction=str(result.direction),
            partial=result.partial,
            correction=result.correction,
            value=result.value,
            clamped=result.clamped,
            labeling_note=result.labeling_note,
        )


class MethodFailureOut(BaseModel):
    method: str
    message: str


class ExactOut(BaseModel):
    value: float
    remainder: float
    verdicts: Dict[str, bool]


class ReportMetadata(BaseModel):
    r: int
    k: int
    n: int
    depth: int
    digest: str
    s_values: List[float]
    labeling: Optional[List[int]] = None


class ReportDocument(BaseModel):
    metadata: ReportMetadata
    rows: List[BoundRowOut]
    companion: Optional[BoundRowOut] = None
    failures: List[MethodFailureOut] = []
    exact: Optional[ExactOut] = None
    notes: List[str] = []

    @classmethod
    def from_report(cls, report, labeling=None):
        exact = None
        if report.exact is not None:
            exact = ExactOut(
                value=report.exact,
                remainder=report.exact_remainder,
                verdicts=dict(report.verdicts),
            )
        return cls(
            metadata=ReportMetadata(
                r=report.r,
                k=report.k,
                n=report.n,
                depth=report.depth,
                digest=report.digest,
                s_values=list(report.s_values),
                labeling=list(labeling) if labeling is not None else None,
            ),
            rows=[BoundRowOut.from_result(row) for row in report.rows],
            companion=BoundRowOut.from_result(report.companion) if report.companion else None,
            failures=[MethodFailureOut(method=f.method, message=f.message) for f in report.failures],
            exact=exact,
            notes=list(report.notes),
        )
