"""Compositions of D_A = d + A ^ _ and dual derivatives delta + X -| _, solved stage by stage."""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple, Union

from ..errors import DegreeError, NoSolution, ValidationError
from ..forms import Connection, Form, MatrixForm, PolyVectorField, flat
from .covariant import solve_general
from .dual import solve_dual
from .report import SolveReport


class StageKind(str, enum.Enum):
    COVARIANT = "CovariantD"
    DUAL = "DualCovariantD"


@dataclass
class PipelineStage:
    """One factor D^p of the operator; ``initial_data[i]`` seeds the i-th first-order step."""

    kind: StageKind
    data: Union[MatrixForm, PolyVectorField]
    exponent: int = 1
    initial_data: List[Optional[Form]] = field(default_factory=list)

    def __post_init__(self):
        self.kind = StageKind(self.kind)
        if self.exponent < 0:
            raise ValidationError("stage exponent must be non-negative")

    def connection(self, fiber: int) -> MatrixForm:
        if isinstance(self.data, MatrixForm):
            return self.data
        # a vector field acts diagonally on every fiber component
        return Connection.scalar(flat(self.data), fiber)

    @property
    def degree_shift(self) -> int:
        return self.exponent if self.kind is StageKind.COVARIANT else -self.exponent


@dataclass
class PipelineResult:
    solution: Form
    reports: List[Tuple[int, int, SolveReport]]


def solve_pipeline(stages: Sequence[PipelineStage], J: Form, center=None, *,
                   degree: Optional[int] = None, strict: bool = True) -> PipelineResult:
    """Stages are listed outermost first, as the operator is written left to right."""
    shift = sum(s.degree_shift for s in stages)
    if degree is not None and degree + shift != J.degree:
        raise DegreeError(
            f"degree bookkeeping: unknown degree {degree} + {shift} != rhs degree {J.degree}"
        )
    if J.degree - shift < 0 or J.degree - shift > J.dim:
        raise DegreeError("stages imply an unknown of impossible degree")
    rhs = J
    reports = []
    for si, stage in enumerate(stages):
        A = stage.connection(J.fiber)
        for step in range(stage.exponent):
            c = stage.initial_data[step] if step < len(stage.initial_data) else None
            try:
                if stage.kind is StageKind.COVARIANT:
                    rep = solve_general(A, c, rhs, center, strict=strict, modes=False)
                else:
                    rep = solve_dual(A, c, rhs, center, strict=strict, modes=False)
            except NoSolution as exc:
                raise NoSolution(f"stage {si + 1}, step {step + 1} ({stage.kind.value}): {exc}",
                                 stage=(si, step), report=exc.report,
                                 obstruction=exc.obstruction, partial=exc.partial) from None
            reports.append((si, step, rep))
            rhs = rep.solution
    return PipelineResult(rhs, reports)
