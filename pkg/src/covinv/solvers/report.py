from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

from ..forms import Form
from ..homotopy import residual_min_degree


class ConstraintStatus(str, enum.Enum):
    SATISFIED = "Satisfied"
    NO_SOLUTION = "NoSolution"
    NOT_APPLICABLE = "NotApplicable"


@dataclass
class SolveReport:
    """Outcome of one solver call.

    ``solution`` is expressed in the caller's coordinates.  ``residual`` is
    computed in coordinates centred at ``center``, the only frame in which
    truncation grading is meaningful.
    """

    solution: Form
    residual: Form
    iterations: int = 0
    gauge_mode_basis: List[Form] = field(default_factory=list)
    kernel_basis: List[Form] = field(default_factory=list)
    constraint_status: ConstraintStatus = ConstraintStatus.NOT_APPLICABLE
    radius_estimate: Optional[float] = None
    center: Tuple = ()
    local_solution: Optional[Form] = None
    terms: List[Form] = field(default_factory=list)
    parts: Dict[str, Form] = field(default_factory=dict)
    diagnostics: Dict[str, Any] = field(default_factory=dict)

    @property
    def residual_min_degree(self) -> int:
        return residual_min_degree(self.residual)

    @property
    def truncation(self) -> int:
        return self.solution.trunc

    def residual_ok(self) -> bool:
        return self.residual_min_degree >= self.truncation
