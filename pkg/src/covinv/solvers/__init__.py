from .covariant import (
    alternating_series,
    cov_d,
    radius_bound,
    radius_estimate,
    solve_general,
    solve_homogeneous,
    solve_inhom_exact,
    solve_scalar_homogeneous,
)
from .curvature import CurvatureResult, curvature, solve_curvature
from .dual import dual_cov, solve_dual
from .geometry import HorizontalFrame, HorizontalResult, gauge_push, gauge_transform, horizontal_delta
from .integral import neumann_integral_solve, riemann_graves_solve
from .linear import (
    coexact_gauge_mode_basis,
    dual_kernel_basis,
    gauge_mode_basis,
    kernel_basis,
    solve_interior_constraint,
    solve_wedge_constraint,
)
from .pipeline import PipelineResult, PipelineStage, StageKind, solve_pipeline
from .report import ConstraintStatus, SolveReport
