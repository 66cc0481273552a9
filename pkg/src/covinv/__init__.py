"""Exact local inversion of the covariant exterior derivative d + A ^ _ on truncated polynomial data."""
from .coeff import Series, default_names, monomials, polynomial, series_eval, series_exp
from .errors import (
    CovinvError,
    DegreeError,
    DimensionMismatch,
    FiberMismatch,
    FrameInvalid,
    InitialDataInKernel,
    InitialDataNotCoexact,
    InitialDataNotExact,
    Inconsistent,
    InvariantViolation,
    NoSolution,
    NonNilpotentArgument,
    NotAntiexact,
    ParseError,
    RHSNotExact,
    SingularGauge,
    ValidationError,
)
from .forms import (
    Connection,
    Form,
    GaugeElement,
    MatrixForm,
    PolyVectorField,
    conn_interior,
    conn_wedge,
    eta,
    flat,
    hodge_star,
    interior,
    matrix_matrix_wedge,
    matrix_wedge,
    sharp,
    star_inverse,
    wedge,
)
from .homotopy import (
    Decomposition,
    codecompose,
    codiff,
    cohomotopy_h,
    decompose,
    dual_point_part,
    ext_d,
    homotopy_H,
    is_closed,
    is_coclosed,
    point_part,
    residual_min_degree,
)
from .linsys import SparseSystem, solve_sparse
from .solvers import *  # noqa: F401,F403

__version__ = "0.1.0"
