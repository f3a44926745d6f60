"""Twistor lines of the Eguchi-Hanson twistor space inside Nagata's threefold."""

from ._accel import HAS_NUMBA, USE_NUMBA, backend_name
from .curves import (
    Direction,
    Family,
    LineParams,
    ReducibleLimit,
    SpacePoint,
    Stratum,
    eval_line,
    eval_trajectory,
    eval_trajectory_factored,
    limit_curve,
    on_Q,
    params_distance,
    space_distance,
    trajectory_map,
)
from .errors import (
    ChartError,
    DomainError,
    InvalidFiberError,
    InvalidMapError,
    NumericalFailureError,
    OnDiagonalError,
    OnQError,
    TwistorError,
)
from .incidence import (
    FiberZeroPoint,
    SolverTrace,
    fiber_zero_point,
    incidence_map,
    jacobian,
    jacobian_with_chart,
    solve_fiber_zero,
    solve_line_through,
)
from .sphere import ChordalTolerance, FractionalMap, SpherePoint, antipodal, chordal_distance
from .symmetry import (
    GroupElement,
    act_on_fiber_zero,
    act_on_params,
    act_on_space,
    real_structure,
    swap_involution,
    transport_on_K,
)
from .verifier import VerificationPlan, VerificationReport, verify_all, verify_foliation

__version__ = "0.1.0"
