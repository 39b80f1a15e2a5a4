"""LP and polytope layer shared by every solver in the package."""

from .backend import available_backends, backend_name, get_kernel
from .lp import (
    DUAL_TOL,
    GAP_TOL,
    PRIMAL_TOL,
    LinearProgram,
    LpResiduals,
    LpSolution,
    reset_stats,
    solve_lp,
    solve_stats,
)
from .polytope import (
    deduplicate,
    enumerate_vertices,
    extreme_points,
    membership_residual,
    polytope_contains,
)

__all__ = [
    "DUAL_TOL",
    "GAP_TOL",
    "PRIMAL_TOL",
    "LinearProgram",
    "LpResiduals",
    "LpSolution",
    "available_backends",
    "backend_name",
    "deduplicate",
    "enumerate_vertices",
    "extreme_points",
    "get_kernel",
    "membership_residual",
    "polytope_contains",
    "reset_stats",
    "solve_lp",
    "solve_stats",
]
