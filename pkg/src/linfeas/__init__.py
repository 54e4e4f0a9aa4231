"""Exact linear-feasibility solving: find x with A x > 0 for integer A.

The solver runs damped Newton descent on a barrier potential over the dual
cone, either in floating point or entirely in rational arithmetic with
bounded bit sizes; a classical perceptron baseline and reduction chains to
general linear programming (with exact certificates) are layered on top.
"""

from .instances import (
    Instance,
    generate_feasible_instance,
    parse_instance,
    verify_solution_exact,
    write_instance,
)
from .newton import (
    QPolicy,
    SolveReport,
    SolverConfig,
    SolveStatus,
    choose_denominator,
    solve_feasibility,
)
from .perceptron import perceptron_solve, perceptron_step
from .potential import (
    DualIterate,
    NormalizedInstance,
    potential_gradient,
    potential_hessian,
    potential_value,
    residual,
)
from .qlinalg import GridVector, ceil_to_grid, isqrt_factor2, solve_spd
from .reductions import (
    Certificate,
    feasibility_certificate,
    hadamard_det_bound,
    lift_solution,
    normalize_rows,
    omega_bound,
    solve_lp,
    solve_strict,
    solve_strict_homogeneous,
    solve_weak,
)

__all__ = [
    "Certificate",
    "DualIterate",
    "GridVector",
    "Instance",
    "NormalizedInstance",
    "QPolicy",
    "SolveReport",
    "SolveStatus",
    "SolverConfig",
    "ceil_to_grid",
    "choose_denominator",
    "feasibility_certificate",
    "generate_feasible_instance",
    "hadamard_det_bound",
    "isqrt_factor2",
    "lift_solution",
    "normalize_rows",
    "omega_bound",
    "parse_instance",
    "perceptron_solve",
    "perceptron_step",
    "potential_gradient",
    "potential_hessian",
    "potential_value",
    "residual",
    "solve_feasibility",
    "solve_lp",
    "solve_spd",
    "solve_strict",
    "solve_strict_homogeneous",
    "solve_weak",
    "verify_solution_exact",
    "write_instance",
]
