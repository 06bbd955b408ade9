"""Fractional relaxation and subdiffusion solvers on power-law time meshes."""

from ._fracstep import (
    AccuracyError,
    __version__,
    convergence_rate,
    exact_diffusion,
    exact_diffusion_coefficient,
    exact_relaxation,
    l1_weights,
    mae1,
    mesh,
    ml,
    mre,
    run_table,
    solve_diffuse,
    solve_relax,
)

__all__ = [
    "AccuracyError",
    "__version__",
    "convergence_rate",
    "exact_diffusion",
    "exact_diffusion_coefficient",
    "exact_relaxation",
    "l1_weights",
    "mae1",
    "mesh",
    "ml",
    "mre",
    "run_table",
    "solve_diffuse",
    "solve_relax",
]
