"""First-order mixed finite element laboratory for the 2D Stokes equations."""

from ._core import (
    Triangulation,
    counterexample_eps_sweep,
    counterexample_px,
    dof_counts,
    fit_rate,
    load_mesh,
    make_mesh,
    run_experiment,
    solve,
    verify_companions,
)

__all__ = [
    "Triangulation",
    "counterexample_eps_sweep",
    "counterexample_px",
    "dof_counts",
    "fit_rate",
    "load_mesh",
    "make_mesh",
    "run_experiment",
    "solve",
    "verify_companions",
]
