"""Two-level fourth-order finite differences for the 1-D time-fractional
convection-diffusion-reaction equation with variable coefficients.

The solver discretizes the Caputo derivative of order ``lam`` in (0, 1)
at times shifted by ``alpha = 1 - lam`` and advances in two implicit
half steps, each solving a pentadiagonal system built from fourth-order
five-point stencils.  Accuracy is ``O(k**(2 - lam/2) + h**4)``.

Typical use::

    from fraccdr import FractionalParams, GridSpec, example1, run, error_vs_exact

    prob = example1(lam=0.9)
    grid = GridSpec(M=16, N=200)
    hist, diag = run(prob, grid, FractionalParams(0.9))
    print(error_vs_exact(hist, prob))
"""

from .caputo import (
    HalfStepHistory,
    caputo_quadrature_oracle,
    delta_t,
    discrete_caputo_full,
    discrete_caputo_half,
)
from .harness import (
    ConvergenceReport,
    StudyConfig,
    emit_csv,
    emit_plot,
    run_study,
)
from .problems import Problem, error_vs_exact, example1, example2
from .spatial import (
    GridSpec,
    apply_Lh,
    inner,
    l2_norm,
    space_time_l2_norm,
    stencil_dx4,
    stencil_dxx4,
)
from .stepper import advance_full, advance_half, init, run
from .weights import (
    ASequence,
    FractionalParams,
    FullLevelWeights,
    HalfLevelWeights,
    a_sequence,
    full_level_weights,
    gamma_fn,
    half_level_weights,
    coefficient_inequality_report,
    stability_condition,
)
from .linsys import PentaSystem, assemble_full, assemble_half, solve_penta

__version__ = "0.1.0"

__all__ = [
    "ASequence",
    "ConvergenceReport",
    "FractionalParams",
    "FullLevelWeights",
    "GridSpec",
    "HalfLevelWeights",
    "HalfStepHistory",
    "PentaSystem",
    "Problem",
    "StudyConfig",
    "a_sequence",
    "advance_full",
    "advance_half",
    "apply_Lh",
    "assemble_full",
    "assemble_half",
    "caputo_quadrature_oracle",
    "delta_t",
    "discrete_caputo_full",
    "discrete_caputo_half",
    "emit_csv",
    "emit_plot",
    "error_vs_exact",
    "example1",
    "example2",
    "full_level_weights",
    "gamma_fn",
    "half_level_weights",
    "init",
    "inner",
    "l2_norm",
    "coefficient_inequality_report",
    "run",
    "run_study",
    "solve_penta",
    "space_time_l2_norm",
    "stability_condition",
    "stencil_dx4",
    "stencil_dxx4",
]
