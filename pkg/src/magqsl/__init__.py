"""Relativistic Landau-type levels and quantum speed limits in power-law magnetic fields."""

from .bbound import (
    SCAN_WINDOW,
    SEPARATION_THRESHOLD,
    BBScanRow,
    CriticalFieldResult,
    NoCrossing,
    NoSeparation,
    bb_row,
    classify_regions,
    critical_field,
    scan,
)
from .constants import (
    B_CR_GAUSS,
    LAMBDA_E_PM,
    MEC2_ERG,
    FieldProfile,
    epsilon_of_alpha,
    from_beta,
    to_beta,
    velocity_to_c_units,
)
from .problem import QuantumNumbers, ScaledProblem, label_for_sigma, sigma_for_label
from .qsl import (
    QslPoint,
    delta_h,
    mean_energy,
    pair_epsilons,
    qsl_velocity,
    sqsl,
    sweep_b0,
    sweep_n,
    tau_qsl,
)
from .quadrature import OverlapResult, QuadratureError, displacement, mean_radius_t, normalize, overlap_s
from .shooting import (
    BracketError,
    ConvergenceError,
    EigenState,
    RadialSolution,
    converged_alpha_tilde,
    set_solver_overrides,
    solve_level,
    solve_pair,
    spectrum,
)

__version__ = "0.1.0"
