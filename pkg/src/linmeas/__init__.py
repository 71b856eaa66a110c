"""Linear position measurements of a particle in Gaussian states.

Error and disturbance of linear probe measurements, the measurements that
saturate the error-disturbance bound in a minimum uncertainty state, their
output distributions and posterior states, and a phase-space Monte Carlo
oracle for all of it.
"""

from .distributions import (
    Interval,
    MixtureMoments,
    NullEventError,
    PosteriorFamily,
    conditional_q0_given_meter,
    joint_p,
    joint_q,
    meter_marginal,
    mixture_moments,
    posterior_family,
)
from .dynamics import (
    InteractionParams,
    TransferMatrix,
    expm_series,
    interaction_matrix,
    momentum_transfer,
    transfer_matrix,
)
from .gaussian import Constants, Gaussian1D, Gaussian2D, GaussianState, char2, gauss_rms, pdf1, sample2
from .measurement import (
    ErrorDisturbanceReport,
    LinearPositionMeasurement,
    disturbance_p,
    disturbance_q,
    edr_report,
    error_q,
    gauss_disturbance_p,
    gauss_error_q,
)
from .optimal import (
    Family,
    InfeasibleError,
    Regime,
    SolverInput,
    SolverOutput,
    family,
    is_minimum_error_disturbance,
    probe_xi_c,
    solve_params,
)

__version__ = "0.1.0"

__all__ = [
    "Constants",
    "ErrorDisturbanceReport",
    "Family",
    "Gaussian1D",
    "Gaussian2D",
    "GaussianState",
    "InfeasibleError",
    "InteractionParams",
    "Interval",
    "LinearPositionMeasurement",
    "MixtureMoments",
    "NullEventError",
    "PosteriorFamily",
    "Regime",
    "SolverInput",
    "SolverOutput",
    "TransferMatrix",
    "char2",
    "conditional_q0_given_meter",
    "disturbance_p",
    "disturbance_q",
    "edr_report",
    "error_q",
    "expm_series",
    "family",
    "gauss_disturbance_p",
    "gauss_error_q",
    "gauss_rms",
    "interaction_matrix",
    "is_minimum_error_disturbance",
    "joint_p",
    "joint_q",
    "meter_marginal",
    "mixture_moments",
    "momentum_transfer",
    "pdf1",
    "posterior_family",
    "probe_xi_c",
    "sample2",
    "solve_params",
    "transfer_matrix",
]
