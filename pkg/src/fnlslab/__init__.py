"""Fourier pseudospectral laboratory for 1-D fractional NLS equations."""

from .analysis import (
    BlowupFit,
    ModelComparison,
    SpectrumFit,
    compare_models,
    fit_blowup_rate,
    fit_fourier_asymptotics,
    min_resolved_distance,
    predicted_exponents,
    scaling_factor_series,
    singularity_stop_check,
)
from .diagnostics import (
    energy,
    mass,
    relative_energy_drift,
    sobolev_seminorm,
    sup_norm,
)
from .evolution import (
    MonitorConfig,
    RunResult,
    TimeGrid,
    evolve,
    linear_flow,
    nonlinear_flow,
    step_splitting4,
    step_stiff_rk4,
)
from .grids import (
    Grid,
    GridMismatchError,
    PhysicalField,
    SpectralField,
    apply_fractional_laplacian,
    to_physical,
    to_spectral,
)
from .ground_state import (
    GroundState,
    GroundStateProblem,
    closed_form_soliton,
    continuation_in_s,
    gmres_solve,
    jacobian_vector_product,
    newton_krylov,
    rescale_omega,
    residual,
    tail_exponent,
)
from .model import ModelParams

__version__ = "0.1.0"
