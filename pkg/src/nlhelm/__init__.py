"""Real standing waves of the nonlinear Helmholtz equation.

Numerical machinery for -Delta u - k^2 u = f(x, u) with decaying
standing-wave asymptotics: real-order Bessel evaluation, the capacity
(Dirichlet-to-Neumann) operator and its negative-definite real part, the
nonlocal eigenvalue problem on a ball with its degenerate-radius set, a
radial shooting solver with energy and far-field diagnostics, and a 1-D
variational solver finding multiple critical points plus the ground-state
minimax level.
"""

from .bessel import BesselValue, bessel_jy, bessel_zero_scan, hankel1_modsq
from .capacity import (
    CapacityCoefficient,
    HarmonicCoefficients,
    capacity_coeff,
    capacity_coeffs,
    dtn_apply,
    exterior_eval,
    harmonic_dim,
    ktr_apply,
    radiation_diagnostics,
)
from .ball_spectrum import (
    EigenPair,
    SpectralSplitting,
    degenerate_radii,
    eigenvalues,
    radial_bc_mismatch,
    shared_extension_radii,
)
from .nonlinearity import (
    Nonlinearity,
    Weight,
    check_ineq14,
    load_model,
    split_f1_f2,
    validate_f,
    validate_g,
)
from .radial import RadialSolution, radiation_check, shoot, taylor_start
from .variational import (
    Grid1D,
    Grid1DSolution,
    ground_state_minimax,
    newton_deflated_solve,
    phi_eval,
    phi_grad,
    splitting_1d,
)

__version__ = "0.1.0"

__all__ = [
    "BesselValue", "bessel_jy", "bessel_zero_scan", "hankel1_modsq",
    "CapacityCoefficient", "HarmonicCoefficients", "capacity_coeff",
    "capacity_coeffs", "dtn_apply", "ktr_apply", "exterior_eval",
    "radiation_diagnostics", "harmonic_dim",
    "EigenPair", "SpectralSplitting", "eigenvalues", "radial_bc_mismatch",
    "degenerate_radii", "shared_extension_radii",
    "Nonlinearity", "Weight", "validate_f", "validate_g", "split_f1_f2",
    "check_ineq14", "load_model",
    "RadialSolution", "shoot", "taylor_start", "radiation_check",
    "Grid1D", "Grid1DSolution", "newton_deflated_solve", "ground_state_minimax",
    "phi_eval", "phi_grad", "splitting_1d",
    "__version__",
]
