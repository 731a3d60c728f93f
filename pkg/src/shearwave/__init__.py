"""Small-amplitude periodic water waves over layered step vorticity.

The package locates where periodic waves branch off laminar flows with
piecewise constant vorticity and builds the first-order wave field there.
"""

from .errors import (
    AmplitudeError,
    DomainError,
    InfeasibleModeError,
    NumericError,
    PBCViolation,
    ShearwaveError,
    SingularSymbolError,
    ValidationError,
)
from .model import PhysicalConstants, VorticityProfile, big_gamma, gamma_at, gamma_sup
from .laminar import LaminarFlow
from .sturm import (
    BifurcationPoint,
    ShootingResult,
    analytic_layer_solution,
    bifurcation_lambda,
    check_condition_d2,
    lambda0,
    min_period_divisor,
    mu_of_lambda,
    shoot_left,
    shoot_right,
    xi,
    xi_lambda,
    xi_mu,
)
from .dispersion import (
    DispersionInput,
    MultiplierSymbolInput,
    dispersion_residual,
    dispersion_vs_shooting,
    multiplier_symbol,
    solve_dispersion,
    special_case_equal_vorticity,
    symbol_decay_check,
)
from .wavefield import (
    WaveField,
    check_pbc,
    first_order_height,
    laminar_field,
    pb_residual,
    physical_fields,
    stream_function,
    weak_residual,
)

__version__ = "0.1.0"
