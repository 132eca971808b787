"""Baker-Akhiezer functions for the Macdonald system at integer coupling and the
hyperbolic relativistic Calogero-Moser joint eigenfunction built from them."""

from .ba import psi_eval, psi_native, varphi_coeffs, varphi_eval
from .errors import (
    AccuracyError,
    CalibrationError,
    CmeigError,
    ConfigError,
    DomainError,
    PoleError,
    PreconditionError,
)
from .params import ModelParams, build_params
from .quadrature import phi_quadrature, psi_residue_formula, varphi2_contour
from .theorem import DEFAULT_CONVENTION, calibrate, phi_closed_form, run_suite

__version__ = "0.1.0"
