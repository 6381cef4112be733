"""Radial Toeplitz operators on the Fock space: eigenvalue sequences,
the square-root metric, heat-kernel asymptotics and symbol synthesis."""
from __future__ import annotations

from .approx import ApproxReport, PipelineConfig, approximate_sequence
from .eigenvalues import gamma, gamma_closed, gamma_prefix, gamma_values
from .errors import (AccuracyError, ClosedFormFallback, DomainError, FockradError,
                     InfeasibleError, RangeError, SpecError)
from .heat import asymptotic_gamma, convolve_heat, convoluzation_error
from .kernel import kernel, kernel_y, log_F_shift, log_kernel, stirling_bracket
from .metrics import kappa, kappa_adjacent, lipschitz_statistic, modulus_estimate, rho
from .oscillation import TargetSequence, extend, membership_report, named_target
from .symbols import load_symbol, parse_symbol

__version__ = "0.1.0"
