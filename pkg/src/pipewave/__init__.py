"""Time-periodic subsonic gas flow in a friction pipe.

Solver suite for the 1-D isentropic Euler equations with a nonlinear friction
source on a bounded pipe, driven purely by time-periodic boundary data in the
subsonic regime: a characteristic fixed-point solver for the periodic field,
an upwind solver for the nonlinear initial-boundary value problem, an
independent finite-volume oracle, and stability experiments measuring the
geometric decay of perturbations.
"""

from .boundary import BoundaryData, HarmonicSeries
from .characteristics import CharPath, integrate_source_along, march_family, trace_characteristic
from .config import SimulationConfig, default_config, parse_config
from .errors import (CFLError, ConfigError, ConvergenceError, DomainError,
                     InsufficientDataError, PipewaveError, RegimeError, SonicError)
from .fields import PeriodicField, interpolate_field
from .friction import BetaReport, FrictionSpec, eval_beta, validate_beta
from .fvm import (ConsCells, FieldComparison, cells_to_phi, compare_fields,
                  conservative_flux, run_oracle, rusanov_step)
from .gas import (EigenSpeeds, GasParams, Perturbation, PhysState, RiemannState,
                  SubsonicReport, char_speeds, char_speeds_phi, eigenvalues,
                  from_riemann, invariants_from_primitive, primitive_from_invariants,
                  source_term, subsonic_check, to_riemann)
from .ibvp import (DIRICHLET, BoundaryMode, CompatibilityReport, IbvpState, Trajectory,
                   apply_boundary, check_compatibility, make_compatible_perturbation,
                   run_ibvp, step_ibvp)
from .periodic import SolverReport, c1_norm_estimate, linearized_sweep, solve_periodic
from .stability import (DecayFit, StabilityReport, closure_residual,
                        equivalent_boundary_data, fit_decay,
                        run_stability_experiment, window_distances)

__version__ = "0.1.0"
