"""Wave-breaking simulation and verification for nonlocal Whitham-type equations.

The package has two legs that check each other:

* a pseudospectral solver for u_t + u u_x + K * u_x = 0 on a periodic
  domain, tracking the extrema of u_x and detecting gradient blowup, and
* exact slope-plane analysis: the breaking region, the classical asymmetry
  condition, hitting-time and blowup deadlines, and the comparison ODE
  system whose trajectories certify those bounds numerically.
"""

from .breaking_theory import (
    BoundsReport,
    RegionLabel,
    SlopePair,
    boundary_identity,
    bounds_report,
    classify,
    deadline,
    in_omega,
    in_omega_closure,
    normalize,
    riccati_envelope,
    seliger,
    t_star,
    T_star,
    triangle_decay_rate,
)
from .errors import (
    AccuracyError,
    ConfigurationError,
    DomainError,
    GeometryError,
    IntegratorFailure,
    RangeError,
    SingularityError,
    WavebreakError,
)
from .initial_data import InitialCondition, build_profile, flat_profile, measured_extrema
from .kernels import (
    KernelAdmissibility,
    PhaseVelocity,
    check_admissibility,
    k_at_origin,
    kernel_eval,
    multiplier,
    parse_kernel,
)
from .phase_plane import (
    DEFAULT_WINDOW,
    PortraitGrid,
    Trajectory,
    TrajectoryEvents,
    Window,
    integrate,
    portrait,
    vector_field,
)
from .spectral_solver import ExtremaSample, Grid, SimReport, SolverConfig, Stepper, Verdict, rhs, run
from .sweep import SweepResult, SweepRow, SweepSpec, run_sweep

__version__ = "0.1.0"
