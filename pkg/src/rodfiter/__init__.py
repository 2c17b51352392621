"""Attitude reconstruction from gyro samples by functional iteration.

Fits a Chebyshev angular-velocity polynomial to discrete velocity or
increment samples, iterates the Rodrigues-vector integral equation to an
analytic incremental-attitude polynomial, and benchmarks the result
against approximate rotation-vector variants and the classical
two-sample update under coning motion.
"""

from .chebseries import ChebSeries, ChebSeries3, TimeMap, cheb_nodes, segment_integral
from .fitting import FitResult, SampleSet, SingularFitError, fit, fit_increment, fit_velocity
from .iteration import (
    IterationConfig,
    IterationTrace,
    convergence_precondition,
    iterate,
    iterate_rodrigues,
    iterate_rotation_approx,
    mainstream_two_sample,
    omega_from_rodrigues_poly,
    required_iterations,
)
from .kinematics import (
    attitude_error,
    dcm_from_rodrigues,
    dcm_from_rotvec,
    quat_from_rodrigues,
    quat_from_rotvec,
    quat_multiply,
    rodrigues_from_quat,
    update_attitude,
)
from .scenarios import (
    ConingScenario,
    coning_increment,
    coning_omega,
    coning_rodrigues,
    coning_truth_quaternion,
    corrupt,
    ode_oracle,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
