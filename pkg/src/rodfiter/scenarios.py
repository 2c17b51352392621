"""Coning-motion truth generation, gyro error injection and an ODE oracle.

The truth motion rotates by a fixed half-angle about an axis that itself
revolves in the y-z plane:

    omega(t) = Omega * [-2 sin^2(alpha/2), -sin(alpha) sin(Omega t),
                        sin(alpha) cos(Omega t)]

with attitude q(t) = cos(alpha/2) + sin(alpha/2)*[0, cos Omega t, sin Omega t].
|omega| is time-invariant and the instantaneous axis stays orthogonal to
omega, which maximizes the noncommutativity terms; this is the standard
stress test for attitude integration.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import kinematics as kin

# deg/h -> rad/s and deg/sqrt(h) -> rad/sqrt(s)
DEG_PER_HOUR = math.radians(1.0) / 3600.0
DEG_PER_SQRT_HOUR = math.radians(1.0) / 60.0


class PropagationError(RuntimeError):
    """Non-finite angular velocity fed to the quaternion propagator."""


@dataclass(frozen=True)
class ConingScenario:
    """Coning truth parameters plus sampling and sensor-error config.

    alpha: coning half-angle, rad.  Omega: coning frequency, rad/s.
    T: sample period, s.  N: samples per window.  n: fit order.
    bias: rad/s.  arw: angle-random-walk coefficient, rad/sqrt(s).
    """

    alpha: float
    Omega: float
    T: float
    N: int
    n: int
    bias: np.ndarray = field(default_factory=lambda: np.zeros(3))
    arw: float = 0.0
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "bias", np.asarray(self.bias, dtype=float))
        if not 0.0 < self.alpha < math.pi / 2.0:
            raise ValueError("coning half-angle must lie in (0, pi/2)")
        if self.Omega <= 0.0 or self.T <= 0.0:
            raise ValueError("Omega and T must be positive")
        if self.N < 2:
            raise ValueError("need at least 2 samples per window")
        if not 0 <= self.n <= self.N - 1:
            raise ValueError("fit order must satisfy 0 <= n <= N-1")
        if self.bias.shape != (3,):
            raise ValueError("bias must be a 3-vector")
        if self.arw < 0.0:
            raise ValueError("ARW coefficient must be nonnegative")

    @property
    def window_length(self) -> float:
        return self.N * self.T

    @property
    def has_sensor_errors(self) -> bool:
        return self.arw > 0.0 or bool(np.any(self.bias != 0.0))

    @classmethod
    def from_sensor_spec(cls, alpha, Omega, T, N, n,
                         bias_deg_h=(0.0, 0.0, 0.0), arw_deg_sqrt_h=0.0,
                         seed=0) -> "ConingScenario":
        """Build with bias in deg/h and ARW in deg/sqrt(h)."""
        return cls(
            alpha=alpha, Omega=Omega, T=T, N=N, n=n,
            bias=np.asarray(bias_deg_h, dtype=float) * DEG_PER_HOUR,
            arw=arw_deg_sqrt_h * DEG_PER_SQRT_HOUR,
            seed=seed,
        )


def coning_axis(sc: ConingScenario, t: float) -> np.ndarray:
    return np.array([0.0, math.cos(sc.Omega * t), math.sin(sc.Omega * t)])


def coning_omega(sc: ConingScenario, t: float) -> np.ndarray:
    """Body angular velocity of the coning motion, rad/s."""
    sa = math.sin(sc.alpha)
    return sc.Omega * np.array(
        [
            -2.0 * math.sin(sc.alpha / 2.0) ** 2,
            -sa * math.sin(sc.Omega * t),
            sa * math.cos(sc.Omega * t),
        ]
    )


def coning_truth_quaternion(sc: ConingScenario, t: float) -> np.ndarray:
    half = sc.alpha / 2.0
    return np.r_[math.cos(half), math.sin(half) * coning_axis(sc, t)]


def coning_rodrigues(sc: ConingScenario, t: float) -> np.ndarray:
    return 2.0 * math.tan(sc.alpha / 2.0) * coning_axis(sc, t)


def coning_increment(sc: ConingScenario, k: int) -> np.ndarray:
    """Closed-form integral of the angular velocity over [(k-1)T, kT], rad."""
    if k < 1:
        raise ValueError("interval index starts at 1")
    sa = math.sin(sc.alpha)
    ta, tb = (k - 1) * sc.T, k * sc.T
    return np.array(
        [
            -2.0 * sc.Omega * math.sin(sc.alpha / 2.0) ** 2 * sc.T,
            sa * (math.cos(sc.Omega * tb) - math.cos(sc.Omega * ta)),
            sa * (math.sin(sc.Omega * tb) - math.sin(sc.Omega * ta)),
        ]
    )


def corrupt(values: np.ndarray, sc: ConingScenario, kind: str,
            stream: int = 0) -> np.ndarray:
    """Inject bias and angle-random-walk noise into gyro samples.

    Increments get bias*T + arw*sqrt(T)*eta per interval; velocity
    samples get bias + (arw/sqrt(T))*eta.  The draw is deterministic for
    a fixed (seed, stream) pair; callers give each window its own stream.
    """
    values = np.asarray(values, dtype=float)
    if kind not in ("velocity", "increment"):
        raise ValueError(f"unknown sample kind {kind!r}")
    rng = np.random.default_rng([sc.seed, stream])
    eta = rng.standard_normal(values.shape)
    sqrt_t = math.sqrt(sc.T)
    if kind == "increment":
        return values + sc.bias * sc.T + sc.arw * sqrt_t * eta
    return values + sc.bias + (sc.arw / sqrt_t) * eta


def ode_oracle(omega_fn, t_span, step: float | None = None) -> np.ndarray:
    """Fine-step quaternion increment over t_span = (t0, t1).

    Classical 4-stage Runge-Kutta on 2*qdot = q o omega, renormalized
    each step; returns the incremental rotation from t0 to t1.  Default
    step resolves the span into 8000 steps.
    """
    t0, t1 = float(t_span[0]), float(t_span[1])
    if t1 <= t0:
        raise ValueError("t_span must have positive length")
    if step is None:
        step = (t1 - t0) / 8000.0
    steps = max(1, int(math.ceil((t1 - t0) / step)))
    h = (t1 - t0) / steps

    def deriv(t, q):
        w = np.asarray(omega_fn(t), dtype=float)
        if not np.all(np.isfinite(w)):
            raise PropagationError(f"non-finite angular velocity at t={t}")
        return 0.5 * kin.quat_multiply(q, np.r_[0.0, w])

    q = kin.quat_identity()
    t = t0
    for _ in range(steps):
        k1 = deriv(t, q)
        k2 = deriv(t + h / 2.0, q + h / 2.0 * k1)
        k3 = deriv(t + h / 2.0, q + h / 2.0 * k2)
        k4 = deriv(t + h, q + h * k3)
        q = q + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        q = kin.quat_normalize(q)
        t += h
    return q
