"""Fit the angular-velocity Chebyshev polynomial from gyro samples.

Two sample flavors: discrete angular-velocity samples at epochs
t_1..t_N, or angular increments over the contiguous intervals
[t_{k-1}, t_k] with t_0 = 0.  Both reduce to a (possibly overdetermined)
linear system in the Chebyshev coefficients which is solved by a QR
factorization; the square nonsingular case interpolates exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import numpy.polynomial.chebyshev as npcheb

from .chebseries import ChebSeries3, TimeMap, segment_integral

# Fits with a larger condition estimate are flagged, not rejected.
ILL_CONDITIONED = 1e12


class SingularFitError(ValueError):
    """Rank-deficient design matrix."""

    def __init__(self, condition_estimate: float):
        super().__init__(
            f"rank-deficient fit (condition estimate {condition_estimate:.3e})"
        )
        self.condition_estimate = condition_estimate


@dataclass(frozen=True)
class SampleSet:
    """N gyro samples over [0, t_N].

    kind: 'velocity' (rad/s at each epoch) or 'increment' (rad over each
    interval [t_{k-1}, t_k], interval boundaries given by epochs with an
    implicit t_0 = 0).
    """

    kind: str
    epochs: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        if self.kind not in ("velocity", "increment"):
            raise ValueError(f"unknown sample kind {self.kind!r}")
        epochs = np.asarray(self.epochs, dtype=float)
        values = np.asarray(self.values, dtype=float)
        object.__setattr__(self, "epochs", epochs)
        object.__setattr__(self, "values", values)
        n = epochs.size
        if n < 2:
            raise ValueError("need at least 2 samples")
        if values.shape != (n, 3):
            raise ValueError("values must be an (N, 3) array")
        if not np.all(np.diff(epochs) > 0.0):
            raise ValueError("epochs must be strictly increasing")
        if self.kind == "increment" and epochs[0] <= 0.0:
            raise ValueError("increment intervals must start after t_0 = 0")
        if epochs[0] < 0.0 or epochs[-1] <= 0.0:
            raise ValueError("epochs must lie in [0, t_N] with t_N > 0")

    @property
    def count(self) -> int:
        return self.epochs.size

    @property
    def time_map(self) -> TimeMap:
        return TimeMap(float(self.epochs[-1]))


@dataclass(frozen=True)
class FitResult:
    """Fitted angular-velocity series with conditioning diagnostics."""

    omega_hat: ChebSeries3
    order: int
    time_map: TimeMap
    residual: float
    condition_estimate: float
    coeffs: np.ndarray = field(repr=False)

    @property
    def ill_conditioned(self) -> bool:
        return self.condition_estimate > ILL_CONDITIONED


def _qr_solve(design: np.ndarray, rhs: np.ndarray):
    q, r = np.linalg.qr(design)
    diag = np.abs(np.diag(r))
    dmax, dmin = diag.max(), diag.min()
    cond = np.inf if dmin == 0.0 else dmax / dmin
    if dmin <= dmax * 1e-15:
        raise SingularFitError(cond)
    coeffs = np.linalg.solve(r, q.T @ rhs)
    return coeffs, cond


def _check_order(n: int, count: int):
    if not 0 <= n <= count - 1:
        raise ValueError(f"fit order {n} must satisfy 0 <= n <= N-1 = {count - 1}")


def fit_velocity(samples: SampleSet, n: int) -> FitResult:
    """Solve the collocation system F_i(tau_k) c_i = omega_k."""
    if samples.kind != "velocity":
        raise ValueError("velocity fit needs velocity samples")
    _check_order(n, samples.count)
    tmap = samples.time_map
    taus = np.array([tmap.tau_of(t) for t in samples.epochs])
    design = npcheb.chebvander(taus, n)
    coeffs, cond = _qr_solve(design, samples.values)
    residual = float(np.max(np.abs(design @ coeffs - samples.values)))
    return FitResult(
        omega_hat=ChebSeries3.from_coeff_rows(coeffs),
        order=n,
        time_map=tmap,
        residual=residual,
        condition_estimate=cond,
        coeffs=coeffs,
    )


def fit_increment(samples: SampleSet, n: int) -> FitResult:
    """Solve G_{i,[tau_{k-1},tau_k]} c_i = (2/t_N) dtheta_k.

    The fitted series integrates back to the input increments exactly in
    the square nonsingular case.
    """
    if samples.kind != "increment":
        raise ValueError("increment fit needs increment samples")
    _check_order(n, samples.count)
    tmap = samples.time_map
    bounds = np.concatenate(([-1.0], [tmap.tau_of(t) for t in samples.epochs]))
    design = np.array(
        [
            [segment_integral(i, bounds[k], bounds[k + 1]) for i in range(n + 1)]
            for k in range(samples.count)
        ]
    )
    coeffs, cond = _qr_solve(design, (2.0 / tmap.t_n) * samples.values)
    # Residual in angle units: mismatch of the re-integrated increments.
    residual = float(np.max(np.abs(tmap.half * (design @ coeffs) - samples.values)))
    return FitResult(
        omega_hat=ChebSeries3.from_coeff_rows(coeffs),
        order=n,
        time_map=tmap,
        residual=residual,
        condition_estimate=cond,
        coeffs=coeffs,
    )


def fit(samples: SampleSet, n: int) -> FitResult:
    """Dispatch on the sample kind."""
    if samples.kind == "velocity":
        return fit_velocity(samples, n)
    return fit_increment(samples, n)
