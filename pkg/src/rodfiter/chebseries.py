"""Chebyshev-series algebra for 3-vector polynomial kinematics.

Scalar and 3-vector-valued Chebyshev series of the first kind on
tau in [-1, 1], with the products, cross/dot combinations and running
integrals the attitude iteration engines need.  All arithmetic stays
in the Chebyshev basis; a monomial conversion is provided only for
cross-checking against closed-form polynomial expressions.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import numpy.polynomial.chebyshev as npcheb

# Coefficients below this magnitude are trimmed from the tail after
# every operation.  Must sit well below the round-off plateau of the
# iterates: differentiation amplifies the trimmed tail, and the rate
# recovered through the reverse formula has to stay at the 1e-14 level.
TRIM_TOL = 1e-18

# Evaluation arguments may overshoot [-1, 1] by this much (clamped).
EVAL_SLACK = 1e-12


class DomainError(ValueError):
    """Evaluation or integration argument outside [-1, 1]."""


def _trim(coeffs) -> np.ndarray:
    c = np.atleast_1d(np.asarray(coeffs, dtype=float))
    if c.ndim != 1 or c.size == 0:
        raise ValueError("coefficients must be a non-empty 1-d sequence")
    n = c.size
    while n > 1 and abs(c[n - 1]) < TRIM_TOL:
        n -= 1
    return np.array(c[:n])


def _clamp_taus(taus):
    t = np.asarray(taus, dtype=float)
    if np.any(np.abs(t) > 1.0 + EVAL_SLACK):
        raise DomainError(f"tau outside [-1, 1]: {taus!r}")
    return np.clip(t, -1.0, 1.0)


def basis_value(i: int, tau) -> float:
    """Value of the degree-i first-kind basis polynomial F_i(tau)."""
    unit = np.zeros(i + 1)
    unit[i] = 1.0
    return npcheb.chebval(np.asarray(tau, dtype=float), unit)


def cheb_nodes(count: int) -> np.ndarray:
    """`count` extrema nodes on [-1, 1], endpoints included."""
    if count < 2:
        raise ValueError("need at least 2 nodes")
    return np.cos(np.linspace(np.pi, 0.0, count))


def segment_integral(i: int, tau_a: float, tau_b: float) -> float:
    """Integral of F_i over [tau_a, tau_b] inside [-1, 1].

    Uses the antiderivative i*F_{i+1}(x)/(i^2-1) - x*F_i(x)/(i-1) for
    i != 1 and x^2/2 for i = 1.
    """
    if not (-1.0 - EVAL_SLACK <= tau_a <= tau_b <= 1.0 + EVAL_SLACK):
        raise DomainError(f"bad segment [{tau_a}, {tau_b}]")
    if i < 0:
        raise ValueError("basis index must be >= 0")
    if i == 1:
        return (tau_b**2 - tau_a**2) / 2.0

    def anti(x):
        return i * basis_value(i + 1, x) / (i * i - 1) - x * basis_value(i, x) / (i - 1)

    return float(anti(tau_b) - anti(tau_a))


@dataclass(frozen=True)
class TimeMap:
    """Affine map t = (t_n/2)(1 + tau) between [0, t_n] and [-1, 1]."""

    t_n: float

    def __post_init__(self):
        if not self.t_n > 0.0:
            raise ValueError("interval length must be positive")

    @property
    def half(self) -> float:
        return self.t_n / 2.0

    def tau_of(self, t: float) -> float:
        return 2.0 * t / self.t_n - 1.0

    def t_of(self, tau: float) -> float:
        return self.half * (1.0 + tau)


class ChebSeries:
    """Scalar series sum_i a_i F_i(tau) on [-1, 1]."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        self.coeffs = _trim(coeffs)

    @classmethod
    def zero(cls) -> "ChebSeries":
        return cls([0.0])

    @property
    def degree(self) -> int:
        return self.coeffs.size - 1

    def __call__(self, tau) -> float:
        return float(npcheb.chebval(_clamp_taus(tau), self.coeffs))

    def eval_many(self, taus) -> np.ndarray:
        return npcheb.chebval(_clamp_taus(taus), self.coeffs)

    def __add__(self, other: "ChebSeries") -> "ChebSeries":
        return ChebSeries(npcheb.chebadd(self.coeffs, other.coeffs))

    def __sub__(self, other: "ChebSeries") -> "ChebSeries":
        return ChebSeries(npcheb.chebsub(self.coeffs, other.coeffs))

    def __neg__(self) -> "ChebSeries":
        return ChebSeries(-self.coeffs)

    def __mul__(self, other):
        # Product by the linearization F_i F_j = (F_{i+j} + F_{|i-j|})/2;
        # scalar factors just scale coefficients.
        if isinstance(other, ChebSeries):
            return ChebSeries(npcheb.chebmul(self.coeffs, other.coeffs))
        return ChebSeries(self.coeffs * float(other))

    __rmul__ = __mul__

    def antiderivative(self) -> "ChebSeries":
        """Antiderivative in tau vanishing at tau = -1."""
        return ChebSeries(npcheb.chebint(self.coeffs, lbnd=-1.0))

    def derivative(self) -> "ChebSeries":
        if self.degree == 0:
            return ChebSeries.zero()
        return ChebSeries(npcheb.chebder(self.coeffs))

    def to_monomial(self) -> np.ndarray:
        """Monomial coefficients in tau (ascending powers); oracle use only."""
        return npcheb.cheb2poly(self.coeffs)

    @classmethod
    def from_monomial(cls, poly_coeffs) -> "ChebSeries":
        return cls(npcheb.poly2cheb(np.asarray(poly_coeffs, dtype=float)))

    def __repr__(self):
        return f"ChebSeries({self.coeffs.tolist()})"


def _as_series(c) -> ChebSeries:
    return c if isinstance(c, ChebSeries) else ChebSeries(c)


class ChebSeries3:
    """Three scalar series interpreted as a map tau -> R^3."""

    __slots__ = ("x", "y", "z")

    def __init__(self, x, y, z):
        self.x = _as_series(x)
        self.y = _as_series(y)
        self.z = _as_series(z)

    @classmethod
    def zero(cls) -> "ChebSeries3":
        return cls([0.0], [0.0], [0.0])

    @classmethod
    def constant(cls, v) -> "ChebSeries3":
        v = np.asarray(v, dtype=float)
        return cls([v[0]], [v[1]], [v[2]])

    @classmethod
    def from_coeff_rows(cls, rows) -> "ChebSeries3":
        """Build from an (m+1, 3) array of per-degree coefficient rows."""
        rows = np.asarray(rows, dtype=float)
        return cls(rows[:, 0], rows[:, 1], rows[:, 2])

    @property
    def components(self):
        return (self.x, self.y, self.z)

    @property
    def degree(self) -> int:
        return max(c.degree for c in self.components)

    def __call__(self, tau) -> np.ndarray:
        return np.array([self.x(tau), self.y(tau), self.z(tau)])

    def eval_many(self, taus) -> np.ndarray:
        """Evaluate at many nodes; returns shape (len(taus), 3)."""
        return np.column_stack([c.eval_many(taus) for c in self.components])

    def __add__(self, other: "ChebSeries3") -> "ChebSeries3":
        return ChebSeries3(*(a + b for a, b in zip(self.components, other.components)))

    def __sub__(self, other: "ChebSeries3") -> "ChebSeries3":
        return ChebSeries3(*(a - b for a, b in zip(self.components, other.components)))

    def __mul__(self, k) -> "ChebSeries3":
        k = float(k)
        return ChebSeries3(*(c * k for c in self.components))

    __rmul__ = __mul__

    def cross(self, other: "ChebSeries3") -> "ChebSeries3":
        a, b = self, other
        return ChebSeries3(
            a.y * b.z - a.z * b.y,
            a.z * b.x - a.x * b.z,
            a.x * b.y - a.y * b.x,
        )

    def dot(self, other: "ChebSeries3") -> ChebSeries:
        return self.x * other.x + self.y * other.y + self.z * other.z

    def scaled_by(self, s: ChebSeries) -> "ChebSeries3":
        """Pointwise product of a scalar series with this vector series."""
        return ChebSeries3(*(s * c for c in self.components))

    def integral_from_start(self, tmap: TimeMap) -> "ChebSeries3":
        """Running time integral (t_n/2) * int_{-1}^{tau}; zero at tau = -1."""
        return ChebSeries3(*(c.antiderivative() * tmap.half for c in self.components))

    def derivative_in_time(self, tmap: TimeMap) -> "ChebSeries3":
        """d/dt under the time map: chain factor 2/t_n on d/dtau."""
        return ChebSeries3(*(c.derivative() * (2.0 / tmap.t_n) for c in self.components))

    def truncate(self, max_degree: int):
        """Drop coefficients above max_degree.

        Returns (truncated series, sup of dropped coefficient magnitudes).
        """
        if max_degree < 0:
            raise ValueError("max_degree must be >= 0")
        dropped = 0.0
        parts = []
        for c in self.components:
            if c.degree > max_degree:
                tail = c.coeffs[max_degree + 1:]
                if tail.size:
                    dropped = max(dropped, float(np.max(np.abs(tail))))
                parts.append(ChebSeries(c.coeffs[: max_degree + 1]))
            else:
                parts.append(c)
        return ChebSeries3(*parts), dropped

    def is_finite(self) -> bool:
        return all(np.all(np.isfinite(c.coeffs)) for c in self.components)

    def __repr__(self):
        return f"ChebSeries3(deg={self.degree})"
