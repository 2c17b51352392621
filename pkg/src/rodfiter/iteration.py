"""Functional-iteration engines for incremental attitude reconstruction.

The exact engine iterates the Rodrigues-vector integral equation

    g_{j+1} = (t_n/2) * int_{-1}^{tau} (I + 1/2 g_j x + 1/4 g_j g_j^T) w dtau'

in closed form on Chebyshev series, starting from g_0 = 0.  Two
approximate variants iterate the truncated rotation-vector rate
(keeping the 1/12 double-cross term, or dropping it), and the classical
two-sample update is provided as the baseline.  Iterates are pinned to
zero at the interval start by construction.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .chebseries import ChebSeries3, TimeMap, cheb_nodes

METHOD_RODRIGUES = "rodfiter"
METHOD_ROTVEC_T3 = "rotfiter-t3"
METHOD_ROTVEC_T2 = "rotfiter-t2"
ITERATIVE_METHODS = (METHOD_RODRIGUES, METHOD_ROTVEC_T3, METHOD_ROTVEC_T2)

_DELTA_NODES = 65
_PRECONDITION_NODES = 129

# Deltas at or below this floor never count toward divergence detection.
_DIVERGENCE_FLOOR = 1e-13


class DegreeBudgetError(RuntimeError):
    """Untruncated order growth exceeded the memory budget."""

    def __init__(self, degree: int, budget: int):
        super().__init__(
            f"iterate degree {degree} exceeds budget {budget}; "
            "configure a truncation degree"
        )


class NoGuaranteeError(ValueError):
    """Contraction precondition >= 2: no convergence guarantee."""


@dataclass(frozen=True)
class IterationConfig:
    method: str = METHOD_RODRIGUES
    max_iterations: int = 7
    tolerance: float = 1e-14
    truncate_degree: int | None = None
    degree_budget: int = 16384

    def __post_init__(self):
        if self.method not in ITERATIVE_METHODS:
            raise ValueError(f"unknown method {self.method!r}")
        if self.max_iterations < 1:
            raise ValueError("need at least one iteration")


@dataclass(frozen=True)
class IterationTrace:
    """Iterates g_1..g_J with sup-norm deltas and convergence verdicts."""

    iterates: list = field(repr=False)
    deltas: np.ndarray
    converged: bool
    diverged: bool
    precondition_value: float

    @property
    def final(self) -> ChebSeries3:
        return self.iterates[-1]


def convergence_precondition(omega_hat: ChebSeries3, tmap: TimeMap) -> float:
    """t_n * sup|omega_hat| sampled at Chebyshev extrema nodes."""
    vals = omega_hat.eval_many(cheb_nodes(_PRECONDITION_NODES))
    return tmap.t_n * float(np.max(np.linalg.norm(vals, axis=1)))


def required_iterations(delta_acc: float, eps0: float, precondition: float) -> int:
    """Smallest j with eps0 * (precondition/2)^j < delta_acc (strict)."""
    if precondition >= 2.0:
        raise NoGuaranteeError(f"precondition {precondition} >= 2")
    if not (delta_acc > 0.0 and eps0 > 0.0):
        raise ValueError("delta_acc and eps0 must be positive")
    ratio = precondition / 2.0
    j = 1
    while eps0 * ratio**j >= delta_acc:
        j += 1
        if j > 10_000:
            raise ValueError("accuracy unreachable at this contraction rate")
    return j


def _rodrigues_integrand(g: ChebSeries3, omega: ChebSeries3) -> ChebSeries3:
    return omega + 0.5 * g.cross(omega) + 0.25 * g.scaled_by(g.dot(omega))


def _rotvec_t3_integrand(g: ChebSeries3, omega: ChebSeries3) -> ChebSeries3:
    return omega + 0.5 * g.cross(omega) + (1.0 / 12.0) * g.cross(g.cross(omega))


def _rotvec_t2_integrand(g: ChebSeries3, omega: ChebSeries3) -> ChebSeries3:
    return omega + 0.5 * g.cross(omega)


_INTEGRANDS = {
    METHOD_RODRIGUES: _rodrigues_integrand,
    METHOD_ROTVEC_T3: _rotvec_t3_integrand,
    METHOD_ROTVEC_T2: _rotvec_t2_integrand,
}


def _detect_divergence(deltas: np.ndarray) -> bool:
    """Three consecutive growing deltas (above the floor), or non-finite."""
    if deltas.size and not np.all(np.isfinite(deltas)):
        return True
    run = 0
    for prev, cur in zip(deltas[:-1], deltas[1:]):
        if cur > prev and cur > _DIVERGENCE_FLOOR:
            run += 1
            if run >= 3:
                return True
        else:
            run = 0
    return False


def _iterate(omega_hat: ChebSeries3, tmap: TimeMap, cfg: IterationConfig) -> IterationTrace:
    integrand = _INTEGRANDS[cfg.method]
    nodes = cheb_nodes(_DELTA_NODES)
    g = ChebSeries3.zero()
    prev_vals = np.zeros((_DELTA_NODES, 3))
    iterates: list[ChebSeries3] = []
    deltas: list[float] = []
    converged = False
    with np.errstate(over="ignore", invalid="ignore"):
        for _ in range(cfg.max_iterations):
            g_next = integrand(g, omega_hat).integral_from_start(tmap)
            if cfg.truncate_degree is not None:
                g_next, _ = g_next.truncate(cfg.truncate_degree)
            if g_next.degree > cfg.degree_budget:
                raise DegreeBudgetError(g_next.degree, cfg.degree_budget)
            if not g_next.is_finite():
                iterates.append(g_next)
                deltas.append(np.inf)
                break
            vals = g_next.eval_many(nodes)
            delta = float(np.max(np.linalg.norm(vals - prev_vals, axis=1)))
            iterates.append(g_next)
            deltas.append(delta)
            g, prev_vals = g_next, vals
            if delta <= cfg.tolerance:
                converged = True
                break
    deltas = np.array(deltas)
    return IterationTrace(
        iterates=iterates,
        deltas=deltas,
        converged=converged,
        diverged=not converged and _detect_divergence(deltas),
        precondition_value=convergence_precondition(omega_hat, tmap),
    )


def iterate_rodrigues(omega_hat: ChebSeries3, tmap: TimeMap,
                      cfg: IterationConfig) -> IterationTrace:
    """Exact-target iteration on the Rodrigues-vector integral equation."""
    if cfg.method != METHOD_RODRIGUES:
        raise ValueError("config method must be 'rodfiter'")
    return _iterate(omega_hat, tmap, cfg)


def iterate_rotation_approx(omega_hat: ChebSeries3, tmap: TimeMap,
                            cfg: IterationConfig) -> IterationTrace:
    """Iteration on the truncated rotation-vector rate (T3 or T2 variant).

    Converges to the fixed point of the approximate equation, not to the
    true rotation vector.
    """
    if cfg.method not in (METHOD_ROTVEC_T3, METHOD_ROTVEC_T2):
        raise ValueError("config method must be 'rotfiter-t3' or 'rotfiter-t2'")
    return _iterate(omega_hat, tmap, cfg)


def iterate(omega_hat: ChebSeries3, tmap: TimeMap, cfg: IterationConfig) -> IterationTrace:
    """Dispatch on cfg.method."""
    if cfg.method == METHOD_RODRIGUES:
        return iterate_rodrigues(omega_hat, tmap, cfg)
    return iterate_rotation_approx(omega_hat, tmap, cfg)


def mainstream_two_sample(c0, c1, t: float) -> np.ndarray:
    """Classical two-sample rotation-vector update.

    c0 + c1*s is the angular velocity over the window in local time s;
    returns t*c0 + (t^2/2)*c1 + (t^3/12)*c0 x c1.
    """
    c0 = np.asarray(c0, dtype=float)
    c1 = np.asarray(c1, dtype=float)
    return t * c0 + (t * t / 2.0) * c1 + (t**3 / 12.0) * np.cross(c0, c1)


def omega_from_rodrigues_poly(g: ChebSeries3, tmap: TimeMap, taus) -> np.ndarray:
    """Recover angular velocity from a Rodrigues-vector polynomial.

    Applies w = (4*gdot - 2 g x gdot) / (4 + |g|^2) pointwise at the
    given nodes, with gdot taken in real time through the interval map.
    """
    gdot = g.derivative_in_time(tmap)
    out = []
    for tau in np.atleast_1d(np.asarray(taus, dtype=float)):
        gv = g(tau)
        gd = gdot(tau)
        out.append((4.0 * gd - 2.0 * np.cross(gv, gd)) / (4.0 + gv @ gv))
    return np.array(out)
