"""Window-chained coning experiments producing error-record rows.

Each run splits the horizon into back-to-back windows of N samples,
fits the angular velocity per window, reconstructs the incremental
attitude and chains the estimated quaternion across windows, so errors
accumulate as they would in a real integration run.  Rows are
(t_s, method, iteration, window, error_rad, diagnostic) tuples.
"""

from __future__ import annotations

import math
from dataclasses import replace

import numpy as np

from . import kinematics as kin
from . import scenarios as scen
from .chebseries import TimeMap
from .fitting import SampleSet, fit
from .iteration import (
    ITERATIVE_METHODS,
    IterationConfig,
    convergence_precondition,
    iterate,
    mainstream_two_sample,
)

METHOD_MAINSTREAM = "mainstream"
ALL_METHODS = ITERATIVE_METHODS + (METHOD_MAINSTREAM,)

ERROR_HEADER = ("t_s", "method", "iteration", "window", "error_rad", "diagnostic")
SWEEP_HEADER = ("N", "sup_omega_practical", "sup_omega_theoretical")

GRID_POINTS = 20


def window_sample_set(sc: scen.ConingScenario, window: int, kind: str):
    """Truth samples for one window, corrupted when the scenario says so.

    Returns (sample set in window-local time, sup of the injected
    velocity-equivalent error over the window).
    """
    t0 = window * sc.window_length
    epochs = np.arange(1, sc.N + 1) * sc.T
    if kind == "velocity":
        clean = np.array([scen.coning_omega(sc, t0 + e) for e in epochs])
    else:
        k0 = window * sc.N
        clean = np.array([scen.coning_increment(sc, k0 + k) for k in range(1, sc.N + 1)])
    values = clean
    delta_sup = 0.0
    if sc.has_sensor_errors:
        values = scen.corrupt(clean, sc, kind, stream=window)
        err = values - clean
        if kind == "increment":
            err = err / sc.T
        delta_sup = float(np.max(np.linalg.norm(err, axis=1)))
    return SampleSet(kind=kind, epochs=epochs, values=values), delta_sup


def _chain_step(q_chain, from_vec, g_val):
    """Chained quaternion after one window, or None when the iterate blew up."""
    with np.errstate(over="ignore", invalid="ignore"):
        if not np.all(np.isfinite(g_val)):
            return None
        try:
            return kin.quat_normalize(kin.quat_multiply(q_chain, from_vec(g_val)))
        except kin.DegenerateRotationError:
            return None


def _chained_error(q_chain, from_vec, g_val, q_true) -> float:
    # divergent windows still get a row; the diagnostic column carries the flag
    q_est = _chain_step(q_chain, from_vec, g_val)
    if q_est is None:
        return math.inf
    err = kin.attitude_error(q_est, q_true)
    return err if math.isfinite(err) else math.inf


def _mainstream_rate_coeffs(fit_result):
    """Monomial rate omega = c0 + c1*s in window-local time s."""
    a = fit_result.coeffs  # Chebyshev rows, order 1 fit
    if a.shape[0] != 2:
        raise ValueError("mainstream baseline needs an order-1 fit")
    t_n = fit_result.time_map.t_n
    return a[0] - a[1], 2.0 * a[1] / t_n


def run_windows(sc: scen.ConingScenario, method: str, iterations: int,
                sample_kind: str, horizon: float,
                truncate_degree: int | None = None,
                grid_points: int = GRID_POINTS,
                emit_bound: bool = False,
                final_iteration_only: bool = False) -> list[tuple]:
    """Chained reconstruction over the horizon for one method."""
    if method not in ALL_METHODS:
        raise ValueError(f"unknown method {method!r}")
    if method == METHOD_MAINSTREAM and sc.N != 2:
        sc = replace(sc, N=2, n=1)
    window_len = sc.window_length
    n_windows = max(1, int(math.floor(horizon / window_len + 1e-9)))
    tmap = TimeMap(window_len)

    rows = []
    q_chain = scen.coning_truth_quaternion(sc, 0.0)
    for w in range(n_windows):
        t0 = w * window_len
        samples, delta_sup = window_sample_set(sc, w, sample_kind)
        if method == METHOD_MAINSTREAM:
            result = fit(samples, 1)
            c0, c1 = _mainstream_rate_coeffs(result)
            phi = mainstream_two_sample(c0, c1, window_len)
            q_end = kin.quat_normalize(
                kin.quat_multiply(q_chain, kin.quat_from_rotvec(phi))
            )
            err = kin.attitude_error(
                q_end, scen.coning_truth_quaternion(sc, t0 + window_len)
            )
            pre = convergence_precondition(result.omega_hat, tmap)
            diag = "precondition_ge_2" if pre >= 2.0 else ""
            rows.append((t0 + window_len, method, 1, w, err, diag))
            q_chain = q_end
        else:
            result = fit(samples, sc.n)
            cfg = IterationConfig(
                method=method,
                max_iterations=iterations,
                truncate_degree=truncate_degree,
            )
            trace = iterate(result.omega_hat, tmap, cfg)
            flags = []
            if trace.precondition_value >= 2.0:
                flags.append("precondition_ge_2")
            if trace.diverged:
                flags.append("diverged")
            diag = ";".join(flags)
            # RotFIter iterates approximate the rotation vector, not the
            # Rodrigues vector; convert accordingly.
            from_vec = (
                kin.quat_from_rodrigues
                if method == "rodfiter"
                else kin.quat_from_rotvec
            )
            grid = np.arange(1, grid_points + 1) / grid_points
            emit = (
                [len(trace.iterates)]
                if final_iteration_only
                else range(1, len(trace.iterates) + 1)
            )
            with np.errstate(over="ignore", invalid="ignore"):
                for j in emit:
                    g_j = trace.iterates[j - 1]
                    for frac in grid:
                        s = window_len * frac
                        err = _chained_error(
                            q_chain, from_vec, g_j(tmap.tau_of(s)),
                            scen.coning_truth_quaternion(sc, t0 + s),
                        )
                        rows.append((t0 + s, method, j, w, err, diag))
                q_next = _chain_step(q_chain, from_vec, trace.final(1.0))
            if q_next is not None:
                q_chain = q_next
        if emit_bound:
            bound = window_len * delta_sup
            rows.append((t0 + window_len, "prop2-bound", 0, w, bound, ""))
    return rows


def run_reconstruct(sc: scen.ConingScenario, method: str, iterations: int,
                    sample_kind: str, horizon: float,
                    truncate_degree: int | None = None) -> list[tuple]:
    return run_windows(sc, method, iterations, sample_kind, horizon,
                       truncate_degree=truncate_degree)


def run_compare(sc: scen.ConingScenario, iterations: int, sample_kind: str,
                horizon: float, truncate_degree: int | None = None) -> list[tuple]:
    """All three iterative engines at the scenario's N plus the two-sample
    baseline, one error stream (final iteration) per method."""
    rows = []
    for method in ITERATIVE_METHODS:
        rows.extend(
            run_windows(sc, method, iterations, sample_kind, horizon,
                        truncate_degree=truncate_degree,
                        final_iteration_only=True)
        )
    rows.extend(
        run_windows(sc, METHOD_MAINSTREAM, iterations, sample_kind, horizon)
    )
    return rows


def run_noise(sc: scen.ConingScenario, method: str, iterations: int,
              sample_kind: str, horizon: float,
              truncate_degree: int | None = None) -> list[tuple]:
    """Seeded sensor-error run; adds the per-window error bound
    t_N * sup|delta| as 'prop2-bound' rows."""
    return run_windows(sc, method, iterations, sample_kind, horizon,
                       truncate_degree=truncate_degree, emit_bound=True)


def divergence_boundary(N: int, T: float, alpha: float = math.radians(10.0),
                        iterations: int = 7, sample_kind: str = "velocity",
                        rel_tol: float = 0.01):
    """Bisect the coning frequency for the divergence onset at fixed N, T.

    Returns (practical sup|omega| at the boundary, theoretical 2/(N*T)),
    with sup|omega| = 2*Omega*sin(alpha/2) of the truth motion.  Raises
    RuntimeError when no divergence bracket is found.

    Velocity sampling is the default here: coning motion has constant
    |omega|, so velocity samples keep the fitted sup at the truth level,
    while increments of a fast cone alias down and the iteration keeps
    converging on the (wrong) small fitted signal far past the boundary.
    """
    sup_factor = 2.0 * math.sin(alpha / 2.0)
    theoretical = 2.0 / (N * T)
    omega_theory = theoretical / sup_factor

    def diverges(Omega: float) -> bool:
        sc = scen.ConingScenario(alpha=alpha, Omega=Omega, T=T, N=N, n=N - 1)
        samples, _ = window_sample_set(sc, 0, sample_kind)
        result = fit(samples, sc.n)
        cfg = IterationConfig(max_iterations=iterations)
        trace = iterate(result.omega_hat, TimeMap(sc.window_length), cfg)
        return trace.diverged

    lo = omega_theory / 16.0
    if diverges(lo):
        raise RuntimeError(f"N={N}: already divergent at the bracket start")
    hi = lo
    while not diverges(hi):
        lo = hi
        hi *= 1.25
        if hi > omega_theory * 100.0:
            raise RuntimeError(f"N={N}: no divergence found up to {hi} rad/s")
    while (hi - lo) > rel_tol * hi:
        mid = 0.5 * (lo + hi)
        if diverges(mid):
            hi = mid
        else:
            lo = mid
    return sup_factor * 0.5 * (lo + hi), theoretical


def run_sweep_convergence(T: float, n_values, iterations: int = 7,
                          alpha: float = math.radians(10.0),
                          sample_kind: str = "velocity") -> list[tuple]:
    rows = []
    for N in n_values:
        practical, theoretical = divergence_boundary(
            N, T, alpha=alpha, iterations=iterations, sample_kind=sample_kind
        )
        rows.append((N, practical, theoretical))
    return rows
