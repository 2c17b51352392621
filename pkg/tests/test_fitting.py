"""Polynomial fits checked by round-trip oracles."""

import numpy as np
import pytest

from rodfiter.chebseries import ChebSeries3, TimeMap
from rodfiter.fitting import SampleSet, SingularFitError, fit, fit_increment, fit_velocity

RNG = np.random.default_rng(31)


def random_omega(degree):
    return ChebSeries3(*(RNG.uniform(-1.0, 1.0, degree + 1) for _ in range(3)))


def coeff_rows(series3, rows):
    out = np.zeros((rows, 3))
    for j, comp in enumerate(series3.components):
        out[: comp.coeffs.size, j] = comp.coeffs
    return out


def velocity_samples(omega, epochs):
    tmap = TimeMap(epochs[-1])
    taus = np.array([tmap.tau_of(t) for t in epochs])
    return SampleSet("velocity", epochs, omega.eval_many(taus))


def increment_samples(omega, epochs):
    # exact running integral of the generator between epoch bounds
    tmap = TimeMap(epochs[-1])
    integral = omega.integral_from_start(tmap)
    bounds = np.concatenate(([0.0], epochs))
    values = np.array(
        [
            integral(tmap.tau_of(bounds[k + 1])) - integral(tmap.tau_of(bounds[k]))
            for k in range(epochs.size)
        ]
    )
    return SampleSet("increment", epochs, values)


def test_velocity_round_trip_degree3():
    omega = random_omega(3)
    epochs = np.array([0.02, 0.05, 0.07, 0.1])
    result = fit_velocity(velocity_samples(omega, epochs), 3)
    assert np.max(np.abs(result.coeffs - coeff_rows(omega, 4))) <= 1e-12
    assert result.residual <= 1e-12


def test_increment_round_trip_degree2():
    omega = random_omega(2)
    epochs = np.array([0.03, 0.06, 0.09])
    result = fit_increment(increment_samples(omega, epochs), 2)
    assert np.max(np.abs(result.coeffs - coeff_rows(omega, 3))) <= 1e-12
    assert result.residual <= 1e-12


def test_exact_interpolation_all_orders():
    for count in range(2, 11):
        omega = random_omega(count - 1)
        epochs = np.arange(1, count + 1) * 0.01
        for build in (velocity_samples, increment_samples):
            result = fit(build(omega, epochs), count - 1)
            err = np.max(np.abs(result.coeffs - coeff_rows(omega, count)))
            assert err <= 1e-11, f"N={count} {build.__name__}: {err}"


def test_paths_agree_on_same_signal():
    omega = random_omega(4)
    epochs = np.arange(1, 6) * 0.02
    via_inc = fit(increment_samples(omega, epochs), 4)
    taus = np.array([via_inc.time_map.tau_of(t) for t in epochs])
    resampled = SampleSet("velocity", epochs, via_inc.omega_hat.eval_many(taus))
    via_vel = fit(resampled, 4)
    assert np.max(np.abs(via_vel.coeffs - via_inc.coeffs)) <= 1e-11


def test_overdetermined_fit_reports_residual():
    omega = random_omega(2)
    epochs = np.arange(1, 7) * 0.02
    samples = velocity_samples(omega, epochs)
    noisy = SampleSet(
        "velocity", epochs, samples.values + 1e-3 * RNG.standard_normal((6, 3))
    )
    result = fit(noisy, 2)
    assert 0.0 < result.residual < 1e-2
    assert not result.ill_conditioned


def test_sample_set_validation():
    good = np.zeros((3, 3))
    with pytest.raises(ValueError):
        SampleSet("speed", np.array([0.1, 0.2, 0.3]), good)
    with pytest.raises(ValueError):
        SampleSet("velocity", np.array([0.1]), np.zeros((1, 3)))
    with pytest.raises(ValueError):
        SampleSet("velocity", np.array([0.1, 0.1, 0.3]), good)
    with pytest.raises(ValueError):
        SampleSet("increment", np.array([0.0, 0.2, 0.3]), good)
    with pytest.raises(ValueError):
        SampleSet("velocity", np.array([0.1, 0.2]), np.zeros((3, 3)))


def test_order_bounds():
    samples = velocity_samples(random_omega(1), np.array([0.1, 0.2]))
    with pytest.raises(ValueError):
        fit(samples, 2)
    with pytest.raises(ValueError):
        fit(samples, -1)


def test_kind_mismatch_rejected():
    samples = velocity_samples(random_omega(1), np.array([0.1, 0.2]))
    with pytest.raises(ValueError):
        fit_increment(samples, 1)


def test_singular_design_raises():
    epochs = np.array([1.0, 1.0 + 3e-16, 2.0])
    samples = SampleSet("velocity", epochs, np.zeros((3, 3)))
    with pytest.raises(SingularFitError):
        fit(samples, 2)


def test_near_coincident_epochs_flagged_not_rejected():
    epochs = np.array([1.0, 1.0 + 2e-13, 2.0])
    result = fit(SampleSet("velocity", epochs, np.zeros((3, 3))), 2)
    assert result.ill_conditioned
