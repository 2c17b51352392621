"""Series algebra checked against pointwise and quadrature oracles."""

import numpy as np
import pytest
from scipy.integrate import quad

from rodfiter.chebseries import (
    ChebSeries,
    ChebSeries3,
    DomainError,
    TimeMap,
    basis_value,
    cheb_nodes,
    segment_integral,
)

RNG = np.random.default_rng(20260823)
NODES33 = cheb_nodes(33)


def recurrence_eval(coeffs, x):
    # defining three-term recurrence, term by term
    total = coeffs[0] * np.ones_like(x)
    f_prev, f_cur = np.ones_like(x), x
    for a in coeffs[1:]:
        total = total + a * f_cur
        f_prev, f_cur = f_cur, 2.0 * x * f_cur - f_prev
    return total


def random_series(degree):
    return ChebSeries(RNG.uniform(-1.0, 1.0, degree + 1))


def random_series3(degree):
    return ChebSeries3(*(RNG.uniform(-1.0, 1.0, degree + 1) for _ in range(3)))


def test_eval_matches_defining_recurrence():
    xs = np.linspace(-1.0, 1.0, 41)
    for degree in (0, 1, 5, 17, 64):
        s = random_series(degree)
        expect = recurrence_eval(s.coeffs, xs)
        got = s.eval_many(xs)
        assert np.max(np.abs(got - expect)) <= 1e-13 * max(1.0, np.max(np.abs(expect)))


def test_add_matches_pointwise_sum():
    a, b = random_series(5), random_series(5)
    tau = 0.3
    assert abs((a + b)(tau) - (a(tau) + b(tau))) <= 1e-14


def test_product_degree_and_pointwise():
    for da, db in ((3, 4), (10, 7), (31, 33)):
        a, b = random_series(da), random_series(db)
        p = a * b
        assert p.degree <= da + db
        vals = p.eval_many(NODES33)
        expect = a.eval_many(NODES33) * b.eval_many(NODES33)
        assert np.max(np.abs(vals - expect)) <= 1e-13 * max(1.0, np.max(np.abs(expect)))


def test_cross_of_self_is_zero():
    v = random_series3(6)
    c = v.cross(v)
    for comp in c.components:
        assert np.max(np.abs(comp.coeffs)) <= 1e-13


def test_pointwise_homomorphism():
    tmap = TimeMap(0.7)
    a, b = random_series3(8), random_series3(10)
    s = random_series(4)
    av, bv = a.eval_many(NODES33), b.eval_many(NODES33)
    sv = s.eval_many(NODES33)

    checks = [
        ((a + b).eval_many(NODES33), av + bv),
        ((a - b).eval_many(NODES33), av - bv),
        ((2.5 * a).eval_many(NODES33), 2.5 * av),
        (a.cross(b).eval_many(NODES33), np.cross(av, bv)),
        (a.dot(b).eval_many(NODES33), np.sum(av * bv, axis=1)),
        (a.scaled_by(s).eval_many(NODES33), sv[:, None] * av),
    ]
    for got, expect in checks:
        assert np.max(np.abs(got - expect)) <= 1e-12

    integral = a.integral_from_start(tmap)
    for tau in (-1.0, -0.4, 0.2, 1.0):
        expect = np.array(
            [tmap.half * quad(lambda x, c=c: c(x), -1.0, tau, limit=200)[0]
             for c in a.components]
        )
        assert np.max(np.abs(integral(tau) - expect)) <= 1e-12


def test_integral_vanishes_at_start_and_inverts_derivative():
    tmap = TimeMap(1.3)
    a = random_series3(7)
    integral = a.integral_from_start(tmap)
    assert np.max(np.abs(integral(-1.0))) <= 1e-14
    back = integral.derivative_in_time(tmap)
    diff = back.eval_many(NODES33) - a.eval_many(NODES33)
    assert np.max(np.abs(diff)) <= 1e-12


def test_segment_integral_against_quadrature():
    for i in range(9):
        for a, b in ((-1.0, 1.0), (-0.8, -0.1), (0.25, 0.9), (-0.3, 0.3)):
            expect = quad(lambda x: basis_value(i, x), a, b, limit=200)[0]
            assert abs(segment_integral(i, a, b) - expect) <= 1e-13


def test_segment_integral_validation():
    with pytest.raises(DomainError):
        segment_integral(2, -1.5, 0.0)
    with pytest.raises(DomainError):
        segment_integral(2, 0.5, 0.2)
    with pytest.raises(ValueError):
        segment_integral(-1, 0.0, 0.5)


def test_monomial_round_trip():
    s = random_series(12)
    back = ChebSeries.from_monomial(s.to_monomial())
    assert np.max(np.abs(back.coeffs - s.coeffs)) <= 1e-12


def test_time_map_round_trip():
    tmap = TimeMap(0.08)
    for t in (0.0, 0.03, 0.08):
        assert abs(tmap.t_of(tmap.tau_of(t)) - t) <= 1e-15
    assert tmap.tau_of(0.0) == -1.0
    assert tmap.tau_of(0.08) == 1.0
    with pytest.raises(ValueError):
        TimeMap(0.0)


def test_eval_domain_clamping_and_error():
    s = random_series(4)
    assert s(1.0 + 1e-13) == s(1.0)
    with pytest.raises(DomainError):
        s(1.1)


def test_truncate_reports_dropped_sup():
    v = ChebSeries3([1.0, 0.5, 0.25], [1.0], [0.0, 0.0, 0.125])
    out, dropped = v.truncate(1)
    assert out.degree <= 1
    assert dropped == 0.25


def test_cheb_nodes_cover_endpoints():
    nodes = cheb_nodes(9)
    assert nodes[0] == -1.0 and nodes[-1] == 1.0
    assert np.all(np.diff(nodes) > 0.0)
    with pytest.raises(ValueError):
        cheb_nodes(1)
