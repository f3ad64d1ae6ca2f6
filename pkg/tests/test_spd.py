import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from stickywave.fluxes import builtin_scalar
from stickywave.spd import (cluster_partition, convex_minorant,
                            convex_minorant_counted, empirical_cdf,
                            flow_check, free_transport, init_velocities,
                            l1_distance, spd_positions,
                            spd_positions_event_driven)


def test_init_velocities_burgers():
    flux = builtin_scalar("burgers")
    assert np.allclose(init_velocities(flux, 4), [0.125, 0.375, 0.625, 0.875])


def test_init_velocities_concave():
    flux = builtin_scalar("concave_lwr")
    assert np.allclose(init_velocities(flux, 2), [0.25, -0.25])


def test_free_transport():
    assert np.allclose(free_transport([0, 1], [0, 1], 1.0), [0, 2])
    assert np.allclose(free_transport([0, 1], [1, 0], 0.0), [0, 1])
    # unsorted output signals a collision happened
    assert np.allclose(free_transport([0, 1], [1, 0], 2.0), [2, 1])


def test_convex_minorant_examples():
    assert np.allclose(convex_minorant([0, 1, 1.2, 2.5]), [0, 0.6, 1.2, 2.5])
    q = np.array([0.0, 0.0, 1.0, 3.0])
    assert np.allclose(convex_minorant(q), q)
    assert np.allclose(convex_minorant([0.0, 2.0, 3.0]), [0.0, 1.5, 3.0])


def test_convex_minorant_brute_force():
    rng = np.random.default_rng(0)
    for _ in range(200):
        n = int(rng.integers(1, 12))
        q = np.concatenate([[0.0], np.cumsum(rng.normal(0, 1, n))])
        p = convex_minorant(q)
        # oracle: the minorant at k is the max over all lines through two
        # data points that stay below every data point
        grid = np.arange(n + 1)
        lines = []
        for i in range(n + 1):
            for j in range(i + 1, n + 1):
                slope = (q[j] - q[i]) / (j - i)
                vals = q[i] + slope * (grid - i)
                if np.all(q - vals >= -1e-12):
                    lines.append(vals)
        best = np.max(np.stack(lines), axis=0)
        assert np.allclose(p, best, atol=1e-9)


def test_convex_minorant_requires_zero_start():
    with pytest.raises(ValueError):
        convex_minorant([1.0, 2.0])


def test_hull_operation_count_linear():
    rng = np.random.default_rng(5)
    for n in (8, 64, 512, 4096):
        q = np.concatenate([[0.0], np.cumsum(rng.normal(0, 1, n))])
        p, ops = convex_minorant_counted(q)
        assert ops <= 2 * n + 1
        assert np.allclose(p, convex_minorant(q))


def test_spd_positions_burgers_delta():
    flux = builtin_scalar("burgers")
    lam = init_velocities(flux, 2)
    assert np.allclose(spd_positions(np.zeros(2), lam, 4.0), [1.0, 3.0])


def test_spd_positions_two_body():
    phi = spd_positions([0.0, 1.0], [1.0, 0.0], 2.0)
    assert np.allclose(phi, [1.5, 1.5])
    assert np.allclose(spd_positions([0.0, 1.0], [1.0, 0.0], 0.0), [0.0, 1.0])


def test_cluster_partition():
    ranges, vel = cluster_partition([0.0, 1.0], [1.0, 0.0], 2.0)
    assert ranges == [(0, 2)] and vel[0] == pytest.approx(0.5)
    flux = builtin_scalar("burgers")
    lam = init_velocities(flux, 6)
    ranges, _ = cluster_partition(np.zeros(6), lam, 1.0)
    assert len(ranges) == 6  # fan: all singletons
    ranges, _ = cluster_partition([0.0, 1.0, 2.0], [0.1, 0.1, 0.1], 0.0)
    assert len(ranges) == 3


def test_empirical_cdf_distance():
    a = empirical_cdf([0.0, 1.0])
    b = empirical_cdf([0.0, 2.0])
    assert l1_distance(a, b) == pytest.approx(0.5)
    assert l1_distance(a, a) == 0.0
    c = empirical_cdf([0.0, 0.5, 1.0])
    assert l1_distance(a, c) == pytest.approx(1 / 6, abs=1e-12)


def test_flow_property_colliding():
    a, b = flow_check([0.0, 1.0], [1.0, 0.0], 1.5, 2.0)
    assert np.allclose(a, [1.5, 1.5]) and np.allclose(b, [1.5, 1.5])
    a, b = flow_check([0.0, 1.0], [0.1, 0.2], 1.0, 3.0)
    assert np.allclose(a, b, atol=1e-12)


def test_flow_property_randomized():
    rng = np.random.default_rng(12)
    for _ in range(100):
        n = int(rng.integers(2, 24))
        x = np.sort(rng.normal(0, 2, n))
        lam = rng.normal(0, 1, n)
        t = float(rng.uniform(0.1, 3))
        s = float(rng.uniform(0, t))
        a, b = flow_check(x, lam, s, t)
        assert np.max(np.abs(a - b)) < 1e-9


@settings(max_examples=200, deadline=None)
@given(st.data())
def test_hull_matches_event_oracle(data):
    n = data.draw(st.integers(1, 8))
    x = np.sort(np.array(data.draw(
        st.lists(st.floats(-5, 5), min_size=n, max_size=n))))
    lam = np.array(data.draw(
        st.lists(st.floats(-3, 3), min_size=n, max_size=n)))
    t = data.draw(st.floats(0, 5))
    a = spd_positions(x, lam, t)
    b = spd_positions_event_driven(x, lam, t)
    assert np.max(np.abs(a - b)) < 1e-9


@settings(max_examples=200, deadline=None)
@given(st.data())
def test_sortedness_and_speed_bound(data):
    n = data.draw(st.integers(1, 32))
    x = np.sort(np.array(data.draw(
        st.lists(st.floats(-10, 10), min_size=n, max_size=n))))
    lam = np.array(data.draw(
        st.lists(st.floats(-4, 4), min_size=n, max_size=n)))
    t = data.draw(st.floats(0, 4))
    phi = spd_positions(x, lam, t)
    assert np.all(np.diff(phi) >= 0)
    assert np.max(np.abs(phi - x)) <= t * np.max(np.abs(lam)) + 1e-9 if n else True


def test_momentum_conservation():
    rng = np.random.default_rng(21)
    for _ in range(200):
        n = int(rng.integers(1, 64))
        x = np.sort(rng.normal(0, 3, n))
        lam = rng.normal(0, 2, n)
        t = float(rng.uniform(0, 5))
        phi = spd_positions(x, lam, t)
        expect = np.sum(x) + t * np.sum(lam)
        scale = max(1.0, abs(expect))
        assert abs(np.sum(phi) - expect) / scale < 1e-9


def test_stability_inequality():
    rng = np.random.default_rng(8)
    for _ in range(300):
        n = int(rng.integers(2, 32))
        x = np.sort(rng.normal(0, 2, n))
        y = np.sort(rng.normal(0, 2, n))
        lam = rng.normal(0, 1, n)
        mu = rng.normal(0, 1, n)
        s = float(rng.uniform(0, 1.5))
        t = s + float(rng.uniform(0, 1.5))
        lhs = np.mean(np.abs(spd_positions(x, lam, t) - spd_positions(y, mu, t)))
        rhs = np.mean(np.abs(spd_positions(x, lam, s) - spd_positions(y, mu, s))) \
            + (t - s) * np.mean(np.abs(lam - mu))
        assert lhs <= rhs + 1e-9


def test_l1_contraction_same_velocities():
    rng = np.random.default_rng(9)
    for _ in range(200):
        n = int(rng.integers(2, 32))
        x = np.sort(rng.normal(0, 2, n))
        y = np.sort(rng.normal(0, 2, n))
        lam = rng.normal(0, 1, n)
        t = float(rng.uniform(0, 4))
        lhs = np.mean(np.abs(spd_positions(x, lam, t) - spd_positions(y, lam, t)))
        assert lhs <= np.mean(np.abs(x - y)) + 1e-9


def test_two_flux_stability_discrete():
    rng = np.random.default_rng(10)
    burgers = builtin_scalar("burgers")
    concave = builtin_scalar("concave_lwr")
    # int_0^1 |u - (1/2 - u)| du = 5/8 bounds the velocity-difference mean
    for _ in range(100):
        n = int(rng.integers(2, 48))
        x = np.sort(rng.normal(0, 2, n))
        t = float(rng.uniform(0, 3))
        lam = init_velocities(burgers, n)
        mu = init_velocities(concave, n)
        lhs = np.mean(np.abs(spd_positions(x, lam, t) - spd_positions(x, mu, t)))
        assert lhs <= t * np.mean(np.abs(lam - mu)) + 1e-9
        assert t * np.mean(np.abs(lam - mu)) <= t * 0.625 + 1e-12
