import math

import numpy as np
import pytest

from stickywave.measures import (AtomMeasure, DiscreteMeasure, LaplaceMeasure,
                                 PiecewiseLinearCDF, UniformMeasure,
                                 chi_quantize, optimal_quantize, parse_measure,
                                 tail_rate_fit, w1, w1_upper_bound_sqrt)


def test_optimal_quantize_uniform():
    m = UniformMeasure(0, 1)
    assert np.allclose(optimal_quantize(m, 2).atoms, [0.25, 0.75])


def test_optimal_quantize_two_atoms():
    m = parse_measure("atoms:-1@0.5,1@0.5")
    assert np.allclose(optimal_quantize(m, 4).atoms, [-1, -1, 1, 1])


def test_optimal_quantize_laplace():
    m = LaplaceMeasure(0, 1)
    atoms = optimal_quantize(m, 2).atoms
    assert atoms[0] == pytest.approx(math.log(0.5), abs=1e-12)
    assert atoms[1] == pytest.approx(-math.log(0.5), abs=1e-12)


def test_w1_point_mass_translation():
    for a in (0.0, 1.5, -3.0):
        assert w1(parse_measure("heaviside:0"),
                  parse_measure(f"heaviside:{a}")) == pytest.approx(abs(a))


def test_w1_uniform_vs_optimal_two_points():
    m = UniformMeasure(0, 1)
    assert w1(m, optimal_quantize(m, 2)) == pytest.approx(0.125, abs=1e-12)


@pytest.mark.parametrize("n", [1, 2, 5, 17, 64])
def test_w1_uniform_compact_support_bound(n):
    for a, b in [(0.0, 1.0), (-2.0, 3.0)]:
        m = UniformMeasure(a, b)
        assert w1(m, optimal_quantize(m, n)) <= (b - a) / (2 * n) + 1e-12


def test_chi_quantize_examples():
    m = UniformMeasure(0, 1)
    assert np.allclose(chi_quantize(m, 1).atoms, [0.5])
    assert np.allclose(chi_quantize(m, 2).atoms, [1 / 3, 2 / 3])
    delta = parse_measure("heaviside:0.7")
    assert np.allclose(chi_quantize(delta, 5).atoms, 0.7)


def test_chi_quantize_rejects_infinite_moment():
    with pytest.raises(ValueError):
        chi_quantize(parse_measure("pareto:0.8"), 4)


def test_w1_infinite_sentinel():
    heavy = parse_measure("pareto:1")
    light = parse_measure("uniform:0,1")
    assert w1(heavy, light) == math.inf
    assert w1(heavy, optimal_quantize(light, 8)) == math.inf


def test_w1_upper_bound_sqrt_uniform():
    assert w1_upper_bound_sqrt(UniformMeasure(0, 1)) == pytest.approx(
        math.pi / 8, abs=1e-9)


def test_w1_upper_bound_sqrt_laplace():
    # tails truncated at the 1e-12 quantiles, hence the loose tolerance
    assert w1_upper_bound_sqrt(LaplaceMeasure(0, 1)) == pytest.approx(
        math.pi / 2 + 1, abs=1e-4)


@pytest.mark.parametrize("alpha", [1.2, 1.7, 2.0])
def test_w1_upper_bound_sqrt_divergent_pareto(alpha):
    assert w1_upper_bound_sqrt(parse_measure(f"pareto:{alpha}")) == math.inf


def test_sqrt_bound_dominates_quantizer():
    for spec in ("uniform:0,1", "laplace:0,1", "stretchedexp:1", "pareto:3"):
        m = parse_measure(spec)
        bound = w1_upper_bound_sqrt(m)
        for n in (1, 4, 32, 256):
            assert w1(m, optimal_quantize(m, n)) <= bound / math.sqrt(n) + 1e-9


def test_scaled_w1_limit_uniform():
    for a, b in [(0.0, 1.0), (-1.0, 4.0)]:
        m = UniformMeasure(a, b)
        n = 4096
        val = n * w1(m, optimal_quantize(m, n))
        assert abs(val - (b - a) / 4) < 0.02 * (b - a)


def test_tail_rate_fits():
    ns = [2 ** p for p in range(4, 15)]
    assert tail_rate_fit(parse_measure("pareto:2"), ns) == pytest.approx(-0.5, abs=0.1)
    assert tail_rate_fit(parse_measure("uniform:0,1"), ns) == pytest.approx(-1.0, abs=0.05)
    slope = tail_rate_fit(parse_measure("stretchedexp:1"), ns)
    assert -1.0 <= slope <= -0.85


def test_tail_rate_fit_rejects_infinite():
    with pytest.raises(ValueError):
        tail_rate_fit(parse_measure("pareto:1"), [2 ** p for p in range(4, 15)])


def test_w1_metric_properties():
    rng = np.random.default_rng(3)
    measures = [
        DiscreteMeasure(np.sort(rng.normal(0, 1, 6))),
        DiscreteMeasure(np.sort(rng.normal(0.5, 2, 6))),
        DiscreteMeasure(np.sort(rng.normal(-1, 1, 9))),
    ]
    for a in measures:
        assert w1(a, a) == 0.0
        for b in measures:
            assert w1(a, b) == pytest.approx(w1(b, a), abs=0)
    for a in measures:
        for b in measures:
            for c in measures:
                assert w1(a, c) <= w1(a, b) + w1(b, c) + 1e-12


def test_galois_connection_sampled():
    for spec in ("uniform:-1,2", "laplace:0.5,2", "atoms:-1@0.25,0@0.5,2@0.25"):
        m = parse_measure(spec)
        vs = np.linspace(0.01, 0.99, 33)
        xs = np.linspace(-4, 4, 41)
        for v in vs:
            for x in xs:
                assert (float(m.cdf(x)) >= v) == (float(m.quantile(v)) <= x)


def test_cdf_and_quantile_monotone():
    for spec in ("uniform:0,1", "laplace:0,1", "pareto:2.5", "stretchedexp:0.7"):
        m = parse_measure(spec)
        v = np.linspace(1e-6, 1 - 1e-6, 200)
        q = np.asarray(m.quantile(v))
        assert np.all(np.diff(q) >= -1e-12)
        x = np.linspace(float(q[0]), float(q[-1]), 200)
        f = np.asarray(m.cdf(x))
        assert np.all(np.diff(f) >= -1e-12)
        assert np.all((f >= 0) & (f <= 1))


def test_quantizers_sorted_and_convergent():
    for spec in ("uniform:-1,3", "laplace:0,1", "atoms:-1@0.5,1@0.5",
                 "stretchedexp:1"):
        m = parse_measure(spec)
        prev_o = prev_c = math.inf
        for n in (2, 4, 8, 16, 32, 64):
            qo = optimal_quantize(m, n)
            qc = chi_quantize(m, n)
            assert np.all(np.diff(qo.atoms) >= 0)
            assert np.all(np.diff(qc.atoms) >= 0)
            wo, wc = w1(m, qo), w1(m, qc)
            assert wo <= prev_o + 1e-12
            assert wc <= prev_c + 1e-12
            prev_o, prev_c = wo, wc
        assert prev_o < 0.1 and prev_c < 0.1


def test_optimal_quantizer_beats_local_perturbations():
    rng = np.random.default_rng(11)
    for _ in range(20):
        knots = np.sort(rng.uniform(-2, 2, 4))
        m = PiecewiseLinearCDF(knots, [0.0, *np.sort(rng.uniform(0.05, 0.95, 2)), 1.0])
        n = int(rng.integers(1, 7))
        best = optimal_quantize(m, n)
        w_best = w1(m, best)
        for k in range(n):
            for eps in (-0.11, -0.05, 0.05, 0.11):
                atoms = best.atoms.copy()
                atoms[k] += eps
                cand = DiscreteMeasure(np.sort(atoms))
                assert w1(m, cand) >= w_best - 1e-12


def test_w1_discrete_unequal_sizes():
    a = DiscreteMeasure(np.array([0.0, 1.0]))
    b = DiscreteMeasure(np.array([0.0, 0.5, 1.0]))
    # integral of |F_a - F_b|: differs by 1/6 on [0, 0.5) and [0.5, 1)
    assert w1(a, b) == pytest.approx(1 / 6, abs=1e-12)


def test_parse_measure_errors():
    with pytest.raises(ValueError):
        parse_measure("nope:1")
    with pytest.raises(ValueError):
        parse_measure("uniform:3")
