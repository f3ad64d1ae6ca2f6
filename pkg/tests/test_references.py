import numpy as np
import pytest

from stickywave.fluxes import builtin_scalar
from stickywave.measures import LaplaceMeasure, optimal_quantize, w1
from stickywave.references import (burgers_delta_entropy,
                                   burgers_delta_particle_error,
                                   burgers_delta_ref, concave_reference,
                                   l1_vs_reference, two_rarefaction_check,
                                   two_rarefaction_ref)
from stickywave.spd import empirical_cdf, init_velocities, l1_distance, \
    spd_positions


def test_burgers_delta_entropy_values():
    assert burgers_delta_entropy(2.0, 1.0) == pytest.approx(0.5)
    assert burgers_delta_entropy(2.0, -1.0) == 0.0
    assert burgers_delta_entropy(2.0, 3.0) == 1.0
    assert burgers_delta_entropy(0.0, -0.1) == 0.0
    assert burgers_delta_entropy(0.0, 0.0) == 1.0


def test_burgers_delta_particle_error_values():
    assert burgers_delta_particle_error(2, 4.0) == pytest.approx(0.5)
    assert burgers_delta_particle_error(7, 0.0) == 0.0
    assert burgers_delta_particle_error(100, 10.0) == pytest.approx(0.025)


def test_exact_error_law_grid():
    flux = builtin_scalar("burgers")
    for n in (2, 3, 8, 64, 512):
        lam = init_velocities(flux, n)
        for t in (1.0, 10.0, 50.0):
            phi = spd_positions(np.zeros(n), lam, t)
            err = l1_vs_reference(empirical_cdf(phi), burgers_delta_ref(t))
            assert err == pytest.approx(t / (4 * n), abs=1e-9)


def test_two_rarefaction_values():
    assert two_rarefaction_check(8.0, 1.0) == pytest.approx(0.25)
    assert two_rarefaction_check(8.0, 4.0) == pytest.approx(0.5)
    assert two_rarefaction_check(8.0, 10.0) == 1.0
    assert two_rarefaction_check(8.0, -2.0) == 0.0
    # continuity at the fan edges
    for t in (0.5, 3.0, 12.0):
        for edge in (-1.0, -1.0 + t / 2, 1.0 + t / 2, 1.0 + t):
            left = two_rarefaction_check(t, edge - 1e-12)
            right = two_rarefaction_check(t, edge + 1e-12)
            assert abs(right - left) < 1e-9


def test_two_rarefaction_matches_large_spd_run():
    # the piecewise formula assumed non-interacting fans; certify against a
    # high-resolution particle run within the (support + 2 t L)/(2n) budget
    flux = builtin_scalar("burgers")
    n = 2 ** 12
    atoms = np.concatenate([np.full(n // 2, -1.0), np.full(n // 2, 1.0)])
    lam = init_velocities(flux, n)
    for t in (1.0, 7.0, 30.0):
        phi = spd_positions(atoms, lam, t)
        err = l1_vs_reference(empirical_cdf(phi), two_rarefaction_ref(t))
        assert err <= (2.0 + 2 * t * flux.lipschitz_const) / (2 * n) + 1e-12


def test_ref_profile_evaluation_matches_pointwise_formula():
    for t in (0.0, 2.0, 9.0):
        ref = two_rarefaction_ref(t)
        xs = np.linspace(-3, 12, 301)
        formula = two_rarefaction_check(t, xs)
        profile = ref(xs)
        mismatch = np.abs(profile - formula) > 1e-12
        # profiles may differ only at jump points of the t=0 step
        assert np.sum(mismatch) <= (2 if t == 0 else 0)


def test_concave_reference_properties():
    n_ref = 2 ** 12
    ref_t0 = concave_reference(0.0, resolution=n_ref)
    target = optimal_quantize(LaplaceMeasure(0.0, 1.0), n_ref).atoms
    assert np.allclose(ref_t0.positions, target)

    for t in (1.0, 5.0):
        ref = concave_reference(t, resolution=n_ref)
        # symmetry of flux and datum about u = 1/2: u(t,-x) = 1 - u(t,x^-)
        xs = np.linspace(-6, 6, 101)
        vals = ref(xs)
        flipped = 1.0 - ref(-xs[::-1] - 1e-12)
        assert np.max(np.abs(vals - flipped[::-1])) <= 2.0 / n_ref + 1e-12

    # shock mass at 0 grows with t
    prev = 0.0
    for t in (0.5, 1.0, 2.0, 5.0):
        ref = concave_reference(t, resolution=n_ref)
        jump = float(ref(1e-9) - ref(-1e-9))
        assert jump >= prev - 1e-12
        prev = jump


def test_concave_reference_resolution_convergence():
    n_ref = 2 ** 10
    m = LaplaceMeasure(0.0, 1.0)
    gap = w1(m, optimal_quantize(m, n_ref))
    for t in (1.0, 4.0):
        coarse = concave_reference(t, resolution=n_ref)
        fine = concave_reference(t, resolution=2 * n_ref)
        assert l1_distance(coarse, fine) <= 3 * gap
