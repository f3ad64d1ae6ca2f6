import math

import numpy as np
import pytest
from scipy.integrate import quad

from stickywave.fluxes import (FieldModel, builtin_scalar, parse_field,
                               parse_flux, psystem_fields, psystem_recover)


def test_builtin_burgers():
    flux = builtin_scalar("burgers")
    assert flux.cell_average(1, 2) == pytest.approx(0.25)
    assert flux.speed_bound == 1.0
    assert flux.lam(0.3) == pytest.approx(0.3)


def test_builtin_concave():
    flux = builtin_scalar("concave_lwr")
    assert flux.lam(0.5) == pytest.approx(0.0)
    assert flux.cell_average(np.array([1, 2]), 2) == pytest.approx([0.25, -0.25])


def test_unknown_flux():
    with pytest.raises(ValueError):
        builtin_scalar("quartic")


def test_cell_average_quadrature_fallback():
    flux = FieldModel  # placeholder to keep import used
    burgers = builtin_scalar("burgers")
    generic = type(burgers)(name="b2", lam=burgers.lam, lipschitz_const=1.0,
                            speed_bound=1.0, exact_cell_average=None)
    k = np.arange(1, 9)
    assert np.allclose(generic.cell_average(k, 8), burgers.cell_average(k, 8),
                       atol=1e-14)


def test_psystem_diagonal_speeds():
    fields, psys = psystem_fields(0.5, 5.0)
    for w in (0.0, 0.25, 0.9):
        assert psys.lam_minus(w, w) == pytest.approx(3.035397, abs=1e-6)
        assert psys.lam_plus(w, w) == pytest.approx(-3.035397, abs=1e-6)


def test_psystem_ush_gap():
    fields, psys = psystem_fields(0.5, 5.0)
    # ell = amplitude / cosh(asinh(kappa/2)) = amplitude / sqrt(1 + (kappa/2)^2)
    ell = 3.035396708601075 / math.sqrt(1 + 2.5 ** 2)
    assert fields.ush_gap == pytest.approx(2 * ell, rel=1e-12)
    assert psys.ell == pytest.approx(1.12732, abs=1e-4)


def test_psystem_antisymmetry():
    _, psys = psystem_fields(0.5, 5.0)
    w = np.linspace(0, 1, 11)
    wm, wp = np.meshgrid(w, w)
    assert np.allclose(psys.lam_plus(wm, wp), -psys.lam_minus(wm, wp))


def test_psystem_recover_examples():
    _, psys = psystem_fields(0.5, 5.0)
    u, v = psystem_recover(0.3, 0.3, psys)
    assert u == pytest.approx(0.25) and v == pytest.approx(0.3)
    u, _ = psystem_recover(0.0, 1.0, psys)
    assert u == pytest.approx(0.5, abs=1e-12)
    u, _ = psystem_recover(1.0, 0.0, psys)
    assert u == pytest.approx(0.0, abs=1e-12)


def test_psystem_g_roundtrip():
    _, psys = psystem_fields(0.5, 5.0)
    w = np.linspace(0, 1, 101)
    wm, wp = np.meshgrid(w, w)
    u = psys.g_inv(0.5 * (wp - wm))
    assert np.max(np.abs(psys.g(u) - 0.5 * (wp - wm))) < 1e-12


@pytest.mark.parametrize("nu", [0.5, 1.0])
@pytest.mark.parametrize("kappa", [1.0, 5.0, 10.0])
def test_psystem_sound_speed_normalisation(nu, kappa):
    _, psys = psystem_fields(nu, kappa)
    val = quad(lambda u: float(psys.sound_speed(u)), 0.0, nu, epsabs=1e-12)[0]
    assert val == pytest.approx(1.0, abs=1e-8)


def test_psystem_ush_certificate_on_grid():
    fields, _ = psystem_fields(0.5, 5.0)
    (lo1, _), (_, hi2) = fields.audit_speed_ranges(101)
    assert lo1 - hi2 >= 0.999 * fields.ush_gap


def test_psystem_monotone_in_wplus():
    # for fixed w-, the leftward speed increases in w+ on [w-, 1]; same-type
    # neighbours therefore always drift apart
    _, psys = psystem_fields(0.5, 5.0)
    for wm in (0.0, 0.3, 0.7):
        wp = np.linspace(wm, 1.0, 50)
        vals = psys.lam_plus(wm, wp)
        assert np.all(np.diff(vals) > 0)


def test_field_audit_warns_on_bad_constants():
    with pytest.warns(UserWarning):
        FieldModel(name="bad", d=2,
                   speeds=(lambda a, b: 1.0 + 0 * a + 0 * b,
                           lambda a, b: 0.5 + 0 * a + 0 * b),
                   lipschitz_const=0.0, speed_bound=1.0, ush_gap=4.0)


def test_parse_field():
    fields, psys = parse_field("psystem:nu=0.5,kappa=5")
    assert fields.d == 2 and psys.nu == 0.5
    with pytest.raises(ValueError):
        parse_field("psystem:nu=0.5")
    with pytest.raises(ValueError):
        parse_field("euler:gamma=1.4")
    assert parse_flux("burgers").name == "burgers"
