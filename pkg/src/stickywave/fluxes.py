"""Scalar flux models, multitype characteristic fields, and the p-system.

A scalar model carries the characteristic speed ``lam = Lambda'`` on [0,1]
together with its regularity constants (Lipschitz constant, speed bound)
and, when available, an exact per-cell average used for particle velocity
assignment.  A field model carries ``d`` characteristic speeds on [0,1]^d
ordered so that lower type indices are strictly faster, with a uniform gap
``ush_gap`` between the speed ranges of consecutive types.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

__all__ = [
    "FluxModel",
    "FieldModel",
    "PSystemModel",
    "builtin_scalar",
    "psystem_fields",
    "psystem_recover",
    "parse_flux",
    "parse_field",
]

_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(64)


def _cell_quadrature(f, k, n):
    """n * integral of f over [(k-1)/n, k/n] by 64-point Gauss-Legendre.

    ``k`` may be an integer or an integer array; exact for polynomial
    integrands up to degree 127.
    """
    k = np.asarray(k, dtype=float)
    mid = (2.0 * k - 1.0) / (2.0 * n)
    half = 0.5 / n
    w = mid[..., None] + half * _GL_NODES
    return 0.5 * np.asarray(f(w)) @ _GL_WEIGHTS


@dataclass(frozen=True)
class FluxModel:
    """Scalar flux with speed ``lam`` on [0,1] and regularity constants."""

    name: str
    lam: Callable[[np.ndarray], np.ndarray]
    lipschitz_const: float
    speed_bound: float
    exact_cell_average: Callable[[np.ndarray, int], np.ndarray] | None = None

    def __post_init__(self):
        grid = np.linspace(0.0, 1.0, 257)
        vals = np.asarray(self.lam(grid), dtype=float)
        if np.max(np.abs(vals)) > self.speed_bound * (1 + 1e-12) + 1e-12:
            warnings.warn(f"flux {self.name}: |lam| exceeds speed_bound on audit grid")
        steps = np.abs(np.diff(vals)) / (grid[1] - grid[0])
        if steps.size and np.max(steps) > self.lipschitz_const * (1 + 1e-9) + 1e-12:
            warnings.warn(f"flux {self.name}: Lipschitz constant violated on audit grid")

    def cell_average(self, k, n):
        """Average of ``lam`` over the k-th of n uniform cells (1-based k)."""
        if self.exact_cell_average is not None:
            return self.exact_cell_average(np.asarray(k), n)
        return _cell_quadrature(self.lam, k, n)


def builtin_scalar(name):
    """Named scalar models: ``burgers`` and ``concave_lwr``."""
    if name == "burgers":
        return FluxModel(
            name="burgers",
            lam=lambda u: np.asarray(u, dtype=float),
            lipschitz_const=1.0,
            speed_bound=1.0,
            exact_cell_average=lambda k, n: (2.0 * k - 1.0) / (2.0 * n),
        )
    if name == "concave_lwr":
        return FluxModel(
            name="concave_lwr",
            lam=lambda u: 0.5 - np.asarray(u, dtype=float),
            lipschitz_const=1.0,
            speed_bound=0.5,
            exact_cell_average=lambda k, n: 0.5 - (2.0 * k - 1.0) / (2.0 * n),
        )
    raise ValueError(f"unknown scalar flux {name!r}")


@dataclass(frozen=True)
class FieldModel:
    """``d`` characteristic speeds on [0,1]^d, strictly ordered by type.

    ``speeds[g]`` maps d broadcastable arrays (one per coordinate) to the
    speed of type ``g+1`` particles.  ``lipschitz_const`` is the constant of
    the sum-form Lipschitz bound
    ``|lam(u) - lam(v)| <= L * sum_g |u_g - v_g|``, and ``ush_gap`` the
    uniform gap ``inf lam^g - sup lam^{g+1} >= ush_gap > 0``.
    """

    name: str
    d: int
    speeds: Sequence[Callable[..., np.ndarray]]
    lipschitz_const: float
    speed_bound: float
    ush_gap: float
    audit_resolution: int = field(default=21, compare=False)

    def __post_init__(self):
        if self.d < 2 or len(self.speeds) != self.d:
            raise ValueError("need d >= 2 speed functions")
        if self.ush_gap <= 0:
            raise ValueError("ush_gap must be positive")
        ranges = self.audit_speed_ranges()
        for g in range(self.d - 1):
            gap = ranges[g][0] - ranges[g + 1][1]
            if gap < 0.999 * self.ush_gap:
                warnings.warn(
                    f"field {self.name}: audit gap {gap:.6g} below declared "
                    f"ush_gap {self.ush_gap:.6g} between types {g + 1},{g + 2}")
        if max(abs(r[0]) for r in ranges) > self.speed_bound * (1 + 1e-12) or \
           max(abs(r[1]) for r in ranges) > self.speed_bound * (1 + 1e-12):
            warnings.warn(f"field {self.name}: speed bound violated on audit grid")

    def audit_speed_ranges(self, resolution=None):
        """(min, max) of each speed over a uniform grid of [0,1]^d."""
        res = resolution or self.audit_resolution
        axes = np.meshgrid(*[np.linspace(0.0, 1.0, res)] * self.d, indexing="ij")
        out = []
        for g in range(self.d):
            vals = np.asarray(self.speeds[g](*axes), dtype=float)
            out.append((float(vals.min()), float(vals.max())))
        return out

    def cell_velocity(self, g, k, n, frozen):
        """Velocity of particle ``g:k``: n * integral of the type-(g+1) speed
        over the k-th cell in its own coordinate, foreign coordinates frozen.

        ``k`` is a 1-based index array of shape (m,); ``frozen`` has shape
        (m, d) and its own column is ignored.
        """
        k = np.atleast_1d(np.asarray(k, dtype=float))
        frozen = np.atleast_2d(np.asarray(frozen, dtype=float))
        mid = (2.0 * k - 1.0) / (2.0 * n)
        w_own = mid[:, None] + (0.5 / n) * _GL_NODES
        args = []
        for gp in range(self.d):
            if gp == g:
                args.append(w_own)
            else:
                args.append(frozen[:, gp][:, None])
        vals = np.asarray(self.speeds[g](*args), dtype=float)
        vals = np.broadcast_to(vals, (len(k), len(_GL_NODES)))
        return 0.5 * vals @ _GL_WEIGHTS


@dataclass(frozen=True)
class PSystemModel:
    """Isentropic gas model in (specific volume u, velocity v).

    The pressure law is normalised so that the sound-speed integral over
    ``[0, nu]`` is one, which places the Riemann invariants in [0,1] when
    the initial data are CDFs.
    """

    nu: float
    kappa: float

    def __post_init__(self):
        if self.nu <= 0 or self.kappa <= 0:
            raise ValueError("nu and kappa must be positive")

    @property
    def s(self):
        """asinh(kappa/2), the shape constant of the pressure law."""
        return math.asinh(self.kappa / 2.0)

    @property
    def amplitude(self):
        """Peak sound speed kappa / (2 nu asinh(kappa/2))."""
        return self.kappa / (2.0 * self.nu * self.s)

    @property
    def ell(self):
        """Minimal sound speed over [0, nu]; the USH gap is 2*ell."""
        return self.amplitude / math.cosh(self.s)

    def pressure(self, u):
        u = np.asarray(u, dtype=float)
        return (self.kappa / (4.0 * self.nu * self.s ** 2)) * (
            np.arctan(self.kappa / 2.0) - np.arctan(self.kappa * (u / self.nu - 0.5)))

    def sound_speed(self, u):
        """c(u) = sqrt(-p'(u))."""
        u = np.asarray(u, dtype=float)
        return self.amplitude / np.sqrt(1.0 + (self.kappa * (u / self.nu - 0.5)) ** 2)

    def g(self, u):
        """Riemann-invariant potential, increasing from -1/2 to +1/2 on [0, nu]."""
        u = np.asarray(u, dtype=float)
        return np.arcsinh(self.kappa * (u / self.nu - 0.5)) / (2.0 * self.s)

    def g_inv(self, y):
        y = np.asarray(y, dtype=float)
        return self.nu * (0.5 + np.sinh(2.0 * self.s * y) / self.kappa)

    def lam_minus(self, wm, wp):
        """Speed of the rightward family (type 1), always >= ell."""
        wm = np.asarray(wm, dtype=float)
        wp = np.asarray(wp, dtype=float)
        return self.amplitude / np.cosh((wp - wm) * self.s)

    def lam_plus(self, wm, wp):
        """Speed of the leftward family (type 2), always <= -ell."""
        return -self.lam_minus(wm, wp)


def psystem_recover(w_minus, w_plus, model):
    """Recover (specific volume, velocity) from the Riemann invariants."""
    w_minus = np.asarray(w_minus, dtype=float)
    w_plus = np.asarray(w_plus, dtype=float)
    u = model.g_inv(0.5 * (w_plus - w_minus))
    v = 0.5 * (w_plus + w_minus)
    return u, v


def psystem_fields(nu, kappa):
    """Two-type field model of the p-system in Riemann invariants.

    Type 1 carries the rightward family (positive speeds) and type 2 the
    leftward one, so that lower types are strictly faster as the ordering
    assumption requires; the declared gap is ``2*ell``.
    """
    model = PSystemModel(nu=nu, kappa=kappa)
    amp, s = model.amplitude, model.s
    # max modulus of a single partial derivative of the speeds:
    # amp * s * max |tanh(x) sech(x)| over |x| <= s
    x_star = min(s, math.asinh(1.0))
    lip = amp * s * math.tanh(x_star) / math.cosh(x_star)
    return FieldModel(
        name=f"psystem(nu={nu},kappa={kappa})",
        d=2,
        speeds=(model.lam_minus, model.lam_plus),
        lipschitz_const=lip,
        speed_bound=amp,
        ush_gap=2.0 * model.ell,
    ), model


def parse_flux(spec):
    """Scalar flux grammar: ``burgers`` | ``concave_lwr``."""
    return builtin_scalar(spec.strip().lower())


def parse_field(spec):
    """Field grammar: ``psystem:nu=0.5,kappa=5``; returns (FieldModel, aux).

    ``aux`` is the PSystemModel for p-system specs and None otherwise.
    """
    name, _, args = spec.strip().partition(":")
    if name.lower() != "psystem":
        raise ValueError(f"unknown field spec {spec!r}")
    kwargs = {}
    for tok in args.split(","):
        if not tok:
            continue
        key, _, val = tok.partition("=")
        kwargs[key.strip()] = float(val)
    try:
        return psystem_fields(kwargs["nu"], kwargs["kappa"])
    except KeyError as exc:
        raise ValueError(f"psystem spec needs nu= and kappa=: {spec!r}") from exc
