"""Thin-strip sheet currents and Biot-Savart field evaluation.

A strip of half-width w in the z = 0 plane carries a sheet current J(x)
(A/m) along +y. The field at (x, z) follows from the 2D Biot-Savart law

    Bx =  mu0/(2 pi) * int J(x') z / ((x-x')^2 + z^2) dx'
    Bz = -mu0/(2 pi) * int J(x') (x-x') / ((x-x')^2 + z^2) dx'

evaluated with adaptive quadrature. Profiles with inverse-square-root edge
singularities (Meissner and perpendicular-bias screening) are integrated
after the substitution x' = w sin(phi), which removes the singularity
exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable

import numpy as np
from scipy.integrate import quad

from .errors import OnSheetEvaluationError, QuadratureError
from .physical import MU0

QUAD_REL_TOL = 1e-10
QUAD_LIMIT = 200
ON_SHEET_Z = 1e-6  # in units of w


@dataclass(frozen=True)
class FieldSample:
    x: float
    z: float
    bx: float
    bz: float

    @property
    def b(self) -> np.ndarray:
        return np.array([self.bx, self.bz])

    @property
    def magnitude(self) -> float:
        return float(np.hypot(self.bx, self.bz))


@dataclass(frozen=True)
class SheetCurrentProfile:
    """Sheet current J(x) on |x| <= w carrying a total current I.

    ``density`` evaluates J pointwise; ``breakpoints`` lists interior kinks
    for the quadrature; ``edge_singular`` marks 1/sqrt(w^2-x^2) edges.
    ``symmetry`` is 'even' for transport profiles, 'odd' for screening ones.
    """

    half_width: float
    total_current: float
    kind: str
    density: Callable[[float], float] = field(repr=False)
    breakpoints: tuple[float, ...] = ()
    edge_singular: bool = False
    symmetry: str | None = None

    def __call__(self, x: float) -> float:
        return self.density(x)

    @cached_property
    def abs_current(self) -> float:
        """Integral of |J| over the strip; sets absolute quadrature floors."""
        w = self.half_width
        if self.edge_singular:
            val, _ = quad(
                lambda phi: abs(self.density(w * np.sin(phi))) * w * np.cos(phi),
                -np.pi / 2,
                np.pi / 2,
                limit=QUAD_LIMIT,
            )
        else:
            val, _ = quad(
                lambda x: abs(self.density(x)),
                -w,
                w,
                points=list(self.breakpoints) or None,
                limit=QUAD_LIMIT,
            )
        return max(abs(val), abs(self.total_current), 1e-300)

    def integrated_current(self) -> float:
        """Quadrature of J over the strip (should match total_current)."""
        return _integrate_profile(self, lambda x: 1.0)


def meissner_profile(current: float, half_width: float) -> SheetCurrentProfile:
    """Meissner-state transport profile J = (I/pi)/sqrt(w^2 - x^2)."""
    w = _check_width(half_width)

    def j(x: float) -> float:
        if abs(x) >= w:
            return 0.0
        return current / np.pi / np.sqrt(w * w - x * x)

    return SheetCurrentProfile(w, current, "meissner", j, (), True, "even")


def normal_profile(current: float, half_width: float) -> SheetCurrentProfile:
    """Uniform transport profile of a normal-metal strip."""
    w = _check_width(half_width)
    j0 = current / (2 * w)
    return SheetCurrentProfile(w, current, "normal", lambda x: j0, (), False, "even")


def vertical_screen_profile(b0z: float, half_width: float) -> SheetCurrentProfile:
    """Screening response of a Meissner strip to a perpendicular bias b0z.

    Odd profile J(x) = -(2 b0z / mu0) x / sqrt(w^2 - x^2); carries no net
    current and cancels the perpendicular field inside the strip.
    """
    w = _check_width(half_width)
    a = -2.0 * b0z / MU0

    def j(x: float) -> float:
        if abs(x) >= w:
            return 0.0
        return a * x / np.sqrt(w * w - x * x)

    return SheetCurrentProfile(w, 0.0, "vertical-screen", j, (), True, "odd")


def tabulated_profile(xs, js, kind: str = "tabulated") -> SheetCurrentProfile:
    """Linearly interpolated profile from samples on [-w, w]."""
    xs = np.asarray(xs, dtype=float)
    js = np.asarray(js, dtype=float)
    if xs.ndim != 1 or xs.shape != js.shape or len(xs) < 2:
        raise ValueError("need matching 1D sample arrays with at least two points")
    w = float(np.max(np.abs(xs)))
    total = float(np.trapezoid(js, xs))

    def j(x: float) -> float:
        return float(np.interp(x, xs, js, left=0.0, right=0.0))

    return SheetCurrentProfile(w, total, kind, j, tuple(xs[1:-1]), False, None)


def _check_width(w: float) -> float:
    if w <= 0:
        raise ValueError("half_width must be positive")
    return float(w)


def _integrate_profile(profile: SheetCurrentProfile, weight: Callable[[float], float],
                       singular_at: float | None = None, weight_scale: float = 1.0) -> float:
    """Integrate J(x') * weight(x') over the strip to the package tolerance."""
    w = profile.half_width
    floor = 1e-13 * profile.abs_current * weight_scale
    if profile.edge_singular:
        points = None
        if singular_at is not None and abs(singular_at) < w:
            points = [np.arcsin(singular_at / w)]
        val, err = quad(
            lambda phi: profile.density(w * np.sin(phi)) * weight(w * np.sin(phi)) * w * np.cos(phi),
            -np.pi / 2,
            np.pi / 2,
            points=points,
            epsabs=floor,
            epsrel=QUAD_REL_TOL,
            limit=QUAD_LIMIT,
        )
    else:
        points = list(profile.breakpoints)
        if singular_at is not None and abs(singular_at) < w:
            points.append(singular_at)
        val, err = quad(
            lambda x: profile.density(x) * weight(x),
            -w,
            w,
            points=sorted(points) or None,
            epsabs=floor,
            epsrel=QUAD_REL_TOL,
            limit=QUAD_LIMIT,
        )
    if not np.isfinite(val) or err > max(1e-8 * abs(val), 10 * floor):
        raise QuadratureError(
            f"quadrature failed for {profile.kind} profile (value {val:g}, error {err:g})"
        )
    return val


def field_from_profile(profile: SheetCurrentProfile, x: float, z: float) -> FieldSample:
    """Biot-Savart field of the sheet current at (x, z), off the sheet."""
    w = profile.half_width
    if abs(z) < ON_SHEET_Z * w and abs(x) <= w:
        raise OnSheetEvaluationError(
            f"field on the current sheet (x={x:g}, z={z:g}) is discontinuous"
        )
    pref = MU0 / (2 * np.pi)
    # distance from the observation point to the strip sets the kernel scale
    dist2 = z * z + (0.0 if abs(x) <= w else (abs(x) - w) ** 2)
    near = abs(x) < w
    if x == 0.0 and profile.symmetry == "odd":
        bx = 0.0
    else:
        bx = pref * z * _integrate_profile(
            profile,
            lambda xp: 1.0 / ((x - xp) ** 2 + z * z),
            singular_at=x if near else None,
            weight_scale=1.0 / dist2,
        )
    if x == 0.0 and profile.symmetry == "even":
        bz = 0.0  # odd integrand on the axis
    else:
        bz = -pref * _integrate_profile(
            profile,
            lambda xp: (x - xp) / ((x - xp) ** 2 + z * z),
            singular_at=x if near else None,
            weight_scale=1.0 / np.sqrt(dist2),
        )
    return FieldSample(x, z, bx, bz)


def on_axis_meissner(current: float, half_width: float, z: float) -> float:
    """Closed form Bx(0, z) above a Meissner strip: mu0 I / (2 pi sqrt(w^2+z^2))."""
    if z < 0:
        raise ValueError("z must be non-negative")
    return MU0 * current / (2 * np.pi * np.hypot(half_width, z))


def on_axis_normal(current: float, half_width: float, z: float) -> float:
    """Closed form Bx(0, z) above a uniform strip: mu0 I arctan(w/z) / (2 pi w)."""
    if z < 0:
        raise ValueError("z must be non-negative")
    w = half_width
    if z == 0:
        return MU0 * current / (4 * w)
    return MU0 * current / (2 * np.pi * w) * np.arctan(w / z)


def field_unit(current: float, half_width: float) -> float:
    """Field normalization mu0 I / (2 pi^2 w) used for figure overlays."""
    return MU0 * current / (2 * np.pi**2 * half_width)


def field_map(profile: SheetCurrentProfile, xs, zs, bias: tuple[float, float] = (0.0, 0.0)):
    """Evaluate the total field over a rectangular grid.

    Returns rows (x, z, bx, bz, |B|), row-major over the grid.
    """
    rows = []
    for z in np.asarray(zs, dtype=float):
        for x in np.asarray(xs, dtype=float):
            s = field_from_profile(profile, float(x), float(z))
            bx = s.bx + bias[0]
            bz = s.bz + bias[1]
            rows.append((x, z, bx, bz, np.hypot(bx, bz)))
    return np.array(rows)
