"""Side-guide trap location, gradients, depth and validity checks.

A field source combined with a bias field forms a quadrupole line trap
above the wire. The trapping potential in the adiabatic approximation is
U = mu |B| plus gravity; gravity defaults to pulling along +z (trap below
an upside-down chip, so the pull is away from the surface).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.optimize import minimize_scalar

from . import bem as bem_mod
from .cylinder import CylinderFieldSource, CylinderScene
from .errors import (
    NoTrapError,
    RootBracketError,
    ScmagError,
    TooCloseToSurfaceError,
    UnboundedDirectionError,
)
from .geometry import StripGeometry
from .physical import KB, G_EARTH, AtomSpecies, Material
from .sheet import SheetCurrentProfile, field_from_profile

POSITION_TOL = 1e-6  # of the length scale
GRADIENT_STEP = 1e-4  # of the length scale
SURFACE_SCAN_OFFSET = 0.05  # of the length scale; toward-surface scan cutoff


class ProfileFieldSource:
    """Field of a thin-strip sheet-current profile (wire only, no bias)."""

    def __init__(self, profile: SheetCurrentProfile):
        self.profile = profile
        self.length_scale = profile.half_width
        self.surface_level = 0.0

    def b_field(self, x: float, z: float) -> tuple[float, float]:
        s = field_from_profile(self.profile, x, z)
        return s.bx, s.bz

    def min_height(self) -> float:
        # the sheet field is discontinuous across z = 0
        return 2e-6 * self.profile.half_width


class BemFieldSource:
    """Field of a solved BEM problem. The solution already contains its bias,
    so scenes built on it must not add the bias again."""

    def __init__(self, solution: bem_mod.BemSolution, length_scale: float | None = None):
        self.solution = solution
        mesh = solution.mesh
        self.length_scale = length_scale or 0.5 * (
            mesh.midpoints[:, 0].max() - mesh.midpoints[:, 0].min()
        )
        self.surface_level = float(mesh.midpoints[:, 1].max())

    def b_field(self, x: float, z: float) -> tuple[float, float]:
        s = bem_mod.evaluate_field(self.solution, x, z)
        return s.bx, s.bz

    def min_height(self) -> float:
        return 0.2 * float(self.solution.mesh.lengths.min())


@dataclass(frozen=True)
class TrapScene:
    """A field source, the bias it is combined with, and the trapped atom.

    ``field_source.b_field`` must return the wire-only field unless
    ``bias_included`` is set (BEM solutions embed their bias).
    """

    field_source: object
    atom: AtomSpecies
    bias: tuple[float, float] = (0.0, 0.0)
    bias_included: bool = False
    gravity_direction: tuple[float, float] = (0.0, 1.0)
    include_gravity: bool = True
    surface_level: float | None = None

    def __post_init__(self):
        g = np.asarray(self.gravity_direction, dtype=float)
        if not np.isclose(np.hypot(*g), 1.0, rtol=1e-9):
            raise ScmagError("gravity_direction must be a unit vector")

    @property
    def scale(self) -> float:
        return self.field_source.length_scale

    @property
    def surface(self) -> float:
        if self.surface_level is not None:
            return self.surface_level
        return getattr(self.field_source, "surface_level", 0.0)

    def total_field(self, x: float, z: float) -> np.ndarray:
        bx, bz = self.field_source.b_field(x, z)
        if not self.bias_included:
            bx += self.bias[0]
            bz += self.bias[1]
        return np.array([bx, bz])

    def field_magnitude(self, x: float, z: float) -> float:
        return float(np.hypot(*self.total_field(x, z)))


def total_potential(scene: TrapScene, x: float, z: float) -> float:
    """Trapping potential mu*|B| plus gravity (J)."""
    u = scene.atom.magnetic_moment * scene.field_magnitude(x, z)
    if scene.include_gravity:
        gx, gz = scene.gravity_direction
        u -= scene.atom.mass * G_EARTH * (gx * x + gz * z)
    return u


@dataclass
class TrapReport:
    x: float
    z: float
    field_at_min: float  # T
    gradient_z: float  # T/m
    gradient_x: float  # T/m
    bias_used: tuple[float, float]
    depth_K: float | None = None
    depth_limiting_direction: str | None = None
    validity: "ValidityVerdict | None" = None


def field_gradient(scene: TrapScene, x: float, z: float, step: float | None = None):
    """|dB/dx| and |dB/dz| from central differences of the field vector.

    At the quadrupole zero this is the cone slope of |B|, identical to the
    one-sided derivative of |B| along either axis.
    """
    h = step if step is not None else GRADIENT_STEP * scene.scale
    gx = np.linalg.norm(scene.total_field(x + h, z) - scene.total_field(x - h, z)) / (2 * h)
    gz = np.linalg.norm(scene.total_field(x, z + h) - scene.total_field(x, z - h)) / (2 * h)
    return float(gx), float(gz)


def _minimize_on_axis(scene: TrapScene, axis_x: float, z_lo: float, z_hi: float) -> float:
    zs = np.geomspace(max(z_lo, 1e-30), z_hi, 200) if z_lo > 0 else np.linspace(z_lo, z_hi, 200)
    us = np.array([total_potential(scene, axis_x, z) for z in zs])
    # deepest interior local minimum (with gravity the potential eventually
    # decreases without bound, so a global argmin may sit at the scan edge)
    local = np.nonzero((us[1:-1] <= us[:-2]) & (us[1:-1] <= us[2:]))[0] + 1
    if len(local) == 0:
        raise NoTrapError(
            "no interior potential minimum along the axis; check the bias sign/magnitude"
        )
    k = int(local[np.argmin(us[local])])
    res = minimize_scalar(
        lambda z: total_potential(scene, axis_x, z),
        bounds=(zs[k - 1], zs[k + 1]),
        method="bounded",
        options={"xatol": 0.01 * POSITION_TOL * scene.scale},
    )
    return float(res.x)


def find_trap(scene: TrapScene, z_bracket: tuple[float, float] | None = None) -> TrapReport:
    """Locate the potential minimum above the wire.

    1D bracketed minimization along x = 0 followed by alternating 1D
    refinements in x and z; position tolerance 1e-6 of the length scale.
    """
    scale = scene.scale
    z_floor = scene.surface + getattr(scene.field_source, "min_height", lambda: 0.0)()
    if z_bracket is None:
        z_lo = scene.surface + SURFACE_SCAN_OFFSET * scale
        z_hi = scene.surface + 50.0 * scale
    else:
        z_lo, z_hi = z_bracket
    z_lo = max(z_lo, z_floor)

    x_t = 0.0
    z_t = _minimize_on_axis(scene, x_t, z_lo, z_hi)
    for _ in range(3):
        span = 0.5 * scale
        res = minimize_scalar(
            lambda x: total_potential(scene, x, z_t),
            bounds=(x_t - span, x_t + span),
            method="bounded",
            options={"xatol": 0.01 * POSITION_TOL * scale},
        )
        x_new = float(res.x)
        res = minimize_scalar(
            lambda z: total_potential(scene, x_new, z),
            bounds=(max(z_lo, z_t - span), z_t + span),
            method="bounded",
            options={"xatol": 0.01 * POSITION_TOL * scale},
        )
        z_new = float(res.x)
        moved = np.hypot(x_new - x_t, z_new - z_t)
        x_t, z_t = x_new, z_new
        if moved < 0.1 * POSITION_TOL * scale:
            break

    gx, gz = field_gradient(scene, x_t, z_t)
    return TrapReport(
        x=x_t,
        z=z_t,
        field_at_min=scene.field_magnitude(x_t, z_t),
        gradient_z=gz,
        gradient_x=gx,
        bias_used=tuple(scene.bias),
    )


def _scan_barrier(scene: TrapScene, origin: tuple[float, float], direction: np.ndarray,
                  s_max: float, u_ref: float) -> float:
    """Escape barrier along a direction: running max of U minus U(trap).

    Marches outward multiplicatively, breaking early once past the saddle
    (potential back below the trap level); the maximum is then refined.
    A plateau at the scan limit counts as the barrier.
    """
    x0, z0 = origin
    scale = scene.scale
    s_values = []
    s = 0.01 * scale
    while s < s_max:
        s_values.append(s)
        s *= 1.15
    s_values.append(s_max)
    best_u, best_s = u_ref, 0.0
    for s in s_values:
        try:
            u = total_potential(scene, x0 + s * direction[0], z0 + s * direction[1])
        except (TooCloseToSurfaceError, ScmagError):
            break
        if u > best_u:
            best_u, best_s = u, s
        if best_u > u_ref and u < u_ref:
            break  # past the saddle
    if best_s == 0.0:
        return 0.0
    res = minimize_scalar(
        lambda t: -total_potential(scene, x0 + t * direction[0], z0 + t * direction[1]),
        bounds=(best_s / 1.3, min(best_s * 1.3, s_max)),
        method="bounded",
        options={"xatol": 1e-4 * scale},
    )
    return max(float(-res.fun) - u_ref, best_u - u_ref, 0.0)


def trap_depth(scene: TrapScene, report: TrapReport,
               z_max_factor: float = 2e4) -> tuple[float, str]:
    """Minimal escape barrier from the trap, as a temperature (K).

    Scans toward the surface (down to the near-surface cutoff), away from
    it, and laterally along +-x; the depth is the smallest barrier and the
    limiting direction is recorded. Fills the report in place.
    """
    scale = scene.scale
    u0 = total_potential(scene, report.x, report.z)
    barriers: dict[str, float] = {}

    z_floor = scene.surface + max(
        SURFACE_SCAN_OFFSET * scale,
        getattr(scene.field_source, "min_height", lambda: 0.0)(),
    )
    if report.z - z_floor > 0:
        us = [
            total_potential(scene, report.x, z)
            for z in np.linspace(z_floor, report.z, 100)
        ]
        barriers["toward-surface"] = max(max(us) - u0, 0.0)

    away = _scan_barrier(scene, (report.x, report.z), np.array([0.0, 1.0]),
                         z_max_factor * scale, u0)
    if away <= 0.0:
        raise UnboundedDirectionError(
            "no barrier away from the chip: gravity exceeds the trap gradient"
        )
    barriers["away"] = away

    barriers["lateral"] = min(
        _scan_barrier(scene, (report.x, report.z), np.array([sign, 0.0]),
                      200.0 * scale, u0)
        for sign in (+1.0, -1.0)
    )
    direction = min(barriers, key=barriers.get)
    depth_k = max(barriers[direction], 0.0) / KB
    report.depth_K = depth_k
    report.depth_limiting_direction = direction
    return depth_k, direction


def required_bias(source, z_target: float, kind: str = "thin") -> float:
    """Horizontal bias magnitude that places the trap at z_target.

    For thin profiles this is |Bx(0, z_target)| of the wire field. For BEM
    sources pass a pair of solutions via ``bem_required_bias`` instead.
    """
    if z_target <= 0:
        raise ValueError("z_target must be positive")
    bx, _ = source.b_field(0.0, z_target)
    if bx == 0.0:
        raise RootBracketError("wire field vanishes on the axis; no bias traps there")
    return abs(bx)


def bem_required_bias(current_solution: bem_mod.BemSolution,
                      unit_bias_solution: bem_mod.BemSolution,
                      z_target: float) -> float:
    """Bias magnitude for a BEM wire using linearity of the two subproblems.

    ``unit_bias_solution`` must be solved with bias (-1, 0) and no current;
    the trap condition Bx_I(z) - beta * u(z) = 0 gives beta directly.
    """
    bx_i = bem_mod.evaluate_field(current_solution, 0.0, z_target).bx
    u = -bem_mod.evaluate_field(unit_bias_solution, 0.0, z_target).bx
    if u <= 0:
        raise RootBracketError("unit-bias response has unexpected sign on the axis")
    beta = bx_i / u
    if beta <= 0:
        raise RootBracketError("no positive bias traps at this height")
    return beta


@dataclass(frozen=True)
class ValidityVerdict:
    passed: bool
    reasons: tuple[str, ...]
    max_surface_field: float
    bc1: float
    current: float
    critical_current: float

    def __bool__(self) -> bool:
        return self.passed


def meissner_validity(material: Material, max_surface_field: float,
                      current: float, cross_section_area: float) -> ValidityVerdict:
    """Meissner-state validity: surface field below Bc1 and current below jc*A."""
    reasons = []
    i_c = material.jc * cross_section_area
    if max_surface_field >= material.Bc1:
        reasons.append("edge field exceeds Bc1")
    if abs(current) >= i_c:
        reasons.append("critical current exceeded")
    return ValidityVerdict(
        passed=not reasons,
        reasons=tuple(reasons),
        max_surface_field=max_surface_field,
        bc1=material.Bc1,
        current=current,
        critical_current=i_c,
    )


def meissner_validity_bem(material: Material, solution: bem_mod.BemSolution,
                          geometry: StripGeometry | None = None) -> ValidityVerdict:
    """Validity verdict from a solved BEM problem (surface field from panels)."""
    from .physical import MU0

    k = bem_mod.surface_current(solution)
    max_b = float(np.max(np.abs(k))) * MU0
    if geometry is not None:
        area = geometry.cross_section_area
    else:
        # fall back to the polygon area of the mesh
        v = solution.mesh.vertices
        area = 0.5 * abs(
            np.sum(v[:-1, 0] * v[1:, 1] - v[1:, 0] * v[:-1, 1])
        )
    return meissner_validity(material, max_b, solution.problem.current, area)


@dataclass
class TrapScanRow:
    z_target: float
    bias: float | None = None
    z_trap: float | None = None
    gradient_z: float | None = None
    gradient_x: float | None = None
    depth_K: float | None = None
    limiting_direction: str | None = None
    meets_gradient: bool | None = None
    meets_depth: bool | None = None
    error: str | None = None


def scan_trap_parameters(make_scene: Callable[[float], TrapScene], z_targets,
                         min_gradient: float, min_depth_K: float) -> list[TrapScanRow]:
    """Trap figures of merit over a grid of target heights.

    ``make_scene(z_t)`` must return a TrapScene whose bias places the trap
    at z_t. Rows record per-height errors instead of aborting the scan.
    """
    rows = []
    for z_t in z_targets:
        row = TrapScanRow(z_target=float(z_t))
        try:
            scene = make_scene(float(z_t))
            row.bias = float(np.hypot(*scene.bias))
            report = find_trap(scene, z_bracket=(0.25 * z_t, 4.0 * z_t))
            depth_k, direction = trap_depth(scene, report)
            row.z_trap = report.z
            row.gradient_z = report.gradient_z
            row.gradient_x = report.gradient_x
            row.depth_K = depth_k
            row.limiting_direction = direction
            row.meets_gradient = report.gradient_z >= min_gradient
            row.meets_depth = depth_k >= min_depth_K
        except ScmagError as exc:
            row.error = f"{type(exc).__name__}: {exc}"
        rows.append(row)
    return rows


def scene_for_profile(profile: SheetCurrentProfile, atom: AtomSpecies,
                      bias: tuple[float, float], **kwargs) -> TrapScene:
    return TrapScene(ProfileFieldSource(profile), atom, bias=bias, **kwargs)


def scene_for_bem(solution: bem_mod.BemSolution, atom: AtomSpecies,
                  length_scale: float | None = None, **kwargs) -> TrapScene:
    return TrapScene(
        BemFieldSource(solution, length_scale),
        atom,
        bias=tuple(solution.problem.bias),
        bias_included=True,
        **kwargs,
    )


def scene_for_cylinder(scene: CylinderScene, atom: AtomSpecies, **kwargs) -> TrapScene:
    source = CylinderFieldSource(scene)
    return TrapScene(source, atom, bias=(scene.bias, 0.0), bias_included=True, **kwargs)
