"""Closed-form side-guide solutions for a cylindrical wire.

The cylinder (radius R, axis along y) carries a transport current I in a
homogeneous bias field of magnitude B0. The polar angle theta is measured
from the trap side: theta = 0 points along +z (above the wire) and the bias
points along +x (theta = pi/2), so that above the wire the current field and
the bias are antiparallel and cancel at the trap.

Superconducting (Meissner) cylinder:

    B_r     = B0 (1 - R^2/r^2) sin(theta)
    B_theta = B0 (1 + R^2/r^2) cos(theta) - mu0 I / (2 pi r)

Normal cylinder: the bias is undisturbed, B_theta = B0 cos(theta) + ... with
the same current term. These are the exact oracles for the boundary-element
solver.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InteriorPointError, NoTrapError
from .geometry import CylinderGeometry
from .physical import MU0
from .sheet import FieldSample

SUPERCONDUCTING = "superconducting"
NORMAL = "normal"


@dataclass(frozen=True)
class CylinderScene:
    geometry: CylinderGeometry
    current: float = 0.0
    bias: float = 0.0
    state: str = SUPERCONDUCTING

    def __post_init__(self):
        if self.state not in (SUPERCONDUCTING, NORMAL):
            raise ValueError(f"state must be {SUPERCONDUCTING!r} or {NORMAL!r}")
        if self.current < 0 or self.bias < 0:
            raise ValueError("current and bias are magnitudes, >= 0")


def cylinder_field_polar(scene: CylinderScene, r: float, theta: float) -> tuple[float, float]:
    """(B_r, B_theta) at polar point (r, theta), r >= R."""
    R = scene.geometry.radius
    if r < R:
        raise InteriorPointError(f"r = {r:g} is inside the cylinder (R = {R:g})")
    if scene.state == SUPERCONDUCTING:
        ratio = (R / r) ** 2
        br = scene.bias * (1 - ratio) * np.sin(theta)
        bt = scene.bias * (1 + ratio) * np.cos(theta)
    else:
        br = scene.bias * np.sin(theta)
        bt = scene.bias * np.cos(theta)
    bt -= MU0 * scene.current / (2 * np.pi * r)
    return br, bt


def cylinder_field(scene: CylinderScene, r: float, theta: float) -> FieldSample:
    """Cartesian field sample at polar point (r, theta)."""
    br, bt = cylinder_field_polar(scene, r, theta)
    # theta from +z toward +x: r_hat = (sin, cos), theta_hat = (cos, -sin)
    sin, cos = np.sin(theta), np.cos(theta)
    bx = br * sin + bt * cos
    bz = br * cos - bt * sin
    return FieldSample(r * sin, r * cos, bx, bz)


def trap_height_normal(current: float, bias: float, radius: float) -> float:
    """Trap height z_t = mu0 I / (2 pi B0) - R above a normal cylinder."""
    if bias <= 0 or current <= 0:
        raise NoTrapError("need positive current and bias")
    r_t = MU0 * current / (2 * np.pi * bias)
    if r_t <= radius:
        raise NoTrapError(
            f"field zero at r = {r_t:g} lies inside the wire (R = {radius:g})"
        )
    return r_t - radius


def trap_height_superconducting(current: float, bias: float, radius: float) -> float:
    """Trap height above a Meissner cylinder.

    With h = 2 pi R B0 / (mu0 I), the trap radius is the outer root of
    r^2 - (R/h) r + R^2 = 0: r_t = R (1 + sqrt(1 - 4 h^2)) / (2 h),
    requiring 0 < h <= 1/2.
    """
    if bias <= 0 or current <= 0:
        raise NoTrapError("need positive current and bias")
    h = 2 * np.pi * radius * bias / (MU0 * current)
    if h > 0.5:
        raise NoTrapError(f"no trap: h = {h:g} exceeds 1/2")
    r_t = radius * (1 + np.sqrt(1 - 4 * h * h)) / (2 * h)
    return r_t - radius


def required_bias_cylinder(z_t: float, current: float, radius: float, state: str) -> float:
    """Bias field that places the trap at height z_t above the wire surface."""
    if z_t <= 0:
        raise ValueError("z_t must be positive")
    r_t = radius + z_t
    if state == NORMAL:
        return MU0 * current / (2 * np.pi * r_t)
    if state == SUPERCONDUCTING:
        # inverse of the quadratic: h = r R / (r^2 + R^2)
        return MU0 * current * r_t / (2 * np.pi * (r_t * r_t + radius * radius))
    raise ValueError(f"unknown state {state!r}")


class CylinderFieldSource:
    """Cartesian field adapter for the trap-analysis module.

    The cylinder is centred at (0, -R) so that z = 0 is the top of the wire,
    matching the strip convention.
    """

    def __init__(self, scene: CylinderScene):
        self.scene = scene
        self.length_scale = scene.geometry.radius
        self.surface_level = 0.0

    def b_field(self, x: float, z: float) -> tuple[float, float]:
        zc = z + self.scene.geometry.radius  # centre coordinates
        r = np.hypot(x, zc)
        theta = np.arctan2(x, zc)
        s = cylinder_field(self.scene, r, theta)
        return s.bx, s.bz

    def min_height(self) -> float:
        return 1e-9 * self.length_scale
