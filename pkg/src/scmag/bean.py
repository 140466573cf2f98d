"""Bean critical-state sheet currents for a thin type-II strip.

The local current density is restricted to +-jc or 0; integrating over the
thickness gives a sheet current bounded by Jc = d*jc, with total critical
current Ic = 2*w*Jc. The virgin ramp-up profile is

    J(x) = (2 Jc / pi) arctan sqrt((w^2 - b^2) / (b^2 - x^2)),  |x| < b
    J(x) = Jc,                                                  b < |x| < w

with penetration boundary b = w sqrt(1 - I^2/Ic^2). A single ramp-down from
Imax superposes a reversed profile with doubled sheet critical current:

    J_cycle(x; I) = J_virgin(x; Jc, Imax) - J_virgin(x; 2 Jc, Imax - I)

which at I = 0 is the remnant (frozen-flux) state: forward current in the
strip centre, backward current of magnitude Jc near the edges. These
profiles assume zero external bias while the current is cycled.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import CurrentExceedsCriticalError, HistoryError
from .sheet import SheetCurrentProfile, field_from_profile, on_axis_meissner, on_axis_normal


@dataclass(frozen=True)
class BeanStripState:
    """Thin strip of half-width w, thickness d and critical density jc."""

    half_width: float
    thickness: float
    jc: float
    history: tuple[float, ...] = ()

    def __post_init__(self):
        if self.half_width <= 0 or self.thickness <= 0 or self.jc <= 0:
            raise ValueError("half_width, thickness and jc must be positive")
        for i in self.history:
            if abs(i) > self.Ic * (1 + 1e-12):
                raise CurrentExceedsCriticalError(
                    f"history setpoint {i:g} A exceeds Ic = {self.Ic:g} A"
                )

    @property
    def Jc(self) -> float:
        """Sheet critical current d*jc (A/m)."""
        return self.thickness * self.jc

    @property
    def Ic(self) -> float:
        """Total critical current 2*w*Jc (A)."""
        return 2 * self.half_width * self.Jc

    def penetration_boundary(self, current: float) -> float:
        """Flux-front half-width b = w sqrt(1 - (I/Ic)^2)."""
        ratio = min(abs(current) / self.Ic, 1.0)
        return self.half_width * np.sqrt(max(0.0, 1.0 - ratio * ratio))


def _virgin_density(w: float, jc_sheet: float, b: float):
    wb2 = w * w - b * b

    def j(x: float) -> float:
        ax = abs(x)
        if ax >= w:
            return 0.0
        if ax >= b:
            return jc_sheet
        return (2 * jc_sheet / np.pi) * np.arctan(np.sqrt(wb2 / (b * b - x * x)))

    return j


def virgin_profile(state: BeanStripState, current: float) -> SheetCurrentProfile:
    """Sheet current after ramping the current up from the virgin state."""
    if current < 0:
        raise HistoryError("virgin ramp assumes a non-negative current")
    if current > state.Ic * (1 + 1e-12):
        raise CurrentExceedsCriticalError(
            f"I = {current:g} A exceeds Ic = {state.Ic:g} A"
        )
    if state.history and any(
        later < earlier for earlier, later in zip(state.history, state.history[1:])
    ):
        raise HistoryError("history is not a monotone ramp from zero; use cycle_profile")
    if state.history and current < state.history[-1]:
        raise HistoryError("current below the last setpoint; use cycle_profile")
    w = state.half_width
    current = min(current, state.Ic)
    b = state.penetration_boundary(current)
    if current == 0.0:
        return SheetCurrentProfile(w, 0.0, "bean-virgin", lambda x: 0.0, (), False, "even")
    density = _virgin_density(w, state.Jc, b)
    points = (-b, b) if 0.0 < b < w else ()
    return SheetCurrentProfile(w, current, "bean-virgin", density, points, False, "even")


def cycle_profile(state: BeanStripState, i_max: float, current: float) -> SheetCurrentProfile:
    """Sheet current on the descending branch after a single ramp to i_max."""
    if not 0.0 <= current <= i_max:
        raise HistoryError("descending branch requires 0 <= I <= Imax")
    if i_max > state.Ic * (1 + 1e-12):
        raise CurrentExceedsCriticalError(
            f"Imax = {i_max:g} A exceeds Ic = {state.Ic:g} A"
        )
    w = state.half_width
    b1 = state.penetration_boundary(i_max)
    up = _virgin_density(w, state.Jc, b1)
    # reversal: the return flux re-penetrates against a 2*Jc contrast
    delta = i_max - current
    b2 = w * np.sqrt(max(0.0, 1.0 - (delta / (2 * state.Ic)) ** 2))
    down = _virgin_density(w, 2 * state.Jc, b2)
    points = tuple(sorted(p for p in {-b1, b1, -b2, b2} if abs(p) < w))
    kind = "bean-remnant" if current == 0.0 else "bean-cycle"
    return SheetCurrentProfile(
        w, current, kind, lambda x: up(x) - down(x), points, False, "even"
    )


def on_axis_field(state: BeanStripState, profile: SheetCurrentProfile, z: float) -> float:
    """Bx(0, z) of a Bean profile via quadrature."""
    return field_from_profile(profile, 0.0, z).bx


def remnant_field_ratio(state: BeanStripState, i_max: float, z: float) -> float:
    """|B(0,z)| of the remnant profile over |B(0,z)| at the peak current."""
    if z <= 0:
        raise ValueError("z must be positive")
    remnant = cycle_profile(state, i_max, 0.0)
    peak = virgin_profile(state, i_max)
    b_rem = field_from_profile(remnant, 0.0, z).bx
    b_peak = field_from_profile(peak, 0.0, z).bx
    return abs(b_rem) / abs(b_peak)


def linearity_defect(state: BeanStripState, current: float, z: float) -> float:
    """Relative gap between the Bean on-axis field and the Meissner closed form.

    Vanishing for I << Ic; at I = Ic the profile is uniform and the field
    instead matches the normal-strip closed form.
    """
    if not 0 < current <= state.Ic * (1 + 1e-12):
        raise CurrentExceedsCriticalError("need 0 < I <= Ic")
    if z <= 0:
        raise ValueError("z must be positive")
    b_bean = field_from_profile(virgin_profile(state, current), 0.0, z).bx
    b_meissner = on_axis_meissner(current, state.half_width, z)
    return abs(b_bean - b_meissner) / abs(b_meissner)


def uniform_limit_defect(state: BeanStripState, z: float) -> float:
    """Gap between the Bean field at I = Ic and the uniform-strip closed form."""
    b_bean = field_from_profile(virgin_profile(state, state.Ic), 0.0, z).bx
    return abs(b_bean - on_axis_normal(state.Ic, state.half_width, z)) / abs(
        on_axis_normal(state.Ic, state.half_width, z)
    )
