"""Unit handling at the I/O boundary.

Everything inside the package is SI; Gauss, G/cm, microns etc. are accepted
and emitted only when parsing configs or writing tables.
"""

from __future__ import annotations

from .errors import UnitError

GAUSS = 1e-4  # T
GAUSS_PER_CM = 1e-2  # T/m

_LENGTH = {"m": 1.0, "cm": 1e-2, "mm": 1e-3, "um": 1e-6, "µm": 1e-6, "nm": 1e-9}
_CURRENT = {"A": 1.0, "mA": 1e-3, "uA": 1e-6, "µA": 1e-6}
_FIELD = {"T": 1.0, "mT": 1e-3, "uT": 1e-6, "µT": 1e-6, "G": GAUSS, "mG": 1e-3 * GAUSS}
_TEMPERATURE = {"K": 1.0, "mK": 1e-3, "uK": 1e-6, "µK": 1e-6, "nK": 1e-9}
_CURRENT_DENSITY = {"A/m^2": 1.0, "A/m2": 1.0, "A/m²": 1.0}
_GRADIENT = {"T/m": 1.0, "G/cm": GAUSS_PER_CM}

_TABLES = {
    "length": _LENGTH,
    "current": _CURRENT,
    "field": _FIELD,
    "temperature": _TEMPERATURE,
    "current_density": _CURRENT_DENSITY,
    "gradient": _GRADIENT,
    "dimensionless": {},
}


def tesla_to_gauss(b: float) -> float:
    return b / GAUSS


def gauss_to_tesla(b: float) -> float:
    return b * GAUSS


def parse_quantity(text: str, dimension: str, extra: dict[str, float] | None = None) -> float:
    """Parse a "value [unit]" string into SI.

    ``extra`` may supply context-dependent units, e.g. ``{"w": half_width}``
    for lengths expressed in strip half-widths.
    """
    try:
        table = _TABLES[dimension]
    except KeyError:
        raise UnitError(f"unknown dimension {dimension!r}")
    if extra:
        table = {**table, **extra}

    parts = text.strip().split()
    if not parts or len(parts) > 2:
        raise UnitError(f"cannot parse quantity {text!r}")
    try:
        value = float(parts[0])
    except ValueError:
        raise UnitError(f"cannot parse number in {text!r}") from None
    if len(parts) == 1:
        if dimension == "dimensionless" or not table:
            return value
        return value  # bare number: assume SI
    unit = parts[1]
    if dimension == "dimensionless":
        raise UnitError(f"unexpected unit {unit!r} on dimensionless quantity")
    if unit not in table:
        raise UnitError(
            f"unknown unit {unit!r} for {dimension}; expected one of {sorted(table)}"
        )
    return value * table[unit]
