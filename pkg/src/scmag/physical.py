"""Physical constants, superconductor material data and atom species.

All quantities are SI. The material table collects critical parameters of
common type-II superconducting films at 4.2 K; the current densities refer
to the highest-quality films, so experiments may want to override ``jc``.
"""

from __future__ import annotations

import configparser
from dataclasses import dataclass, replace

from .errors import ScmagError, UnknownMaterialError, ZeroMomentError
from .units import parse_quantity

MU0 = 4e-7 * 3.141592653589793  # T*m/A, exact
KB = 1.380649e-23  # J/K, exact
MUB = 9.2740100783e-24  # J/T
G_EARTH = 9.80665  # m/s^2
PHI0 = 2.067833848e-15  # T*m^2, flux quantum pi*hbar/e (documentation only)


@dataclass(frozen=True)
class PhysicalConstants:
    mu0: float = MU0
    kB: float = KB
    muB: float = MUB
    g: float = G_EARTH
    Phi0: float = PHI0


CONSTANTS = PhysicalConstants()


@dataclass(frozen=True)
class Material:
    """Critical parameters of a type-II superconductor (4.2 K film values).

    ``Bc1`` is the in-plane (B || ab) lower critical field for anisotropic
    materials; ``Bc1_c`` optionally stores the B || c value.
    """

    name: str
    Tc: float  # K
    Bc1: float  # T
    Bc2: float  # T
    jc: float  # A/m^2
    Bc1_c: float | None = None

    def __post_init__(self):
        for field_name in ("Tc", "Bc1", "Bc2", "jc"):
            if getattr(self, field_name) <= 0:
                raise ScmagError(f"{self.name}: {field_name} must be positive")
        if self.Bc1 >= self.Bc2:
            raise ScmagError(f"{self.name}: Bc1 must be below Bc2")

    def with_jc(self, jc: float) -> "Material":
        return replace(self, jc=jc)


BUILTIN_MATERIALS = {
    m.name: m
    for m in [
        Material("Nb", Tc=9.3, Bc1=0.140, Bc2=0.28, jc=5e10),
        Material("Nb3Sn", Tc=18.0, Bc1=0.040, Bc2=27.0, jc=6e10),
        Material("MgB2", Tc=39.0, Bc1=0.030, Bc2=15.0, jc=3.5e11),
        Material("YBCO", Tc=92.0, Bc1=0.025, Bc2=100.0, jc=7.2e11, Bc1_c=0.090),
        Material("BSCCO", Tc=108.0, Bc1=0.013, Bc2=100.0, jc=1e10),
    ]
}

_registry: dict[str, Material] = dict(BUILTIN_MATERIALS)


def lookup_material(name: str) -> Material:
    """Return a registered material by name."""
    try:
        return _registry[name]
    except KeyError:
        raise UnknownMaterialError(
            f"unknown material {name!r}; available: {', '.join(sorted(_registry))}"
        ) from None


def register_material(material: Material) -> None:
    _registry[material.name] = material


def load_materials_file(path) -> list[Material]:
    """Register materials from an INI-style file, one section per material.

    Required keys: Tc, Bc1, Bc2, jc; optional Bc1_c. Values take units
    (e.g. ``Bc1 = 140 mT``); bare numbers are SI.
    """
    parser = configparser.ConfigParser()
    with open(path) as fh:
        parser.read_file(fh)
    loaded = []
    for name in parser.sections():
        section = parser[name]
        known = {"Tc", "Bc1", "Bc2", "jc", "Bc1_c"}
        unknown = set(section) - {k.lower() for k in known}
        if unknown:
            raise ScmagError(f"material {name}: unknown keys {sorted(unknown)}")
        kwargs = dict(
            Tc=parse_quantity(section["Tc"], "temperature"),
            Bc1=parse_quantity(section["Bc1"], "field"),
            Bc2=parse_quantity(section["Bc2"], "field"),
            jc=parse_quantity(section["jc"], "current_density"),
        )
        if "Bc1_c" in section:
            kwargs["Bc1_c"] = parse_quantity(section["Bc1_c"], "field")
        material = Material(name, **kwargs)
        register_material(material)
        loaded.append(material)
    return loaded


@dataclass(frozen=True)
class AtomSpecies:
    """Trappable atom in a weak-field-seeking Zeeman state."""

    name: str
    mass: float  # kg
    gF: float
    mF: float

    @property
    def magnetic_moment(self) -> float:
        """Effective moment gF*mF*muB (J/T)."""
        return self.gF * self.mF * MUB


RB87 = AtomSpecies("Rb87", mass=1.44316e-25, gF=0.5, mF=2)

ATOMS = {"Rb87": RB87}


def lookup_atom(name: str) -> AtomSpecies:
    try:
        return ATOMS[name]
    except KeyError:
        raise UnknownMaterialError(
            f"unknown atom {name!r}; available: {', '.join(sorted(ATOMS))}"
        ) from None


def gravity_gradient_threshold(atom: AtomSpecies) -> float:
    """Minimum |grad B| (T/m) supporting the atom against gravity: m*g/mu."""
    mu = atom.magnetic_moment
    if mu <= 0:
        raise ZeroMomentError(f"{atom.name}: magnetic moment must be positive")
    return atom.mass * G_EARTH / mu


def field_for_temperature_depth(atom: AtomSpecies, temperature: float) -> float:
    """Field scale (T) whose Zeeman energy equals kB*T."""
    if temperature < 0:
        raise ScmagError("temperature must be non-negative")
    mu = atom.magnetic_moment
    if mu <= 0:
        raise ZeroMomentError(f"{atom.name}: magnetic moment must be positive")
    return KB * temperature / mu
