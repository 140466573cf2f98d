"""Exception types shared across the package."""


class ScmagError(Exception):
    """Base class for all scmag errors."""


class UnitError(ScmagError):
    """A quantity string could not be interpreted in the expected unit."""


class UnknownMaterialError(ScmagError, KeyError):
    """Requested material is not in the registry."""


class ZeroMomentError(ScmagError):
    """Atom has no magnetic moment; field/gradient thresholds are undefined."""


class InvalidGeometryError(ScmagError, ValueError):
    """Geometry parameters violate their constraints."""


class TooCoarseMeshError(ScmagError, ValueError):
    """Requested panel count is below the supported minimum."""


class OnSheetEvaluationError(ScmagError):
    """Field requested on the current sheet, where it is discontinuous."""


class QuadratureError(ScmagError):
    """Adaptive quadrature failed to converge to the requested tolerance."""


class CurrentExceedsCriticalError(ScmagError, ValueError):
    """Transport current above the critical current of the strip."""


class HistoryError(ScmagError, ValueError):
    """Current history incompatible with the requested Bean profile."""


class InteriorPointError(ScmagError, ValueError):
    """Field requested inside the conductor."""


class NoTrapError(ScmagError):
    """No field minimum exists for the given parameters."""


class TooCloseToSurfaceError(ScmagError):
    """Observation point within the near-surface exclusion zone of the BEM."""


class SingularSystemError(ScmagError):
    """BEM collocation matrix is numerically singular."""


class RootBracketError(ScmagError):
    """Root finding could not bracket a solution."""


class UnboundedDirectionError(ScmagError):
    """No potential barrier exists along an escape direction."""


class ConfigError(ScmagError):
    """Scenario configuration is syntactically or semantically invalid."""
