"""Exception types raised by dgsim.

Every class derives from ``ValueError`` so callers that only care about
"bad input" can catch the builtin.
"""


class DgsimError(ValueError):
    """Base class for all library errors."""


class InvalidGridError(DgsimError):
    """Grid point count is not a power of two >= 16, or the domain is empty."""


class GridMismatchError(DgsimError):
    """Two wavefunctions live on different grids."""


class ZeroStateError(DgsimError):
    """An operation needs a nonzero state vector."""


class IntervalError(DgsimError):
    """Malformed interval set or partition (a >= b, NaN, overlapping cells)."""


class NodeDetectedError(DgsimError):
    """Density vanishes (or nearly vanishes) where the direct integrator divides by it."""


class BlowUpError(DgsimError):
    """Norm drift of the direct integrator exceeded its tolerance."""


class MisalignedGridError(DgsimError):
    """Step discontinuities of piecewise-constant data do not sit on cell boundaries."""


class SupportCollisionError(DgsimError):
    """Wavepackets that must stay essentially disjoint overlap."""


class DomainOverflowError(DgsimError):
    """A scaled set or a spreading packet reaches the periodic boundary."""


class ConfigError(DgsimError):
    """Configuration file could not be parsed or failed validation."""
