"""Exception types raised across the package."""


class SpectralError(Exception):
    """Base class for all errors raised by this package."""


class IllConditioned(SpectralError):
    """Two located roots are too close to separate at the requested tolerance."""


class DegenerateCritical(UserWarning):
    """A critical point is an inflection, not an extremum.

    Emitted as a warning: such points are simply left out of the
    extreme-value lists.
    """


class NonRealRoots(SpectralError):
    """The characteristic polynomial has fewer than n real roots."""


class OutOfRange(SpectralError):
    """A value of f lies outside the feasible interval."""


class PatternViolation(SpectralError):
    """A boundary spectrum breaks the multiplicity/parity rules."""


class InsufficientCriticalRoots(SpectralError):
    """F0' has too few real roots for the requested construction."""


class RepeatedEigenvalue(SpectralError):
    """Two eigenvalues coincide (gap below the working threshold)."""


class SingularSystem(SpectralError):
    """The Vandermonde system is numerically singular."""


class IndexInDoubledPair(SpectralError):
    """The requested index belongs to a doubled eigenvalue at the boundary."""


class PoleAngle(SpectralError):
    """An angle sits on (or within tolerance of) a pole of cot."""


class NoSignChange(SpectralError):
    """The bracket does not enclose a sign change."""
