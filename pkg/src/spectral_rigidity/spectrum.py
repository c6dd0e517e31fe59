"""Constraint models, the feasible interval of f, and spectra at given f.

Fixing the first n-1 power sums c_1..c_{n-1} of n reals fixes every
coefficient of their characteristic polynomial except the constant one,
which moves affinely with f = p_n:

    F(x) = F0(x) - f/n + (-1)^n C.

F has n real roots exactly when the horizontal line y = f/n - (-1)^n C
meets the graph of F0 n times, which pins f to [a, b].
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import NonRealRoots, OutOfRange, PatternViolation
from .poly import DEFAULT_TOL, Poly, local_extrema, real_roots, eval_poly, derivative
from .symfunc import dn_offset, power_sums_to_elementary

ENDPOINT_RTOL = 1e-9


@dataclass(frozen=True)
class Spectrum:
    """Sorted distinct eigenvalues with multiplicities summing to n."""

    entries: tuple[tuple[float, int], ...]

    def __post_init__(self):
        vals = [v for v, _ in self.entries]
        if any(b <= a for a, b in zip(vals, vals[1:])):
            raise ValueError("eigenvalues must be strictly increasing")
        if any(m < 1 for _, m in self.entries):
            raise ValueError("multiplicities must be positive")

    @classmethod
    def from_values(cls, values: Iterable[float]) -> "Spectrum":
        """Group equal values (exact equality) into multiplicities."""
        out: list[list] = []
        for v in sorted(float(x) for x in values):
            if out and out[-1][0] == v:
                out[-1][1] += 1
            else:
                out.append([v, 1])
        return cls(tuple((v, m) for v, m in out))

    def __iter__(self):
        return iter(self.entries)

    @property
    def n(self) -> int:
        return sum(m for _, m in self.entries)

    @property
    def values(self) -> list[float]:
        return [v for v, _ in self.entries]

    @property
    def multiplicities(self) -> tuple[int, ...]:
        return tuple(m for _, m in self.entries)

    @property
    def is_simple(self) -> bool:
        return all(m == 1 for _, m in self.entries)

    def expanded(self) -> list[float]:
        """lambda_1 <= ... <= lambda_n."""
        return [v for v, m in self.entries for _ in range(m)]


@dataclass(frozen=True)
class ConstraintModel:
    n: int
    c: tuple[float, ...]
    d: tuple[float, ...]
    C: float
    F0: Poly


@dataclass(frozen=True)
class FeasibleInterval:
    a: float
    b: float
    a_prime: float
    b_prime: float

    @property
    def finite(self) -> bool:
        return math.isfinite(self.a) and math.isfinite(self.b)


class RegionLabel(enum.Enum):
    X = "X"
    Y = "Y"
    Z = "Z"
    X_EPS = "X_eps"
    Y_EPS = "Y_eps"
    Z_EPS = "Z_eps"


def _sign(n: int) -> int:
    return -1 if n % 2 else 1


def build_model(n: int, c: Sequence[float]) -> ConstraintModel:
    """Assemble F0 = x^n - d1 x^{n-1} + ... + (-1)^{n-1} d_{n-1} x and C."""
    if n < 2:
        raise ValueError("n must be at least 2")
    c = tuple(float(x) for x in c)
    if len(c) != n - 1:
        raise ValueError(f"expected {n - 1} power sums, got {len(c)}")
    if not all(math.isfinite(x) for x in c):
        raise ValueError("power sums must be finite")
    d = power_sums_to_elementary(c)
    coeffs = [0.0] * (n + 1)
    coeffs[n] = 1.0
    for k, dk in enumerate(d, start=1):
        coeffs[n - k] = _sign(k) * dk
    return ConstraintModel(n=n, c=c, d=d, C=dn_offset(c), F0=Poly(coeffs))


def char_poly_at(model: ConstraintModel, f: float) -> Poly:
    """F(x) = F0(x) - f/n + (-1)^n C."""
    return model.F0 + (-f / model.n + _sign(model.n) * model.C)


def level_of(model: ConstraintModel, f: float) -> float:
    """Height y = f/n - (-1)^n C at which F0 meets the line for this f."""
    return f / model.n - _sign(model.n) * model.C


def f_of_level(model: ConstraintModel, y: float) -> float:
    return model.n * (y + _sign(model.n) * model.C)


def feasible_interval(model: ConstraintModel, tol: float = DEFAULT_TOL) -> FeasibleInterval:
    """b' = min of local maxima of F0, a' = max of local minima; a, b scaled by n."""
    maxima, minima = local_extrema(model.F0, tol)
    b_prime = min((v for _, v in maxima), default=math.inf)
    a_prime = max((v for _, v in minima), default=-math.inf)
    return FeasibleInterval(
        a=f_of_level(model, a_prime) if math.isfinite(a_prime) else -math.inf,
        b=f_of_level(model, b_prime) if math.isfinite(b_prime) else math.inf,
        a_prime=a_prime,
        b_prime=b_prime,
    )


def spectrum_at(model: ConstraintModel, f: float, tol: float = DEFAULT_TOL,
                interval: FeasibleInterval | None = None) -> Spectrum:
    """Eigenvalues (with multiplicity) realizing power sums (c, f).

    A value of f within tol of a finite endpoint of [a, b] is taken as the
    endpoint itself, where the spectrum has doubled eigenvalues.
    """
    if interval is None:
        interval = feasible_interval(model, tol)
    for end in (interval.a, interval.b):
        if math.isfinite(end) and abs(f - end) <= tol:
            f = end
    roots = real_roots(char_poly_at(model, f), tol)
    if roots.total_multiplicity < model.n:
        raise NonRealRoots(
            f"f={f!r}: only {roots.total_multiplicity} of {model.n} roots are real "
            f"(feasible interval [{interval.a!r}, {interval.b!r}])"
        )
    return Spectrum(roots.roots)


def classify_point(model: ConstraintModel, interval: FeasibleInterval, f: float,
                   eps: float, tol: float = DEFAULT_TOL) -> tuple[RegionLabel, RegionLabel | None]:
    """Coarse label X/Y/Z and, inside Y, the refined X_eps/Y_eps/Z_eps label."""
    a, b = interval.a, interval.b
    if not interval.finite:
        raise ValueError("classify_point needs a finite interval")
    if not 0 < eps < (b - a) / 2:
        raise ValueError("eps must satisfy 0 < eps < (b - a)/2")
    if f < a - tol or f > b + tol:
        raise OutOfRange(f"f={f!r} outside [{a!r}, {b!r}]")
    if abs(f - a) <= ENDPOINT_RTOL * (1 + abs(a)):
        return RegionLabel.X, None
    if abs(f - b) <= ENDPOINT_RTOL * (1 + abs(b)):
        return RegionLabel.Z, None
    if f < a + eps:
        return RegionLabel.Y, RegionLabel.X_EPS
    if f > b - eps:
        return RegionLabel.Y, RegionLabel.Z_EPS
    return RegionLabel.Y, RegionLabel.Y_EPS


@dataclass(frozen=True)
class BoundaryPattern:
    end: str
    f: float
    spectrum: Spectrum
    doubled_pairs: tuple[tuple[int, int], ...]   # 0-based (i, i+1) into the expanded spectrum
    valid: bool
    problems: tuple[str, ...] = ()


def doubled_pairs(spectrum: Spectrum) -> list[tuple[int, int]]:
    """0-based index pairs (i, i+1) of eigenvalues with multiplicity 2."""
    out, pos = [], 0
    for _, m in spectrum.entries:
        if m == 2:
            out.append((pos, pos + 1))
        pos += m
    return out


def boundary_pattern(model: ConstraintModel, end: str, tol: float = DEFAULT_TOL,
                     interval: FeasibleInterval | None = None,
                     strict: bool = True) -> BoundaryPattern:
    """Spectrum at f = a ("lower") or f = b ("upper") with a parity check.

    At b every doubled eigenvalue must sit at a local maximum of F0 and
    start at a 1-based position i with i = n (mod 2); at a the doubled
    eigenvalues are local minima with i = n + 1 (mod 2).  No multiplicity
    may exceed 2.  With strict=True a failure raises PatternViolation.
    """
    if end not in ("lower", "upper"):
        raise ValueError("end must be 'lower' or 'upper'")
    if interval is None:
        interval = feasible_interval(model, tol)
    f = interval.b if end == "upper" else interval.a
    if not math.isfinite(f):
        raise ValueError(f"the {end} endpoint is infinite")
    spec = spectrum_at(model, f, tol, interval)

    problems = []
    if any(m > 2 for m in spec.multiplicities):
        problems.append(f"multiplicity above 2: {spec.multiplicities}")
    pairs = doubled_pairs(spec)
    want_parity = model.n % 2 if end == "upper" else (model.n + 1) % 2
    d2 = derivative(derivative(model.F0))
    for i, _ in pairs:
        beta = spec.expanded()[i]
        if (i + 1) % 2 != want_parity:
            problems.append(f"doubled eigenvalue at position {i + 1} has the wrong parity")
        curv = eval_poly(d2, beta)
        if (end == "upper" and curv > 0) or (end == "lower" and curv < 0):
            kind = "maximum" if end == "upper" else "minimum"
            problems.append(f"doubled eigenvalue {beta!r} is not a local {kind} of F0")
    result = BoundaryPattern(end=end, f=f, spectrum=spec, doubled_pairs=tuple(pairs),
                             valid=not problems, problems=tuple(problems))
    if problems and strict:
        raise PatternViolation("; ".join(problems))
    return result
