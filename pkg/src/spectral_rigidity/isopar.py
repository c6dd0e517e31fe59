"""Curvature of isoparametric hypersurfaces in the unit sphere.

With g distinct principal curvatures, they are cot(theta + (i-1) pi/g),
i = 1..g, with multiplicities alternating m1, m2, m1, ... (m1 = m2 when g
is odd).  Then n = g (m1 + m2) / 2, H = sum m_i k_i, S = sum m_i k_i^2
and the scalar curvature is R_M = n(n-1) + H^2 - S.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import NoSignChange, PoleAngle

ALLOWED_G = (1, 2, 3, 4, 6)
POLE_TOL = 1e-8


@dataclass(frozen=True)
class IsoparametricFamily:
    """g and the alternating multiplicities.  For g = 1 the value of m2 is
    ignored and taken equal to m1."""

    g: int
    m1: int
    m2: int

    def __post_init__(self):
        if self.g not in ALLOWED_G:
            raise ValueError(f"g must be one of {ALLOWED_G}, got {self.g}")
        if self.m1 < 1 or self.m2 < 1:
            raise ValueError("multiplicities must be positive")
        if self.g == 1:
            object.__setattr__(self, "m2", self.m1)
        if self.g % 2 == 1 and self.m1 != self.m2:
            raise ValueError("odd g requires m1 == m2")

    @property
    def n(self) -> int:
        return self.g * (self.m1 + self.m2) // 2

    @property
    def equal_multiplicities(self) -> bool:
        return self.m1 == self.m2

    def multiplicity(self, i: int) -> int:
        """Multiplicity of the i-th curvature, i = 1..g."""
        return self.m1 if i % 2 == 1 else self.m2


def admissible_families(n_max: int) -> list[IsoparametricFamily]:
    """Every (g, m1, m2) allowed here with n <= n_max."""
    out = []
    for g in ALLOWED_G:
        for m1 in range(1, n_max + 1):
            for m2 in range(1, n_max + 1):
                if g == 1 and m2 != m1:
                    continue
                if g % 2 == 1 and m1 != m2:
                    continue
                if g * (m1 + m2) // 2 <= n_max:
                    out.append(IsoparametricFamily(g, m1, m2))
    return out


def _distance_to_pole(angle: float) -> float:
    r = math.fmod(angle, math.pi)
    if r < 0:
        r += math.pi
    return min(r, math.pi - r)


def _cot(angle: float) -> float:
    if _distance_to_pole(angle) < POLE_TOL:
        raise PoleAngle(f"cot undefined near angle {angle!r}")
    return math.cos(angle) / math.sin(angle)


def principal_curvatures(fam: IsoparametricFamily, theta: float) -> list[tuple[float, int]]:
    """[(cot(theta + (i-1) pi/g), m_i) for i = 1..g]."""
    return [(_cot(theta + (i - 1) * math.pi / fam.g), fam.multiplicity(i))
            for i in range(1, fam.g + 1)]


@dataclass(frozen=True)
class CurvatureProfile:
    theta: float
    curvatures: tuple[tuple[float, int], ...]
    H: float
    S: float
    R_M: float


def curvature_profile(fam: IsoparametricFamily, theta: float) -> CurvatureProfile:
    curv = principal_curvatures(fam, theta)
    H = sum(m * k for k, m in curv)
    S = sum(m * k * k for k, m in curv)
    n = fam.n
    return CurvatureProfile(theta, tuple(curv), H, S, n * (n - 1) + H * H - S)


def scalar_curvature_closed_form(fam: IsoparametricFamily, theta: float) -> float:
    """n(n-g)(1 + cot^2 g theta) for equal multiplicities, otherwise
    (g^2/4)(m1(m1-1)(1+t^2) + m2(m2-1)(1+1/t^2)) with t = cot(g theta / 2)."""
    principal_curvatures(fam, theta)        # pole check on the curvatures themselves
    g, n = fam.g, fam.n
    if fam.equal_multiplicities:
        return n * (n - g) * (1.0 + _cot(g * theta) ** 2)
    t = _cot(g * theta / 2)
    if t == 0.0:
        raise PoleAngle("t = cot(g theta/2) vanishes")
    m1, m2 = fam.m1, fam.m2
    return g * g / 4 * (m1 * (m1 - 1) * (1 + t * t) + m2 * (m2 - 1) * (1 + 1 / (t * t)))


def is_equality_case(fam: IsoparametricFamily) -> bool:
    """R_M vanishes identically exactly when g = n (equivalently m1 = m2 = 1,
    or g = 1 with m1 = 1)."""
    return fam.g == fam.n


def mean_curvature(fam: IsoparametricFamily, theta: float) -> float:
    return sum(m * k for k, m in principal_curvatures(fam, theta))


def minimal_theta(fam: IsoparametricFamily, bracket: tuple[float, float] | None = None,
                  max_iter: int = 200) -> float:
    """A zero of H(theta) by bisection.

    The default bracket is (0, pi/g) shrunk away from its poles; there every
    curvature decreases from +inf to -inf, so H has exactly one zero.
    """
    if bracket is None:
        pad = 1e-6
        bracket = (pad, math.pi / fam.g - pad)
    lo, hi = bracket
    h_lo, h_hi = mean_curvature(fam, lo), mean_curvature(fam, hi)
    if h_lo == 0.0:
        return lo
    if h_hi == 0.0:
        return hi
    if (h_lo < 0) == (h_hi < 0):
        raise NoSignChange(f"H has the same sign at {lo!r} and {hi!r}")
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        h_mid = mean_curvature(fam, mid)
        if h_mid == 0.0:
            return mid
        if (h_mid < 0) == (h_lo < 0):
            lo, h_lo = mid, h_mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def cot_sum_identity(n: int, theta: float) -> tuple[tuple[float, float], tuple[float, float]]:
    """((sum cot, n cot n theta), (sum cot^2, n^2 cot^2 n theta + n^2 - n)),
    sums over theta + (k-1) pi/n, k = 1..n."""
    cots = [_cot(theta + (k - 1) * math.pi / n) for k in range(1, n + 1)]
    c = _cot(n * theta)
    return (sum(cots), n * c), (sum(x * x for x in cots), n * n * c * c + n * n - n)


def sin_product_identity(n: int, theta: float) -> tuple[float, float]:
    """(prod sin(theta + (k-1) pi/n), 2^{1-n} sin n theta) for 0 < theta < pi/n."""
    if not 0 < theta < math.pi / n:
        raise ValueError("theta must lie in (0, pi/n)")
    lhs = math.prod(math.sin(theta + (k - 1) * math.pi / n) for k in range(1, n + 1))
    return lhs, 2.0 ** (1 - n) * math.sin(n * theta)


def theta_grid(fam: IsoparametricFamily, points: int = 10_000, margin: float = 2e-3) -> np.ndarray:
    """`points` angles spread evenly over (0, pi) minus a margin around each pole.

    Every pole (of the curvatures and of both closed forms) sits at a
    multiple of pi/g, so the grid is laid out on the g intervals between
    them.  Near a pole n(n-1) + H^2 - S cancels terms of size cot^2, and
    the margin keeps that rounding error below 1e-10.
    """
    g = fam.g
    width = math.pi / g - 2 * margin
    per = [points // g + (1 if j < points % g else 0) for j in range(g)]
    chunks = []
    for j, count in enumerate(per):
        start = j * math.pi / g + margin
        chunks.append(start + (np.arange(count) + 0.5) * width / count)
    return np.concatenate(chunks)


def _check_poles(angles: np.ndarray) -> None:
    r = np.mod(angles, np.pi)
    if np.any(np.minimum(r, np.pi - r) < POLE_TOL):
        raise PoleAngle("grid contains an angle on a pole of cot")


def profile_arrays(fam: IsoparametricFamily, thetas) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Vectorised (H, S, R_M) over an array of angles."""
    thetas = np.asarray(thetas, dtype=float)
    H = np.zeros_like(thetas)
    S = np.zeros_like(thetas)
    for i in range(1, fam.g + 1):
        ang = thetas + (i - 1) * np.pi / fam.g
        _check_poles(ang)
        k = 1.0 / np.tan(ang)
        H += fam.multiplicity(i) * k
        S += fam.multiplicity(i) * k * k
    n = fam.n
    return H, S, n * (n - 1) + H * H - S


def closed_form_array(fam: IsoparametricFamily, thetas) -> np.ndarray:
    """Vectorised scalar_curvature_closed_form."""
    thetas = np.asarray(thetas, dtype=float)
    g, n = fam.g, fam.n
    if fam.equal_multiplicities:
        _check_poles(g * thetas)
        return n * (n - g) * (1.0 + 1.0 / np.tan(g * thetas) ** 2)
    _check_poles(g * thetas / 2)
    t = 1.0 / np.tan(g * thetas / 2)
    m1, m2 = fam.m1, fam.m2
    return g * g / 4 * (m1 * (m1 - 1) * (1 + t * t) + m2 * (m2 - 1) * (1 + 1 / (t * t)))
