"""Dense real univariate polynomials and real-root isolation.

Roots are isolated recursively: the real roots of P' split the real line
into intervals on which P is monotone, so each interval holds at most one
simple root (found by bisection), and a root sitting on a critical point
is a multiple root whose multiplicity is one more than that of the
critical point.
"""

from __future__ import annotations

import math
import sys
import warnings
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import DegenerateCritical, IllConditioned

DEFAULT_TOL = 1e-12
MAX_BISECTIONS = 200
EPS = sys.float_info.epsilon


@dataclass(frozen=True)
class Poly:
    """Polynomial with real coefficients in ascending order of degree.

    Trailing zero coefficients are dropped, so the zero polynomial has
    ``coeffs == ()`` and degree -1.
    """

    coeffs: tuple[float, ...]

    def __init__(self, coeffs: Iterable[float]):
        cs = [float(c) + 0.0 for c in coeffs]
        while cs and cs[-1] == 0.0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    @classmethod
    def from_roots(cls, roots: Iterable[float]) -> "Poly":
        """Monic polynomial prod (x - r)."""
        p = cls([1.0])
        for r in roots:
            p = p * cls([-r, 1.0])
        return p

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def leading(self) -> float:
        return self.coeffs[-1] if self.coeffs else 0.0

    def __call__(self, x: float) -> float:
        return eval_poly(self, x)

    def derivative(self) -> "Poly":
        return derivative(self)

    def __add__(self, other: "Poly | float") -> "Poly":
        other = _as_poly(other)
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (0.0,) * (n - len(self.coeffs))
        b = other.coeffs + (0.0,) * (n - len(other.coeffs))
        return Poly(x + y for x, y in zip(a, b))

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly(-c for c in self.coeffs)

    def __sub__(self, other: "Poly | float") -> "Poly":
        return self + (-_as_poly(other))

    def __rsub__(self, other: float) -> "Poly":
        return _as_poly(other) - self

    def __mul__(self, other: "Poly | float") -> "Poly":
        other = _as_poly(other)
        if not self.coeffs or not other.coeffs:
            return Poly(())
        out = [0.0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return Poly(out)

    __rmul__ = __mul__

    def __repr__(self) -> str:
        return f"Poly({list(self.coeffs)})"


def _as_poly(p) -> Poly:
    if isinstance(p, Poly):
        return p
    if isinstance(p, (int, float)):
        return Poly([p])
    return Poly(p)


@dataclass(frozen=True)
class RootList:
    """Sorted distinct real roots with multiplicities."""

    roots: tuple[tuple[float, int], ...] = ()

    def __iter__(self):
        return iter(self.roots)

    def __len__(self) -> int:
        return len(self.roots)

    @property
    def values(self) -> list[float]:
        return [v for v, _ in self.roots]

    @property
    def multiplicities(self) -> list[int]:
        return [m for _, m in self.roots]

    @property
    def total_multiplicity(self) -> int:
        return sum(m for _, m in self.roots)

    def expanded(self) -> list[float]:
        """Roots repeated according to multiplicity."""
        return [v for v, m in self.roots for _ in range(m)]


def eval_poly(P: Poly, x: float) -> float:
    """Horner evaluation."""
    acc = 0.0
    for c in reversed(P.coeffs):
        acc = acc * x + c
    return acc


_SPLITTER = 134217729.0  # 2**27 + 1


def eval_compensated(P: Poly, x: float) -> float:
    """Compensated Horner: as accurate as Horner run in doubled precision."""
    cs = P.coeffs
    if not cs:
        return 0.0
    # TwoProduct (Dekker split) and TwoSum inlined; this is the hot loop
    t = _SPLITTER * x
    xh = t - (t - x)
    xl = x - xh
    s = cs[-1]
    err = 0.0
    for i in range(len(cs) - 2, -1, -1):
        a = cs[i]
        p = s * x
        t = _SPLITTER * s
        sh = t - (t - s)
        sl = s - sh
        pe = sl * xl - (((p - sh * xh) - sl * xh) - sh * xl)
        s = p + a
        z = s - p
        se = (p - (s - z)) + (a - z)
        err = err * x + (pe + se)
    return s + err


def _sign_eval(P: Poly, x: float) -> float:
    """P(x) with a trustworthy sign: plain Horner when its running error
    bound clears zero, compensated Horner otherwise."""
    ax = abs(x)
    acc = 0.0
    mag = 0.0
    for c in reversed(P.coeffs):
        acc = acc * x + c
        mag = mag * ax + abs(c)
    if abs(acc) > 4 * len(P.coeffs) * EPS * mag:
        return acc
    return eval_compensated(P, x)


def derivative(P: Poly) -> Poly:
    return Poly(k * c for k, c in enumerate(P.coeffs) if k > 0)


def nth_derivative(P: Poly, j: int) -> Poly:
    for _ in range(j):
        P = derivative(P)
    return P


def cauchy_bound(P: Poly) -> float:
    """1 + max_{k<deg} |a_k| / |a_deg|; every real root lies strictly inside."""
    lead = abs(P.leading)
    return 1.0 + max((abs(c) / lead for c in P.coeffs[:-1]), default=0.0)


def residual_scale(P: Poly, x: float) -> float:
    """sum |a_k| * max(1, |x|)^deg, the scale used for residual bounds."""
    return sum(abs(c) for c in P.coeffs) * max(1.0, abs(x)) ** P.degree


def _abs_horner(P: Poly, x: float) -> float:
    ax = abs(x)
    acc = 0.0
    for c in reversed(P.coeffs):
        acc = acc * ax + abs(c)
    return acc


def _zero_threshold(P: Poly, x: float, tol: float) -> float:
    # Horner rounding bound (with a safety factor) plus the change of P
    # across a critical point located only to within tol.
    d2 = abs(eval_poly(nth_derivative(P, 2), x)) if P.degree >= 2 else 0.0
    return 64 * max(P.degree, 1) * EPS * _abs_horner(P, x) + d2 * tol * tol


def _vanishes_to_order(P: Poly, x: float, m: int, tol: float) -> bool:
    """True when P and its first m-1 derivatives vanish at x within
    j! * scale * sqrt(tol)."""
    scale = residual_scale(P, x)
    root_tol = math.sqrt(tol)
    Q = P
    for j in range(m):
        if abs(eval_poly(Q, x)) >= math.factorial(j) * scale * root_tol:
            return False
        Q = derivative(Q)
    return True


def _bisect(P: Poly, lo: float, hi: float) -> float:
    # Runs to float resolution; the result is then well within any tol.
    neg_lo = _sign_eval(P, lo) < 0
    for _ in range(MAX_BISECTIONS):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        v = _sign_eval(P, mid)
        if v == 0.0:
            return mid
        if (v < 0) == neg_lo:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _merge(P: Poly, found: list[tuple[float, int]], tol: float) -> list[tuple[float, int]]:
    found = sorted(found)
    merged: list[list[tuple[float, int]]] = []
    for item in found:
        if merged and item[0] - merged[-1][-1][0] < 10 * tol:
            merged[-1].append(item)
        else:
            merged.append([item])
    out = []
    for cluster in merged:
        if len(cluster) == 1:
            out.append(cluster[0])
            continue
        m = sum(k for _, k in cluster)
        v = sum(x * k for x, k in cluster) / m
        if not _vanishes_to_order(P, v, m, tol):
            raise IllConditioned(
                f"roots {[x for x, _ in cluster]} are within {10 * tol:g} but P does "
                f"not vanish to order {m} there; tighten tol"
            )
        out.append((v, m))
    return [(x + 0.0, m) for x, m in out]


def real_roots(P: Poly, tol: float = DEFAULT_TOL) -> RootList:
    """All real roots of P with multiplicities, each located within tol."""
    P = _as_poly(P)
    if P.degree < 1:
        raise ValueError("real_roots needs a polynomial of degree >= 1")
    if tol <= 0:
        raise ValueError("tol must be positive")
    if P.degree == 1:
        a0, a1 = P.coeffs
        return RootList(((-a0 / a1, 1),))

    crit = real_roots(derivative(P), tol)
    bound = cauchy_bound(P)
    points = [(-bound, 0)] + [(x, m) for x, m in crit if -bound < x < bound] + [(bound, 0)]

    found: list[tuple[float, int]] = []
    samples = []
    for x, m in points:
        v = eval_compensated(P, x)
        on_root = m > 0 and abs(v) <= _zero_threshold(P, x, tol)
        if on_root:
            found.append((x, m + 1))
        samples.append((x, v, on_root))

    for (x0, v0, z0), (x1, v1, z1) in zip(samples, samples[1:]):
        if z0 or z1:
            continue
        if (v0 < 0) != (v1 < 0):
            found.append((_bisect(P, x0, x1), 1))

    roots = _merge(P, found, tol)
    if sum(m for _, m in roots) > P.degree:
        raise IllConditioned("located multiplicities exceed the degree")
    return RootList(tuple(roots))


def critical_points(P: Poly, tol: float = DEFAULT_TOL) -> RootList:
    """Real roots of P', ascending."""
    P = _as_poly(P)
    if P.degree < 2:
        raise ValueError("critical_points needs degree >= 2")
    return real_roots(derivative(P), tol)


def local_extrema(P: Poly, tol: float = DEFAULT_TOL):
    """Return (maxima, minima) as lists of (x, P(x)) pairs.

    Inflection critical points are skipped with a DegenerateCritical warning.
    """
    P = _as_poly(P)
    if P.degree < 2:
        raise ValueError("local_extrema needs degree >= 2")
    if P.leading <= 0:
        raise ValueError("leading coefficient must be positive")
    dP = derivative(P)
    d2P = derivative(dP)
    crit = critical_points(P, tol).roots
    xs = [x for x, _ in crit]

    maxima, minima = [], []
    for idx, (x, m) in enumerate(crit):
        kind = None
        if m == 1:
            s2 = eval_poly(d2P, x)
            if abs(s2) > 2 * residual_scale(P, x) * math.sqrt(tol):
                kind = "max" if s2 < 0 else "min"
        if kind is None:
            left = 0.5 * (xs[idx - 1] + x) if idx > 0 else x - 1.0
            right = 0.5 * (x + xs[idx + 1]) if idx + 1 < len(xs) else x + 1.0
            sl, sr = eval_poly(dP, left), eval_poly(dP, right)
            if sl > 0 > sr:
                kind = "max"
            elif sl < 0 < sr:
                kind = "min"
        if kind == "max":
            maxima.append((x, eval_poly(P, x)))
        elif kind == "min":
            minima.append((x, eval_poly(P, x)))
        else:
            warnings.warn(f"critical point {x!r} is an inflection", DegenerateCritical)
    return maxima, minima


def local_extreme_values(P: Poly, tol: float = DEFAULT_TOL) -> tuple[list[float], list[float]]:
    """Values of P at its local maxima and at its local minima."""
    maxima, minima = local_extrema(P, tol)
    return [v for _, v in maxima], [v for _, v in minima]


def multiply_out(factors: Sequence[Poly]) -> Poly:
    out = Poly([1.0])
    for f in factors:
        out = out * f
    return out
