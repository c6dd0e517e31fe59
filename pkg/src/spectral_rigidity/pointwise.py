"""Pointwise quantities on spectra with distinct eigenvalues.

Everything here is a rational function of the eigenvalues lambda_1 < ... <
lambda_n (indices are 0-based in code) and, where a gradient enters, of a
free vector f_grad = (f_1, ..., f_n).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import IndexInDoubledPair, RepeatedEigenvalue, SingularSystem
from .poly import DEFAULT_TOL, Poly, eval_poly
from .spectrum import (ConstraintModel, Spectrum, boundary_pattern, char_poly_at,
                       feasible_interval)
from .poly import real_roots

MIN_GAP = 1e-12


def _values(s: Spectrum | Sequence[float]) -> list[float]:
    if isinstance(s, Spectrum):
        if not s.is_simple:
            raise RepeatedEigenvalue(f"multiplicities {s.multiplicities}")
        vals = s.values
    else:
        vals = sorted(float(v) for v in s)
    if any(b - a < MIN_GAP for a, b in zip(vals, vals[1:])):
        raise RepeatedEigenvalue("eigenvalue gap below 1e-12")
    return vals


def _prod_except(vals: list[float], base: int, skip: Sequence[int]) -> float:
    """prod_{k not in skip} (lambda_k - lambda_base)."""
    out = 1.0
    for k, v in enumerate(vals):
        if k not in skip:
            out *= v - vals[base]
    return out


# -- eigenvalue gradients ---------------------------------------------------

def lambda_gradient_closed_form(s, f_grad: Sequence[float]) -> np.ndarray:
    """lambda_{ij} = (-1)^{n+1} (f_j/n) / prod_{k != i} (lambda_k - lambda_i)."""
    vals = _values(s)
    n = len(vals)
    f_grad = np.asarray(f_grad, dtype=float)
    sign = 1.0 if n % 2 else -1.0
    w = np.array([1.0 / _prod_except(vals, i, (i,)) for i in range(n)])
    return sign * np.outer(w, f_grad) / n


def vandermonde(vals: Sequence[float]) -> np.ndarray:
    """Row k holds lambda_1^k .. lambda_n^k, k = 0..n-1."""
    return np.vander(np.asarray(vals, dtype=float), increasing=True).T


def solve_vandermonde(vals: Sequence[float], rhs: np.ndarray) -> np.ndarray:
    """Solve D x = rhs, D[k, i] = vals[i]^k, by the Bjorck-Pereyra algorithm.

    O(n^2) per column and, unlike a general LU solve, its accuracy does not
    degrade with the (fast growing) condition number of D on these systems.
    rhs may be a vector or an (n, m) matrix of columns.
    """
    a = np.asarray(vals, dtype=float)
    x = np.array(rhs, dtype=float)
    n = len(a)
    for k in range(n - 1):
        for i in range(n - 1, k, -1):
            x[i] -= a[k] * x[i - 1]
    for k in range(n - 2, -1, -1):
        for i in range(k + 1, n):
            x[i] /= a[i] - a[i - k - 1]
        for i in range(k, n - 1):
            x[i] -= x[i + 1]
    return x


def lambda_gradient_linear_solve(s, f_grad: Sequence[float], tol: float = DEFAULT_TOL,
                                 method: str = "bjorck-pereyra") -> np.ndarray:
    """Solve D x = (0, ..., 0, f_j/n) for every column j.

    method="lu" uses a general dense solve instead; it loses several digits
    for n >= 7 on spectra inside [-2, 2].
    """
    vals = sorted(float(v) for v in (s.values if isinstance(s, Spectrum) else s))
    if isinstance(s, Spectrum) and not s.is_simple:
        raise SingularSystem(f"multiplicities {s.multiplicities}")
    if any(b - a < tol for a, b in zip(vals, vals[1:])):
        raise SingularSystem("eigenvalue gap below tol")
    n = len(vals)
    f_grad = np.asarray(f_grad, dtype=float)
    rhs = np.zeros((n, n))
    rhs[n - 1, :] = f_grad / n
    if method == "bjorck-pereyra":
        return solve_vandermonde(vals, rhs)
    if method == "lu":
        return np.linalg.solve(vandermonde(vals), rhs)
    raise ValueError(f"unknown method {method!r}")


def gradient_residual(s, lam_grad: np.ndarray, f_grad: Sequence[float],
                      scaled: bool = False) -> float:
    """max |D lam_grad - rhs| over all entries.

    With scaled=True the result is divided by max(1, max(|D| |lam_grad|)), the
    size of the terms that cancel in each row, so that well-conditioned and
    nearly-coincident spectra are judged on the same footing.
    """
    vals = _values(s)
    n = len(vals)
    rhs = np.zeros((n, n))
    rhs[n - 1, :] = np.asarray(f_grad, dtype=float) / n
    D = vandermonde(vals)
    res = float(np.max(np.abs(D @ lam_grad - rhs)))
    if scaled:
        res /= max(1.0, float(np.max(np.abs(D) @ np.abs(lam_grad))))
    return res


# -- L(r) -------------------------------------------------------------------

def L(s, r: int) -> float:
    """Sum over ordered p != q, both != r, of
    1 / [(l_r - l_p)(l_r - l_q) prod_{k!=p}(l_k - l_p) prod_{l!=q}(l_l - l_q)]."""
    vals = _values(s)
    n = len(vals)
    if n < 3:
        raise ValueError("L(r) needs n >= 3")
    prods = [_prod_except(vals, p, (p,)) for p in range(n)]
    total = 0.0
    for p in range(n):
        for q in range(n):
            if p == q or p == r or q == r:
                continue
            total += 1.0 / ((vals[r] - vals[p]) * (vals[r] - vals[q]) * prods[p] * prods[q])
    return total


def L_batch(lams: np.ndarray) -> np.ndarray:
    """L(r) for every row of an (N, n) array of distinct spectra; shape (N, n).

    Uses L(r) = S_r^2 - Q_r with t_p = w_p / (l_r - l_p), S_r = sum t_p,
    Q_r = sum t_p^2 (p != r), w_p = 1 / prod_{k != p} (l_k - l_p).
    """
    lams = np.asarray(lams, dtype=float)
    n = lams.shape[-1]
    diff = lams[..., :, None] - lams[..., None, :]        # [k, p] = l_k - l_p
    eye = np.eye(n, dtype=bool)
    w = 1.0 / np.prod(np.where(eye, 1.0, diff), axis=-2)
    # [r, p] = l_r - l_p, which is diff itself
    t = np.where(eye, 0.0, w[..., None, :] / np.where(eye, 1.0, diff))
    return t.sum(axis=-1) ** 2 - (t**2).sum(axis=-1)


# -- u_ij, u_i, densities -----------------------------------------------------

def _u_ij(vals: list[float], i: int, j: int) -> float:
    return 1.0 / ((vals[i] - vals[j]) ** 2 * _prod_except(vals, j, (i, j)))


def u_ij(s, i: int, j: int) -> float:
    """1 / [(l_i - l_j)^2 prod_{k != i, j} (l_k - l_j)]."""
    if i == j:
        raise ValueError("u_ij needs i != j")
    return _u_ij(_values(s), i, j)


def _prefactor(n: int) -> float:
    return 2.0 * math.factorial(n - 2) / n


def u_i(s, i: int) -> float:
    """-(2 (n-2)!/n) sum_{j != i} u_ij."""
    vals = _values(s)
    n = len(vals)
    return -_prefactor(n) * sum(_u_ij(vals, i, j) for j in range(n) if j != i)


def u_all(s) -> np.ndarray:
    vals = _values(s)
    n = len(vals)
    return np.array([-_prefactor(n) * sum(_u_ij(vals, i, j) for j in range(n) if j != i)
                     for i in range(n)])


def dpsi_density(s, R_M: float, f_grad: Sequence[float]) -> float:
    """(n-2)! R_M + ((n-3)!/n^2) sum_r (-L(r)) f_r^2."""
    vals = _values(s)
    n = len(vals)
    if n < 3:
        raise ValueError("dpsi_density needs n >= 3")
    f_grad = [float(x) for x in f_grad]
    acc = sum(-L(vals, r) * f_grad[r] ** 2 for r in range(n))
    return math.factorial(n - 2) * R_M + math.factorial(n - 3) / n**2 * acc


def dfpsi_density(s, f_grad: Sequence[float]) -> float:
    """sum_i u_i f_i^2."""
    f_grad = np.asarray(f_grad, dtype=float)
    return float(np.dot(u_all(s), f_grad**2))


def dfpsi_density_double_sum(s, f_grad: Sequence[float]) -> float:
    """-(2 (n-2)!/n) sum_{i != j} f_i^2 u_ij, accumulated pair by pair."""
    vals = _values(s)
    n = len(vals)
    acc = 0.0
    for i in range(n):
        for j in range(n):
            if i != j:
                acc += f_grad[i] ** 2 / ((vals[i] - vals[j]) ** 2 * _prod_except(vals, j, (i, j)))
    return -_prefactor(n) * acc


# -- behaviour at the ends of the feasible interval ------------------------------

def _spectrum_values_at(model: ConstraintModel, f: float, tol: float) -> list[float]:
    roots = real_roots(char_poly_at(model, f), tol)
    if roots.total_multiplicity != model.n or any(m != 1 for m in roots.multiplicities):
        raise RepeatedEigenvalue(f"spectrum at f={f!r} is not simple: {roots.roots}")
    return roots.values


def richardson(hs: Sequence[float], values: Sequence[float]) -> float:
    """Value at h = 0 of the interpolating polynomial through (h_k, v_k) (Neville)."""
    hs = list(hs)
    p = list(values)
    m = len(p)
    for level in range(1, m):
        for k in range(m - level):
            p[k] = (hs[k + level] * p[k] - hs[k] * p[k + 1]) / (hs[k + level] - hs[k])
    return p[0]


@dataclass
class IndexReport:
    index: int
    doubled: bool
    values: list[float]
    behaviour: str                 # "diverges" or "converges"
    extrapolated: float | None = None
    extrapolation_error: float | None = None
    closed_form: float | None = None
    bound: float = 0.0             # min (upper end) / max (lower end) over samples


@dataclass
class ScanReport:
    end: str
    endpoint: float
    eps: float
    f_samples: list[float]
    h_samples: list[float]
    boundary: list[float]
    doubled_pairs: list[tuple[int, int]]
    indices: list[IndexReport] = field(default_factory=list)
    A1_candidate: float | None = None
    empirical_bound: float | None = None

    def ok(self, threshold: float = 1e6, rtol: float = 1e-6) -> bool:
        """Doubled indices blow up past threshold in the expected direction;
        the others extrapolate to the closed-form limit within rtol."""
        direction = 1.0 if self.end == "upper" else -1.0
        for rep in self.indices:
            if rep.doubled:
                if rep.behaviour != "diverges" or direction * rep.values[-1] <= threshold:
                    return False
            else:
                if rep.behaviour != "converges":
                    return False
                scale = max(abs(rep.closed_form), 1e-300)
                if abs(rep.extrapolated - rep.closed_form) > rtol * scale:
                    return False
        return True


EXTRAPOLATION_POINTS = 8
H_FLOOR = 1e-10


def scan_schedule(eps: float, n_samples: int, h_floor: float = H_FLOOR) -> list[float]:
    """Offsets h_k = eps 2^{-k} from the endpoint, stopping before h_floor."""
    hs = []
    for k in range(n_samples):
        h = eps * 2.0**-k
        if h < h_floor:
            break
        hs.append(h)
    return hs


def assertion_scan(model: ConstraintModel, end: str, eps: float = 1e-2, n_samples: int = 50,
                   tol: float = DEFAULT_TOL) -> ScanReport:
    """Sample (-1)^n u_p as f approaches b from below (end="upper") or a
    from above (end="lower") on the schedule f = b - eps 2^{-k}.

    Indices in a doubled pair of the boundary spectrum are expected to blow
    up (to +inf at b, -inf at a); the rest converge, and their limit is
    estimated by Richardson extrapolation in h = |f - endpoint| over the
    first EXTRAPOLATION_POINTS samples.
    """
    interval = feasible_interval(model, tol)
    bp = boundary_pattern(model, end, tol, interval)
    endpoint = bp.f
    if not 0 < eps < (interval.b - interval.a) / 2:
        raise ValueError("eps must satisfy 0 < eps < (b - a)/2")
    n = model.n
    sign_n = -1.0 if n % 2 else 1.0
    direction = 1.0 if end == "upper" else -1.0

    hs = scan_schedule(eps, n_samples)
    fs = [endpoint - direction * h for h in hs]
    rows = np.array([sign_n * u_all(_spectrum_values_at(model, f, tol)) for f in fs])

    doubled = {i for pair in bp.doubled_pairs for i in pair}
    report = ScanReport(end=end, endpoint=endpoint, eps=eps, f_samples=fs, h_samples=hs,
                        boundary=bp.spectrum.expanded(), doubled_pairs=list(bp.doubled_pairs))
    k = min(EXTRAPOLATION_POINTS, len(hs))
    for p in range(n):
        col = rows[:, p].tolist()
        bound = min(col) if end == "upper" else max(col)
        if p in doubled:
            tail = [direction * v for v in col[-4:]]
            grows = all(b > a for a, b in zip(tail, tail[1:]))
            report.indices.append(IndexReport(p, True, col, "diverges" if grows else "irregular",
                                              bound=bound))
            continue
        est = richardson(hs[:k], col[:k])
        est_lower = richardson(hs[:k - 1], col[:k - 1]) if k > 2 else est
        closed = limit_A1(model, end, p, tol)
        report.indices.append(IndexReport(p, False, col, "converges", extrapolated=est,
                                          extrapolation_error=abs(est - est_lower),
                                          closed_form=closed, bound=bound))
    finite = [abs(r.closed_form) for r in report.indices if not r.doubled]
    if finite:
        report.A1_candidate = max(finite) + 1.0
    report.empirical_bound = (min if end == "upper" else max)(r.bound for r in report.indices)
    return report


def H_poly(beta: Sequence[float], p: int, pair: tuple[int, int]) -> Poly:
    """H(x) = (beta_p - x)^2 prod_{k not in {p, i, i+1}} (beta_k - x)."""
    i, i1 = pair
    H = Poly([beta[p], -1.0]) * Poly([beta[p], -1.0])
    for k, bk in enumerate(beta):
        if k not in (p, i, i1):
            H = H * Poly([bk, -1.0])
    return H


def pair_limit(beta: Sequence[float], p: int, pair: tuple[int, int]) -> float:
    """Limit of (-1)^{n+1} (u_{p,i} + u_{p,i+1}) as the pair merges at beta_i.

    Numerator (n-1) b^{n-2} + (-1)^{n+1} sum_k (n-1-k) abar_k b^{n-2-k}, with
    abar_k the coefficients of H below the leading one.
    """
    n = len(beta)
    i, i1 = pair
    b = beta[i]
    H = H_poly(beta, p, pair)
    # H = (-1)^{n-1} x^{n-1} + abar_1 x^{n-2} + ... + abar_{n-1}
    abar = list(reversed(H.coeffs))[1:]
    sign = 1.0 if (n + 1) % 2 == 0 else -1.0
    num = (n - 1) * b ** (n - 2)
    for k in range(1, n - 1):
        num += sign * (n - 1 - k) * abar[k - 1] * b ** (n - 2 - k)
    den = (beta[p] - b) ** 4
    for k, bk in enumerate(beta):
        if k not in (p, i, i1):
            den *= (bk - b) ** 2
    return num / den


def limit_A1(model: ConstraintModel, end: str, p: int, tol: float = DEFAULT_TOL) -> float:
    """Closed-form limit of (-1)^n u_p at the endpoint, p outside every doubled pair."""
    bp = boundary_pattern(model, end, tol)
    beta = bp.spectrum.expanded()
    n = model.n
    in_pair = {i for pair in bp.doubled_pairs for i in pair}
    if p in in_pair:
        raise IndexInDoubledPair(f"index {p} is in a doubled pair {bp.doubled_pairs}")
    if not 0 <= p < n:
        raise IndexError(p)
    sign = 1.0 if (n + 1) % 2 == 0 else -1.0
    total = sum(pair_limit(beta, p, pair) for pair in bp.doubled_pairs)
    for j in range(n):
        if j != p and j not in in_pair:
            total += sign * _u_ij(beta, p, j)
    return _prefactor(n) * total
