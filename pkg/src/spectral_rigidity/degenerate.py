"""Spectra with a repeated eigenvalue under fixed c_1..c_{n-1}.

For a multiplicity pattern (m_1, ..., m_g) with some m_k >= 2, let k be
the first such index.  The repeated eigenvalue mu_k is a root of F' = F0'
(F' does not depend on f), namely its k-th real root counted with
multiplicity, since F' vanishes once strictly between consecutive mu's and
nowhere else below mu_k.  Then F(mu_k) = 0 fixes d_n, hence F, hence all
of mu_1..mu_g.  So each pattern admits at most one solution.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from .errors import InsufficientCriticalRoots
from .poly import DEFAULT_TOL, critical_points, eval_poly, real_roots
from .spectrum import ConstraintModel, Spectrum


@dataclass(frozen=True)
class MultiplicityPattern:
    parts: tuple[int, ...]

    def __post_init__(self):
        if not self.parts or any(m < 1 for m in self.parts):
            raise ValueError("parts must be positive integers")
        if max(self.parts) < 2:
            raise ValueError("a degenerate pattern needs some part >= 2")

    @property
    def n(self) -> int:
        return sum(self.parts)

    @property
    def g(self) -> int:
        return len(self.parts)

    @property
    def first_repeated(self) -> int:
        """1-based index k of the first part >= 2."""
        return next(i for i, m in enumerate(self.parts, start=1) if m >= 2)

    def __str__(self) -> str:
        return "(" + ",".join(map(str, self.parts)) + ")"


@dataclass(frozen=True)
class DegenerateSolution:
    spectrum: Spectrum
    f_value: float
    pattern: MultiplicityPattern


def enumerate_patterns(n: int) -> list[MultiplicityPattern]:
    """All compositions of n with a part >= 2; there are 2^(n-1) - 1."""
    if n < 2:
        raise ValueError("n must be at least 2")
    out = []
    # a composition is a choice of cut points among the n-1 gaps
    for cuts in product((False, True), repeat=n - 1):
        parts, run = [], 1
        for cut in cuts:
            if cut:
                parts.append(run)
                run = 1
            else:
                run += 1
        parts.append(run)
        if max(parts) >= 2:
            out.append(MultiplicityPattern(tuple(parts)))
    return out


def pattern_outcome(model: ConstraintModel, pattern: MultiplicityPattern,
                    tol: float = DEFAULT_TOL) -> tuple[DegenerateSolution | None, str]:
    """Like solve_pattern, but also return a one-line reason."""
    n = model.n
    if pattern.n != n:
        raise ValueError(f"pattern {pattern} does not sum to n={n}")
    k = pattern.first_repeated
    try:
        mu_k = kth_critical_root(model, k, tol)
    except InsufficientCriticalRoots as exc:
        return None, str(exc)

    sign_n = -1 if n % 2 else 1
    d_n = -sign_n * eval_poly(model.F0, mu_k)          # (-1)^{n-1} F0(mu_k)
    F = model.F0 + sign_n * d_n
    roots = real_roots(F, tol)
    f_value = -sign_n * n * (d_n - model.C)             # (-1)^{n-1} n (d_n - C)
    if tuple(roots.multiplicities) != pattern.parts:
        return None, (f"construction at mu_{k}={mu_k:.17g} gives pattern "
                      f"({','.join(map(str, roots.multiplicities))})")
    return DegenerateSolution(Spectrum(roots.roots), f_value, pattern), "solution"


def kth_critical_root(model: ConstraintModel, k: int, tol: float = DEFAULT_TOL) -> float:
    """k-th smallest real root of F0' counted with multiplicity (k is 1-based)."""
    crit = critical_points(model.F0, tol).expanded()
    if len(crit) < k:
        raise InsufficientCriticalRoots(
            f"F0' has {len(crit)} real roots, need at least {k}"
        )
    return crit[k - 1]


def solve_pattern(model: ConstraintModel, pattern: MultiplicityPattern,
                  tol: float = DEFAULT_TOL) -> DegenerateSolution | None:
    """The unique spectrum with this multiplicity pattern, or None."""
    return pattern_outcome(model, pattern, tol)[0]


def all_degenerate_values(model: ConstraintModel, tol: float = DEFAULT_TOL,
                          dedup_tol: float = 1e-9) -> list[tuple[float, MultiplicityPattern]]:
    """(f, pattern) over every degenerate pattern that has a solution.

    Entries are sorted by f; solutions whose f agree within dedup_tol
    (relative to 1 + |f|) are reported once.
    """
    found = []
    for pat in enumerate_patterns(model.n):
        sol = solve_pattern(model, pat, tol)
        if sol is not None:
            found.append((sol.f_value, pat))
    found.sort(key=lambda t: (t[0], t[1].parts))
    out: list[tuple[float, MultiplicityPattern]] = []
    for f, pat in found:
        if out and abs(f - out[-1][0]) <= dedup_tol * (1 + abs(f)):
            continue
        out.append((f, pat))
    return out
