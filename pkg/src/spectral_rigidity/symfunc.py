"""Newton's identities between power sums and elementary symmetric functions.

Power sums p_1..p_m and elementary symmetric values e_1..e_m are plain
tuples of floats.  e_k is stored with a positive sign (the coefficient of
x^{n-k} in prod(x - lambda_i) is (-1)^k e_k); signs only enter when a
polynomial is assembled.
"""

from __future__ import annotations

from typing import Iterable, Sequence


def power_sums_to_elementary(p: Sequence[float]) -> tuple[float, ...]:
    """Return e_1..e_m from p_1..p_m.

    k e_k = sum_{i=1..k} (-1)^{i-1} e_{k-i} p_i, with e_0 = 1.  Only the
    first m power sums are needed for the first m elementary values, so a
    partial list is fine.
    """
    p = [float(v) for v in p]
    e = [1.0]
    for k in range(1, len(p) + 1):
        acc = 0.0
        for i in range(1, k + 1):
            term = e[k - i] * p[i - 1]
            acc += term if i % 2 == 1 else -term
        e.append(acc / k)
    return tuple(e[1:])


def elementary_to_power_sums(e: Sequence[float]) -> tuple[float, ...]:
    """Inverse of power_sums_to_elementary.

    p_k = (-1)^{k-1} k e_k + sum_{i=1..k-1} (-1)^{i-1} e_i p_{k-i}.
    """
    e = [float(v) for v in e]
    p: list[float] = []
    for k in range(1, len(e) + 1):
        acc = k * e[k - 1] if k % 2 == 1 else -k * e[k - 1]
        for i in range(1, k):
            term = e[i - 1] * p[k - i - 1]
            acc += term if i % 2 == 1 else -term
        p.append(acc)
    return tuple(p)


def power_sums_of(spectrum: Iterable[tuple[float, int]], k_max: int) -> tuple[float, ...]:
    """p_k = sum_i m_i mu_i^k for k = 1..k_max over (value, multiplicity) pairs."""
    if k_max < 1:
        raise ValueError("k_max must be positive")
    entries = list(spectrum)
    out = []
    for k in range(1, k_max + 1):
        out.append(sum(m * mu**k for mu, m in entries))
    return tuple(out)


def dn_offset(c: Sequence[float]) -> float:
    """The constant C with d_n = ((-1)^{n-1}/n) f + C, where n = len(c) + 1.

    C = (1/n) sum_{i=1..n-1} (-1)^{i-1} d_{n-i} c_i.
    """
    n = len(c) + 1
    d = (1.0,) + power_sums_to_elementary(c)
    acc = 0.0
    for i in range(1, n):
        term = d[n - i] * c[i - 1]
        acc += term if i % 2 == 1 else -term
    return acc / n
