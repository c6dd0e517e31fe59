import math

import numpy as np
import pytest

from spectral_rigidity.degenerate import (MultiplicityPattern, all_degenerate_values,
                                          enumerate_patterns, kth_critical_root,
                                          pattern_outcome, solve_pattern)
from spectral_rigidity.errors import InsufficientCriticalRoots
from spectral_rigidity.sampling import distinct_spectra, rng
from spectral_rigidity.spectrum import boundary_pattern, build_model, feasible_interval
from spectral_rigidity.symfunc import power_sums_of

from oracles import degenerate_newton_oracle

R2 = 1 / math.sqrt(2)
R3 = 1 / math.sqrt(3)


def P(*parts):
    return MultiplicityPattern(parts)


def test_pattern_type():
    p = P(1, 2, 1)
    assert p.n == 4 and p.g == 3 and p.first_repeated == 2 and str(p) == "(1,2,1)"
    with pytest.raises(ValueError):
        P(1, 1)
    with pytest.raises(ValueError):
        P(0, 2)


def test_enumerate_examples():
    assert [pt.parts for pt in enumerate_patterns(3)] == [(3,), (2, 1), (1, 2)]
    assert len(enumerate_patterns(4)) == 7
    assert [pt.parts for pt in enumerate_patterns(2)] == [(2,)]
    with pytest.raises(ValueError):
        enumerate_patterns(1)


@pytest.mark.parametrize("n", range(2, 9))
def test_enumerate_counts_and_uniqueness(n):
    pats = enumerate_patterns(n)
    assert len(pats) == 2 ** (n - 1) - 1
    assert len({pt.parts for pt in pats}) == len(pats)
    assert all(pt.n == n and max(pt.parts) >= 2 for pt in pats)


def test_solve_pattern_examples(model3, model4):
    sol = solve_pattern(model4, P(2, 2))
    assert sol.f_value == pytest.approx(1.0)
    assert sol.spectrum.values == pytest.approx([-R2, R2])
    sol = solve_pattern(model4, P(1, 2, 1))
    assert sol.f_value == pytest.approx(2.0)
    assert sol.spectrum.values == pytest.approx([-1, 0, 1], abs=1e-12)
    assert solve_pattern(model4, P(2, 1, 1)) is None
    assert solve_pattern(model3, P(3)) is None


def test_rejection_reasons(model4):
    sol, reason = pattern_outcome(model4, P(2, 1, 1))
    assert sol is None and "(2,2)" in reason
    with pytest.raises(ValueError):
        pattern_outcome(model4, P(2, 1))


def test_insufficient_critical_roots():
    # F0 = x^3 + x (c chosen so d = (0, 1)): F0' = 3x^2 + 1 has no real roots
    m = build_model(3, (0.0, -2.0))
    with pytest.raises(InsufficientCriticalRoots):
        kth_critical_root(m, 1)
    sol, reason = pattern_outcome(m, P(2, 1))
    assert sol is None and "need at least 1" in reason


@pytest.mark.parametrize("n, c, want", [
    (4, (0, 2, 0), [(1.0, (2, 2)), (2.0, (1, 2, 1))]),
    (3, (0, 2), [(-2 * R3, (1, 2)), (2 * R3, (2, 1))]),
    (2, (0,), [(0.0, (2,))]),
])
def test_all_degenerate_values_examples(n, c, want):
    got = all_degenerate_values(build_model(n, c))
    assert [pt.parts for _, pt in got] == [parts for _, parts in want]
    assert [f for f, _ in got] == pytest.approx([f for f, _ in want], abs=1e-12)


def _models():
    out = [build_model(4, (0, 2, 0)), build_model(3, (0, 2)), build_model(2, (0,)),
           build_model(4, (0, 0, 0)), build_model(3, (0, -2))]
    gen = rng(11)
    for n in (3, 4):
        for lam in distinct_spectra(gen, n, 4):
            out.append(build_model(n, [float(np.sum(lam**k)) for k in range(1, n)]))
    return out


@pytest.mark.parametrize("model", _models(), ids=lambda m: f"n{m.n}-" + ",".join(f"{x:.3g}" for x in m.c))
def test_solutions_match_newton_oracle(model):
    for pat in enumerate_patterns(model.n):
        sol = solve_pattern(model, pat)
        oracle = degenerate_newton_oracle(pat.parts, model.c)
        assert len(oracle) <= 1                         # uniqueness per pattern
        assert (sol is not None) == bool(oracle), pat
        if sol is not None:
            assert sol.spectrum.values == pytest.approx(list(oracle[0]), abs=1e-4)
            assert sol.spectrum.multiplicities == pat.parts
            p = power_sums_of(sol.spectrum.entries, model.n)
            assert p[:-1] == pytest.approx(model.c, abs=1e-8)
            assert p[-1] == pytest.approx(sol.f_value, abs=1e-8)


@pytest.mark.parametrize("model", _models()[:2] + _models()[5:],
                         ids=lambda m: f"n{m.n}-" + ",".join(f"{x:.3g}" for x in m.c))
def test_degenerate_values_sit_at_interval_ends(model):
    iv = feasible_interval(model)
    ends = {"lower": iv.a, "upper": iv.b}
    for f, pat in all_degenerate_values(model):
        assert max(pat.parts) == 2
        hit = [e for e, v in ends.items() if abs(f - v) < 1e-8]
        assert hit, (f, iv)
        assert boundary_pattern(model, hit[0]).spectrum.multiplicities == pat.parts
