import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pasipcs import coherent_states as cs
from pasipcs import poschl_teller as pt
from pasipcs import thermal as th

P = pt.PTParams()
PHASE = cs.ZChoice.phase_only()
GAMMA = cs.ZChoice.gamma_weighted()


def brute(beta, m, levels=400):
    e = np.array([pt.energy(P, n) for n in range(levels)], dtype=float)
    w = np.exp(-beta * e)
    en = np.array([pt.energy(P, n + m) for n in range(levels)], dtype=float)
    z = w.sum()
    return z, (w * en).sum() / z, (w * en * en).sum() / z


def test_partition_example():
    cfg = th.ThermalConfig(1.0)
    # levels 0, 5 and 12 dominate
    assert th.partition_function(P, cfg) == pytest.approx(1 + math.exp(-5) + math.exp(-12) + math.exp(-21), rel=1e-9)
    assert th.partition_function(P, cfg) == pytest.approx(1.00674409197, rel=1e-10)


@settings(max_examples=25, deadline=None)
@given(st.floats(0.05, 20.0), st.integers(0, 4))
def test_report_against_brute_force(beta, m):
    rep = th.thermal_report(P, PHASE, th.ThermalConfig(beta, m))
    z, mean, mean2 = brute(beta, m)
    assert rep.partition == pytest.approx(z, rel=1e-12)
    assert rep.mean_N == pytest.approx(mean, rel=1e-12)
    assert rep.mean_N2 == pytest.approx(mean2, rel=1e-12)
    if rep.mean_N > 0:
        assert rep.mandel_q == pytest.approx(rep.variance / rep.mean_N - 1, rel=1e-12, abs=1e-12)


@pytest.mark.parametrize("m", [0, 2])
def test_mean_decreases_with_beta(m):
    means = [th.thermal_report(P, PHASE, th.ThermalConfig(b, m)).mean_N for b in (0.1, 0.3, 1.0, 3.0)]
    assert all(a > b for a, b in zip(means, means[1:]))


@pytest.mark.parametrize("m", [1, 2, 3])
def test_cold_limit(m):
    rep = th.thermal_report(P, PHASE, th.ThermalConfig(50.0, m))
    assert rep.mean_N == pytest.approx(pt.energy(P, m), rel=1e-8)
    assert rep.mandel_q == pytest.approx(-1.0, abs=1e-8)


def test_cold_limit_m0_degenerate():
    # <N> -> 0 at m = 0, so Q is a 0/0 quotient whose limit is E_1 - 1
    rep = th.thermal_report(P, PHASE, th.ThermalConfig(50.0, 0))
    assert rep.mean_N < 1e-100 or rep.mandel_q == pytest.approx(pt.energy(P, 1) - 1, rel=1e-6)


def test_config_validation():
    with pytest.raises(ValueError):
        th.ThermalConfig(0.0)
    with pytest.raises(ValueError):
        th.ThermalConfig(1.0, -1)
    with pytest.raises(cs.TruncationError):
        th.levels(P, th.ThermalConfig(0.01, 0, truncation=2))


@pytest.mark.parametrize("m", [0, 1, 2])
def test_husimi_trace_phase(m):
    assert th.husimi_trace(P, PHASE, th.ThermalConfig(1.0, m)) == pytest.approx(1.0, abs=1e-6)


def test_husimi_trace_gamma():
    assert th.husimi_trace(P, GAMMA, th.ThermalConfig(1.0, 1)) == pytest.approx(1.0, abs=1e-6)


def test_husimi_at_origin():
    cfg = th.ThermalConfig(1.0, 0)
    assert th.husimi(P, PHASE, cfg, 0.0) == pytest.approx(1 / th.partition_function(P, cfg), rel=1e-12)


@pytest.mark.parametrize("choice,m", [(PHASE, 0), (PHASE, 2), (GAMMA, 1)])
def test_p_function(choice, m):
    cfg = th.ThermalConfig(0.7, m)
    assert th.p_normalization(P, choice, cfg) == pytest.approx(1.0, abs=1e-6)
    q = math.exp(-0.7)
    diag = th.p_diagonal(P, choice, cfg, 5)
    np.testing.assert_allclose(diag, q ** np.arange(6) * (1 - q), rtol=1e-6)


def test_crosscheck_stable_under_doubling():
    cfg = th.ThermalConfig(1.0, 2)
    base = th.closed_form_crosscheck(P, PHASE, cfg)
    doubled = th.closed_form_crosscheck(P, PHASE, th.ThermalConfig(1.0, 2, 2 * th.levels(P, cfg)))
    for conv in ("minus_beta", "plus_beta"):
        for key, dev in base.deviation[conv].items():
            other = doubled.deviation[conv][key]
            if math.isfinite(dev):
                assert other == pytest.approx(dev, rel=1e-10, abs=1e-14)
