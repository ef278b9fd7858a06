import math

import numpy as np
import pytest

from pasipcs import coherent_states as cs
from pasipcs import measure
from pasipcs import poschl_teller as pt

P = pt.PTParams()
PHASE = cs.ZChoice.phase_only()
GAMMA = cs.ZChoice.gamma_weighted()


def test_omega0_example():
    spec = measure.WeightSpec(GAMMA, P, 0)
    assert measure.weight_function(spec, 0.5) == pytest.approx(3 / (math.pi * 0.25), rel=1e-10)


def test_omega0_closed_on_grid():
    spec = measure.WeightSpec(GAMMA, P, 0)
    for x in np.linspace(0.005, 0.95, 100):
        assert measure.weight_function(spec, x) == pytest.approx(measure.weight_closed_m0(spec, x), rel=1e-8)


def test_radial_density_m0_is_polynomial():
    # nu = 3: 𝒲_0(x) = 3 (1 - x)^2
    spec = measure.WeightSpec(GAMMA, P, 0)
    for x in (0.1, 0.4, 0.9):
        assert measure.radial_density(spec, x) == pytest.approx(3 * (1 - x) ** 2, rel=1e-9)
    assert measure.radial_density(spec, 1.3) == 0.0


def test_first_moment_analytic():
    spec = measure.WeightSpec(GAMMA, P, 0)
    assert measure.moment_integrals(spec, 1)[1] == pytest.approx(0.25, rel=1e-10)


@pytest.mark.parametrize("m", [0, 1, 2, 3])
def test_gamma_moments(m):
    rep = measure.identity_resolution_report(measure.WeightSpec(GAMMA, P, m), 10)
    assert rep.worst < 1e-6


@pytest.mark.parametrize("m", [0, 1, 2])
def test_phase_moments(m):
    rep = measure.identity_resolution_report(measure.WeightSpec(PHASE, P, m), 6)
    assert rep.worst < 1e-4


def test_phase_moments_other_params():
    p = pt.PTParams(2, 3, 0.5)
    rep = measure.identity_resolution_report(measure.WeightSpec(PHASE, p, 1), 4)
    assert rep.ok


def test_weight_positive_and_decaying():
    xs = np.linspace(0.1, 10, 25)
    curves = measure.family_curves(xs)
    for m, vals in curves.curves.items():
        assert curves.failures[m] == 0
        assert np.all(vals > 0)
        assert vals[-1] < vals[len(vals) // 2]


def test_domain_errors():
    with pytest.raises(ValueError):
        measure.weight_function(measure.WeightSpec(GAMMA, P, 1), 1.5)
    with pytest.raises(ValueError):
        measure.WeightSpec(GAMMA, P, -1)
    with pytest.raises(ValueError):
        measure.WeightSpec(cs.ZChoice.gamma_weighted(kappa=3.0), P, 0)
