import cmath
import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pasipcs import coherent_states as cs
from pasipcs import poschl_teller as pt

P = pt.PTParams()                       # lam = 1, rho = 2, nu = 3
PHASE = cs.ZChoice.phase_only()
GAMMA = cs.ZChoice.gamma_weighted()
PARAMS = [pt.PTParams(), pt.PTParams(2, 3, 0.5), pt.PTParams(3, 3, 2.0), pt.PTParams.from_rho(1.7, 1.3)]


def rel(a, b):
    return abs(a - b) / abs(b)


def test_worked_modulus():
    assert abs(cs.coefficient_closed(PHASE, P, 1, 1)) ** 2 == pytest.approx(7 / 12, rel=1e-13)
    assert abs(cs.coefficient_raw(PHASE, P, 1, 1)) ** 2 == pytest.approx(7 / 12, rel=1e-13)


@pytest.mark.parametrize("p", PARAMS)
@pytest.mark.parametrize("kind", [cs.PHASE, cs.GAMMA])
def test_raw_matches_closed(p, kind):
    choice = cs.ZChoice(kind, alpha=0.3, kappa=p.lam)
    worst = 0.0
    for m in range(7):
        for n in range(21):
            worst = max(worst, rel(cs.coefficient_raw(choice, p, m, n), cs.coefficient_closed(choice, p, m, n)))
    assert worst < 1e-10


def test_literal_weights_carry_energy_phase():
    choice = cs.ZChoice.phase_only(alpha=0.7)
    for m in range(4):
        for n in range(1, 8):
            prod = cs.z_product(choice, P, m, n)
            assert cmath.phase(prod / abs(prod)) == pytest.approx(
                cmath.phase(cmath.exp(-0.7j * pt.energy(P, n))), abs=1e-12)


def test_gamma_m0_is_beta_ratio():
    nu = P.nu
    for n in range(30):
        want = math.exp(math.lgamma(n + 1) + math.lgamma(nu + 1) - math.lgamma(n + nu + 1))
        assert abs(cs.coefficient_closed(GAMMA, P, 0, n)) ** 2 == pytest.approx(want, rel=1e-12)


def test_gamma_m0_normalization_is_binomial():
    for x in np.linspace(0.01, 0.95, 25):
        want = (1 - x) ** ((P.nu + 1) / 2)
        assert cs.normalization(GAMMA, P, 0, x) == pytest.approx(want, rel=1e-12)
        assert cs.normalization_closed(GAMMA, P, 0, x) == pytest.approx(want, rel=1e-10)
    assert cs.normalization(GAMMA, P, 0, 0.5) == pytest.approx(0.25, rel=1e-14)


def test_phase_m0_normalization_against_1f2():
    rho = P.rho
    for x in np.linspace(0.0, 30.0, 13):
        want = float(mpmath.hyp1f2(2 * rho, rho, rho + 0.5, x / 4)) ** -0.5
        assert cs.normalization(PHASE, P, 0, x) == pytest.approx(want, rel=1e-12)


@pytest.mark.parametrize("kind", [cs.PHASE, cs.GAMMA])
@pytest.mark.parametrize("form", ["pfq", "meijer"])
def test_normalization_forms_agree(kind, form):
    choice = cs.ZChoice(kind)
    xs = [0.05, 0.3, 0.7] if kind == cs.GAMMA else [0.1, 2.0, 15.0]
    for m in range(4):
        for x in xs:
            assert rel(cs.normalization_closed(choice, P, m, x, form=form),
                       cs.normalization(choice, P, m, x)) < 1e-9


def test_gamma_refuses_outside_disc():
    with pytest.raises(ValueError):
        cs.normalization(GAMMA, P, 0, 1.2)
    with pytest.raises(cs.TruncationError):
        cs.series_terms(GAMMA, P, 0, 0.995)


def test_kappa_must_match_lam():
    with pytest.raises(ValueError):
        cs.state_coefficients(cs.ZChoice.gamma_weighted(kappa=2.0), P, 0.3, 0)


def test_state_is_normalized_and_empty_below_m():
    for choice, z in ((PHASE, 1.5 + 0.5j), (GAMMA, 0.4 - 0.3j)):
        for m in range(4):
            st_ = cs.state_coefficients(choice, P, z, m)
            assert np.all(st_.coeffs[:m] == 0)
            assert st_.probabilities().sum() == pytest.approx(1.0, abs=1e-12)


def test_truncation_too_short():
    with pytest.raises(cs.TruncationError):
        cs.state_coefficients(PHASE, P, 3.0, 0, truncation=2)


@settings(max_examples=30, deadline=None)
@given(st.floats(0.0, 0.9), st.floats(-math.pi, math.pi), st.integers(0, 3))
def test_label_continuity(r, theta, m):
    # nearby labels give nearly identical states
    z = r * cmath.exp(1j * theta)
    ov = cs.overlap(GAMMA, P, z, m, z + 1e-6, m)
    assert abs(ov) == pytest.approx(1.0, abs=1e-9)


@settings(max_examples=20, deadline=None)
@given(st.complex_numbers(max_magnitude=0.85), st.complex_numbers(max_magnitude=0.85),
       st.integers(0, 3), st.integers(0, 3))
def test_overlap_gamma_closed(z1, z2, m1, m2):
    direct = cs.overlap(GAMMA, P, z1, m1, z2, m2)
    closed = cs.overlap_closed(GAMMA, P, z1, m1, z2, m2)
    assert abs(direct - closed) <= 1e-8 * max(abs(direct), 1e-6)


@settings(max_examples=20, deadline=None)
@given(st.complex_numbers(max_magnitude=4.0), st.complex_numbers(max_magnitude=4.0),
       st.integers(0, 3), st.integers(0, 3))
def test_overlap_phase_closed(z1, z2, m1, m2):
    direct = cs.overlap(PHASE, P, z1, m1, z2, m2)
    closed = cs.overlap_closed(PHASE, P, z1, m1, z2, m2)
    assert abs(direct - closed) <= 1e-8 * max(abs(direct), 1e-6)


def test_overlap_closed_rejects_phase_mixing():
    with pytest.raises(ValueError):
        cs.overlap_closed(cs.ZChoice.phase_only(0.5), P, 0.3, 0, 0.2, 1)
    # equal m is fine with a time phase
    choice = cs.ZChoice.phase_only(0.5)
    assert cs.overlap_closed(choice, P, 0.3, 2, 0.2j, 2) == pytest.approx(
        cs.overlap(choice, P, 0.3, 2, 0.2j, 2), abs=1e-12)


@pytest.mark.parametrize("choice,zs", [
    (PHASE, [0.5, 1 + 1j, -2.5j, 3.0, 0.1 - 0.2j]),
    (cs.ZChoice.phase_only(0.4), [0.5, 1 + 1j, -2.5j]),
    (GAMMA, [0.2, 0.5j, -0.6 + 0.3j, 0.8]),
    (cs.ZChoice.gamma_weighted(0.4), [0.3 - 0.3j, 0.7]),
])
def test_lowering_eigenvalue(choice, zs):
    for z in zs:
        assert cs.lowering_eigenvalue_check(choice, P, z) < 1e-8


def test_overlap_scale_bounds():
    for z1, z2, m1, m2 in ((0.3, -0.5j, 0, 2), (0.7, 0.7, 1, 1), (-0.6 + 0.2j, 0.5 + 0.5j, 3, 3)):
        scale = cs.overlap_scale(GAMMA, P, z1, m1, z2, m2)
        assert abs(cs.overlap(GAMMA, P, z1, m1, z2, m2)) <= scale + 1e-15
        assert scale <= 1 + 1e-12
