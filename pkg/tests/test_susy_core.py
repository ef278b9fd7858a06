import math
import warnings

import numpy as np
import pytest

from pasipcs import poschl_teller as pt
from pasipcs import susy_core as sc


def test_remainder_sequence_and_spectrum():
    chain = pt.pt_chain(pt.PTParams())
    assert list(sc.remainder_sequence(chain, 3)) == [5, 7, 9]
    assert list(sc.spectrum(chain, 4).energies) == [0, 5, 12, 21, 32]
    assert len(sc.spectrum(chain, 0)) == 1
    with pytest.raises(ValueError):
        sc.remainder_sequence(chain, 0)


def test_chain_parameters():
    chain = sc.ParameterChain(4.0, 2.0, lambda k: k)
    assert chain.param(1) == 4.0 and chain.param(3) == 8.0
    with pytest.raises(ValueError):
        chain.param(0)


def test_lowering_on_plane_wave():
    # sin(x) on (0, pi) with W = 0: A f = cos x
    f = sc.GridFunction.sample(np.sin, 0.0, math.pi, 256, (-1, -1))
    out = sc.apply_lowering(lambda x: 0.0 * x, f)
    assert np.max(np.abs(out.values - np.cos(f.x))) < 1e-12
    raised = sc.apply_raising(lambda x: np.ones_like(x), f)
    assert np.max(np.abs(raised.values - (-np.cos(f.x) + np.sin(f.x)))) < 1e-12


def test_even_parity_derivative():
    # sin^2 is even about both ends of (0, pi)
    f = sc.GridFunction.sample(lambda x: np.sin(x) ** 2, 0.0, math.pi, 256, (1, 1))
    d = sc.spectral_derivative(f)
    assert np.max(np.abs(d.values - np.sin(2 * f.x))) < 1e-12


def test_coarse_grid_warns():
    f = sc.GridFunction.sample(lambda x: np.exp(-200 * (x - 1.5) ** 2), 0.0, math.pi, 32)
    with pytest.warns(sc.GridResolutionWarning):
        sc.spectral_derivative(f)


def test_hamiltonian_on_box_state():
    f = sc.GridFunction.sample(lambda x: np.sin(3 * x), 0.0, math.pi, 128)
    out = sc.apply_hamiltonian(lambda x: 0.0 * x, f)
    assert np.max(np.abs(out.values - 9 * f.values)) < 1e-10


@pytest.fixture(scope="module")
def model():
    return pt.pt_model(pt.PTParams())


def test_eigenfunctions_are_normalized(model):
    for n in range(4):
        assert model.eigenfunction(n).norm() == pytest.approx(1.0, abs=1e-12)


def test_eigenfunctions_orthogonal(model):
    psi = [model.eigenfunction(n) for n in range(4)]
    for i in range(4):
        for j in range(i):
            assert abs(psi[i].inner(psi[j])) < 1e-10


def test_partner_report(model):
    report = sc.verify_partner_relations(model, 5)
    assert report.ok, report.status()
    assert report.riccati <= 1e-8 and report.annihilation <= 1e-8


def test_fd_cross_check(model):
    assert min(sc.fd_overlaps(model, 5)) >= 1 - 1e-6


def test_reference_energies(model):
    v = lambda x: model.potential(model.chain.a1, x)
    ref = sc.reference_energies(v, 0.0, math.pi, 1024, 4)
    assert np.allclose(ref, [0, 5, 12, 21], atol=1e-6)


def test_asymmetric_well():
    report = sc.verify_partner_relations(pt.pt_model(pt.PTParams(2, 3, 1)), 4)
    assert report.ok, report.status()


def test_non_integer_exponent_has_no_smooth_extension():
    # sin^2.5 has no smooth reflection; the resolution check reports it
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        sc.verify_partner_relations(pt.pt_model(pt.PTParams(2.5, 2.5, 1)), 1, n_points=512)
    assert any(issubclass(w.category, sc.GridResolutionWarning) for w in caught)
