import math

import numpy as np
import pytest

from qcontinuity.afw import omega_star_residual, tau_states
from qcontinuity.errors import CutoffTooSmall, DimensionTooLarge, IndexOutOfRange, InvalidState
from qcontinuity.hamiltonians import g, h2
from qcontinuity.io import load_mixture, mixture_to_dict
from qcontinuity.linalg import partial_trace, von_neumann_entropy
from qcontinuity.oscillator import (
    CoherentMixture,
    assemble_classical_state,
    classical_mi_bound,
    classical_mi_value,
    coherent_vector,
    leakage,
    mean_photon,
    mixture_tv,
    number_expectation,
    shared_ensembles,
)


def test_vacuum():
    v = coherent_vector(0, 5)
    assert np.array_equal(v, [1, 0, 0, 0, 0])


def test_overlap_formula():
    for z, w in [(0.5, -0.3j), (1 + 1j, 0.2), (2.0, 2.5)]:
        a, b = coherent_vector(z, 60), coherent_vector(w, 60)
        assert abs(np.vdot(a, b)) ** 2 == pytest.approx(math.exp(-abs(z - w) ** 2), abs=1e-8)


def test_mean_photon_single_atom():
    z = 1.3 - 0.4j
    mix = CoherentMixture.from_atoms([((z,), 1.0)], cutoff=40)
    rho = assemble_classical_state(mix)
    assert mean_photon(mix, 1) == pytest.approx(abs(z) ** 2)
    assert number_expectation(rho, 40, 1, 1) == pytest.approx(abs(z) ** 2, abs=1e-8)


def test_cutoff_errors():
    assert leakage(3.0, 20) > 1e-10
    with pytest.raises(CutoffTooSmall):
        coherent_vector(3.0, 20)
    with pytest.raises(CutoffTooSmall):
        CoherentMixture.from_atoms([((3.0,), 1.0)], cutoff=20)
    with pytest.raises(DimensionTooLarge):
        assemble_classical_state(CoherentMixture.from_atoms([((0, 0, 0), 1.0)], cutoff=12))
    mix = CoherentMixture.from_atoms([((0, 0), 1.0)], cutoff=8)
    with pytest.raises(IndexOutOfRange):
        mean_photon(mix, 3)
    with pytest.raises(InvalidState):
        CoherentMixture.from_atoms([((0,), 0.4), ((1,), 0.4)])


def test_two_atom_eigenvalues():
    mix = CoherentMixture.from_atoms([((0,), 0.5), ((4,), 0.5)])
    vals = assemble_classical_state(mix).eigenvalues
    ov = math.exp(-8.0)
    assert vals[:2] == pytest.approx([0.5 * (1 + ov), 0.5 * (1 - ov)], abs=1e-10)
    assert vals[:2] == pytest.approx([0.5, 0.5], abs=1e-3)


def test_product_mixture_has_no_correlation():
    atoms = [((a, b), wa * wb) for a, wa in [(0.3, 0.6), (-0.5j, 0.4)] for b, wb in [(0.7, 0.5), (0.1 + 0.2j, 0.5)]]
    mix = CoherentMixture.from_atoms(atoms, cutoff=14)
    assert classical_mi_value(mix) <= 1e-8


def test_correlated_far_atoms():
    mix = CoherentMixture.from_atoms([((0, 0), 0.5), ((2.5, 2.5), 0.5)], cutoff=32)
    mi = classical_mi_value(mix)
    # two equal-weight pure atoms: S = h2((1 + |overlap|)/2) on each side
    local = h2(0.5 * (1 + math.exp(-6.25 / 2)))
    joint = h2(0.5 * (1 + math.exp(-12.5 / 2)))
    assert mi == pytest.approx(2 * local - joint, abs=1e-8)
    assert mi == pytest.approx(math.log(2), abs=5e-3)
    rho = assemble_classical_state(mix)
    ra = partial_trace(rho, [32, 32], [0])
    rb = partial_trace(rho, [32, 32], [1])
    assert mi <= min(von_neumann_entropy(ra), von_neumann_entropy(rb)) + 1e-10


def test_marginal_matches_single_mode_assembly():
    mix = CoherentMixture.from_atoms([((0.4, 1j), 0.3), ((-0.2, 0.5), 0.7)], cutoff=16)
    rho = assemble_classical_state(mix)
    for k in (1, 2):
        single = assemble_classical_state(mix.marginal(k))
        assert np.max(np.abs(partial_trace(rho, [16, 16], [k - 1]) - single.matrix)) <= 1e-8


def test_dominations_on_shared_map():
    rng = np.random.default_rng(50)
    pool = [tuple(rng.uniform(-1, 1, 2) + 1j * rng.uniform(-1, 1, 2)) for _ in range(6)]
    mu = CoherentMixture(2, pool[:4], rng.dirichlet(np.ones(4)), cutoff=16)
    nu = CoherentMixture(2, pool[2:], rng.dirichlet(np.ones(4)), cutoff=16)
    a, b = shared_ensembles(mu, nu)
    tp, tm, eps = tau_states(a, b)
    assert eps == pytest.approx(mixture_tv(mu, nu))
    assert omega_star_residual(a.state(), b.state(), tp, tm, eps) <= 1e-8


def test_mi_c_example():
    assert classical_mi_bound(1.0, 0.2) == pytest.approx(0.2 * g(5) + 2 * g(0.2))


def test_mi_c_holds_for_sampled_pair():
    mu = CoherentMixture.from_atoms([((0.5, 0.5), 0.5), ((-0.5, -0.5), 0.5)], cutoff=16)
    nu = CoherentMixture.from_atoms([((0.5, 0.5), 0.4), ((-0.5, -0.5), 0.4), ((0.5, -0.5), 0.2)], cutoff=16)
    eps = mixture_tv(mu, nu)
    E = max(mean_photon(m, k) for m in (mu, nu) for k in (1, 2))
    diff = abs(classical_mi_value(mu) - classical_mi_value(nu))
    assert diff <= classical_mi_bound(E, eps)


def test_mixture_round_trip():
    mix = CoherentMixture.from_atoms([((0.4, 1j), 0.3), ((-0.2, 0.5), 0.7)], cutoff=16)
    back = load_mixture(mixture_to_dict(mix))
    assert back.atoms == mix.atoms and np.allclose(back.weights, mix.weights) and back.cutoff == 16
