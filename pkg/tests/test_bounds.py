import math

import numpy as np
import pytest

from qcontinuity.bounds import (
    audenaert_bound,
    bdj_bound,
    e_h_eps,
    e_star,
    entropy_energy_bound,
    extremal_pair,
    hamiltonian_expectation,
    mixed_bound,
    rank_entropy_bound,
    refined_entropy_bound,
    two_sided_energy_bound,
    winter_energy_bound,
)
from qcontinuity.afw import LAAClassParams, afw_rank_bound
from qcontinuity.errors import BasisMismatch, ConstraintViolated, OutOfRange
from qcontinuity.hamiltonians import F, SpectrumSequence, g, gibbs_state, h2
from qcontinuity.linalg import DensityOperator, trace_distance

from oracles import random_density, shannon

NUMBER = SpectrumSequence.arithmetic(1.0)
QUADRATIC = SpectrumSequence.generator(lambda k: np.asarray(k, float) ** 2)


def geometric_mixture_gap(E, eps, n=4000):
    """Entropy of eps * thermal(E/eps) + (1 - eps)|0><0| summed term by term."""
    x = E / eps
    r = x / (x + 1)
    p = eps * (1 - r) * r ** np.arange(n)
    p[0] += 1 - eps
    return shannon(p)


def test_audenaert_examples():
    assert audenaert_bound(4, 0.0) == 0.0
    assert audenaert_bound(2, 0.5) == pytest.approx(math.log(2))
    assert audenaert_bound(2, 0.9) == pytest.approx(math.log(2))
    assert audenaert_bound(5, 0.3) == pytest.approx(0.3 * math.log(4) + h2(0.3))
    with pytest.raises(OutOfRange):
        audenaert_bound(3, 1.5)


def test_winter_examples():
    assert winter_energy_bound(NUMBER, 1.0, 0.1) == pytest.approx(0.2 * g(10) + h2(0.1), abs=1e-12)
    assert winter_energy_bound(NUMBER, 1.0, 1e-4) < 0.01


def test_winter_vs_sh_cb_grid():
    for E in (0.5, 1, 2, 4):
        for eps in (0.05, 0.1, 0.2, 0.4):
            sh = entropy_energy_bound(NUMBER, E, eps)
            assert winter_energy_bound(NUMBER, E, eps) >= sh - (g(eps) - h2(eps)) - 1e-12


def test_bdj_examples():
    assert bdj_bound(1.0, 0.0) == 0.0
    assert bdj_bound(1.0, 0.25) == pytest.approx(2 * h2(0.25), abs=1e-15)
    with pytest.raises(OutOfRange):
        bdj_bound(1.0, 0.6)


def test_bdj_gap_at_unit_energy():
    for eps in (0.05, 0.1, 0.2, 0.25, 0.4):
        diff = entropy_energy_bound(NUMBER, 1.0, eps) - bdj_bound(1.0, eps)
        assert diff == pytest.approx(2 * (g(eps) - h2(eps)), abs=1e-12)


def test_bdj_below_sh_cb():
    for E in (0.5, 1, 3, 10):
        for eps in np.linspace(0.01, E / (E + 1), 7):
            assert bdj_bound(E, eps) <= entropy_energy_bound(NUMBER, E, eps) + 1e-12


def test_sh_cb_examples():
    assert entropy_energy_bound(NUMBER, 1.0, 0.2) == pytest.approx(0.2 * g(5) + g(0.2), abs=1e-12)
    for E, eps in [(1.0, 0.2), (3.0, 0.05), (0.5, 0.7)]:
        rewrite = (E + eps) * h2(eps / (E + eps)) + (1 + eps) * h2(eps / (1 + eps))
        assert entropy_energy_bound(NUMBER, E, eps) == pytest.approx(rewrite, abs=1e-10)


def test_e_h_eps_examples():
    rho = DensityOperator.from_diagonal([0.6, 0.4])
    assert e_h_eps(rho, [0.0, 1.0], 0.1) == pytest.approx(0.3)
    assert e_h_eps(rho, [0.0, 1.0], 0.7) == 0.0
    assert e_star([0.6, 0.4], [0.0, 1.0], 0.1) == pytest.approx(0.3)
    assert e_star([0.6, 0.4], [0.0, 1.0], 0.0) == pytest.approx(0.4)
    with pytest.raises(BasisMismatch):
        e_h_eps(rho, [0.0, 1.0, 2.0], 0.1)


def test_e_h_eps_commuting_equals_e_star():
    rng = np.random.default_rng(20)
    p = np.sort(rng.dirichlet(np.ones(10)))[::-1]
    rho = DensityOperator.from_diagonal(p)
    levels = NUMBER.levels(10)
    for eps in (0.01, 0.05, 0.1):
        assert e_h_eps(rho, levels, eps) == pytest.approx(e_star(p, levels, eps), abs=1e-14)


def test_e_star_lower_bound_noncommuting():
    rng = np.random.default_rng(21)
    for _ in range(50):
        d = int(rng.integers(2, 12))
        rho = DensityOperator(random_density(rng, d))
        levels = QUADRATIC.levels(d)
        eps = float(rng.uniform(0, 0.3))
        assert e_star(rho.eigenvalues, levels, eps) <= e_h_eps(rho, levels, eps) + 1e-9


def test_e_h_eps_nonincreasing():
    rng = np.random.default_rng(22)
    rho = DensityOperator(random_density(rng, 8))
    vals = [e_h_eps(rho, NUMBER, e) for e in np.linspace(0, 0.5, 11)]
    assert all(b <= a + 1e-12 for a, b in zip(vals, vals[1:]))


def test_refined_bound():
    rho = gibbs_state(NUMBER, 1.0)
    E = hamiltonian_expectation(rho, NUMBER)
    plain = entropy_energy_bound(NUMBER, E, 0.01)
    refined = refined_entropy_bound(rho, NUMBER, E, 0.01)
    assert refined < plain - 1e-3
    # eps above the largest eigenvalue removes the refinement
    assert refined_entropy_bound(rho, NUMBER, E, 0.6) == pytest.approx(entropy_energy_bound(NUMBER, E, 0.6))
    with pytest.raises(ConstraintViolated):
        refined_entropy_bound(rho, NUMBER, 0.5, 0.1)


def test_refined_bound_lower_offset_between():
    rng = np.random.default_rng(23)
    for _ in range(20):
        d = 8
        rho = DensityOperator(random_density(rng, d))
        E = hamiltonian_expectation(rho, NUMBER) + 0.1
        eps = 0.1
        exact = refined_entropy_bound(rho, NUMBER, E, eps)
        cheap = refined_entropy_bound(rho, NUMBER, E, eps, use_lower_offset=True)
        assert exact <= cheap + 1e-12 <= entropy_energy_bound(NUMBER, E, eps) + 2e-12


def test_extremal_pair_example():
    rho, sigma = extremal_pair(NUMBER, 1.0, 0.2)
    gap = rho.entropy() - sigma.entropy()
    # frozen from the term-by-term geometric sum
    assert gap == pytest.approx(0.9011224177324982, abs=1e-10)
    assert gap == pytest.approx(geometric_mixture_gap(1.0, 0.2), abs=1e-10)
    assert 0.2 * g(5) < gap <= 0.2 * g(5) + g(0.2)
    assert trace_distance(rho, sigma) <= 0.2 + 1e-9
    assert NUMBER.levels(rho.dim) @ rho.diagonal <= 1.0 + 1e-9


def test_extremal_pair_eps_one():
    rho, sigma = extremal_pair(NUMBER, 1.0, 1.0)
    assert np.allclose(rho.diagonal, gibbs_state(NUMBER, 1.0).diagonal)
    assert sigma.diagonal[0] == 1.0


def test_rank_bound_examples():
    assert rank_entropy_bound(5, 0.0) == 0.0
    assert rank_entropy_bound(2, 0.5) == pytest.approx(math.log(2))
    with pytest.raises(OutOfRange):
        rank_entropy_bound(2, 0.6)
    p = LAAClassParams(C=1, D=1)
    for r in (2, 3, 8):
        for eps in np.linspace(0.01, 1 - 1 / r, 6):
            assert rank_entropy_bound(r, eps) <= afw_rank_bound(p, r, eps) + 1e-12


def test_mixed_bound_examples():
    assert mixed_bound(3, NUMBER, 1.0, 0.0) == (0.0, 0.0)
    lo, hi = mixed_bound(2, NUMBER, 1.0, 0.1)
    assert lo == pytest.approx(h2(0.1)) and hi == pytest.approx(0.1 * g(10) + g(0.1))
    with pytest.raises(OutOfRange):
        mixed_bound(2, NUMBER, 1.0, 0.6)


def test_two_sided_examples():
    lo, hi = two_sided_energy_bound(NUMBER, 1.0, 4.0, 0.1)
    assert lo == pytest.approx(0.1 * g(40) + g(0.1)) and hi == pytest.approx(0.1 * g(10) + g(0.1))
    lo, hi = two_sided_energy_bound(NUMBER, 2.0, 2.0, 0.3)
    assert lo == hi == pytest.approx(entropy_energy_bound(NUMBER, 2.0, 0.3))


def test_general_spectrum_bound_dominates_pairs():
    rng = np.random.default_rng(24)
    for _ in range(30):
        d = 16
        levels = QUADRATIC.levels(d)
        p = rng.dirichlet(np.ones(d)) * np.exp(-levels)
        p /= p.sum()
        q = rng.dirichlet(np.ones(d)) * np.exp(-levels)
        q /= q.sum()
        rho, sigma = DensityOperator.from_diagonal(p), DensityOperator.from_diagonal(q)
        eps = trace_distance(rho, sigma)
        E = levels @ p
        assert rho.entropy() - sigma.entropy() <= entropy_energy_bound(QUADRATIC, E, eps) + 1e-10
        assert F(QUADRATIC, E) >= rho.entropy() - 1e-10
