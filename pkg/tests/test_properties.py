"""Randomized invariants checked with hypothesis."""

import math

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from qcontinuity.afw import jordan_decompose
from qcontinuity.bounds import entropy_energy_bound, rank_entropy_bound
from qcontinuity.conditional import eof_bound, mi_bound
from qcontinuity.hamiltonians import F, SpectrumSequence, h2, solve_beta
from qcontinuity.linalg import DensityOperator, compress_to_support, positive_part, trace_distance

from oracles import random_density

NUMBER = SpectrumSequence.arithmetic(1.0)
QUADRATIC = SpectrumSequence.generator(lambda k: np.asarray(k, float) ** 2)

seeds = st.integers(0, 2**32 - 1)
dims = st.integers(2, 7)
energies = st.floats(0.05, 20.0)
epsilons = st.floats(0.001, 0.999)
FAST = settings(max_examples=60, deadline=None)


@FAST
@given(seeds, dims)
def test_mirsky_inequality(seed, d):
    # sorted spectra are no farther apart than the states themselves
    rng = np.random.default_rng(seed)
    rho, sigma = DensityOperator(random_density(rng, d)), DensityOperator(random_density(rng, d))
    l1 = 0.5 * np.abs(rho.eigenvalues - sigma.eigenvalues).sum()
    assert l1 <= trace_distance(rho, sigma) + 1e-10


@FAST
@given(seeds, dims, st.floats(0.0, 1.0))
def test_concavity_deficit(seed, d, p):
    rng = np.random.default_rng(seed)
    a, b = random_density(rng, d), random_density(rng, d)
    mix = DensityOperator(p * a + (1 - p) * b)
    avg = p * DensityOperator(a).entropy() + (1 - p) * DensityOperator(b).entropy()
    deficit = mix.entropy() - avg
    assert -1e-10 <= deficit <= h2(p) + 1e-10


@FAST
@given(seeds, dims)
def test_positive_part_trace(seed, d):
    rng = np.random.default_rng(seed)
    rho, sigma = random_density(rng, d), random_density(rng, d)
    pos = positive_part(rho - sigma)
    assert math.isclose(np.trace(pos).real, trace_distance(DensityOperator(rho), DensityOperator(sigma)), abs_tol=1e-10)


@FAST
@given(energies, st.floats(0.01, 1.0), st.floats(0.01, 1.0))
def test_rescaling_monotone(E, x, y):
    # x F(E/x) is nondecreasing in x
    x, y = min(x, y), max(x, y)
    for spec in (NUMBER, QUADRATIC):
        assert x * F(spec, E / x) <= y * F(spec, E / y) + 1e-9


@FAST
@given(st.floats(0.01, 50.0), st.floats(0.01, 50.0))
def test_F_increasing_concave(a, b):
    a, b = min(a, b), max(a, b)
    for spec in (NUMBER, QUADRATIC):
        fa, fb, fm = F(spec, a), F(spec, b), F(spec, 0.5 * (a + b))
        assert fa <= fb + 1e-10
        assert fm >= 0.5 * (fa + fb) - 1e-9
        # F(E)/E is nonincreasing
        assert fb / b <= fa / a + 1e-10


@FAST
@given(energies, epsilons, epsilons)
def test_bounds_monotone_in_eps(E, e1, e2):
    e1, e2 = min(e1, e2), max(e1, e2)
    assert entropy_energy_bound(NUMBER, E, e1) <= entropy_energy_bound(NUMBER, E, e2) + 1e-12
    assert mi_bound("energy_classical_oscillator", e1, E=E) <= mi_bound("energy_classical_oscillator", e2, E=E) + 1e-12


@FAST
@given(st.integers(2, 50), st.floats(0.0, 1.0), st.floats(0.0, 1.0))
def test_rank_bound_monotone(r, e1, e2):
    cap = 1 - 1 / r
    e1, e2 = sorted((min(e1, cap), min(e2, cap)))
    assert rank_entropy_bound(r, e1) <= rank_entropy_bound(r, e2) + 1e-12


@FAST
@given(st.integers(2, 16), st.integers(0, 2**20))
def test_eof_delta_symmetric(r, k):
    # dyadic eps keeps 1 - eps exact in floating point
    eps = k / 2**20
    a, b = eof_bound("rank", eps, rank=r), eof_bound("rank", 1 - eps, rank=r)
    assert math.isclose(a, b, abs_tol=1e-12)


@FAST
@given(seeds, st.integers(2, 12))
def test_jordan_masses(seed, n):
    rng = np.random.default_rng(seed)
    mu, nu = rng.dirichlet(np.ones(n)), rng.dirichlet(np.ones(n))
    if np.allclose(mu, nu):
        return
    eps, p, m = jordan_decompose(mu, nu)
    assert math.isclose(p.sum(), 1, abs_tol=1e-12) and math.isclose(m.sum(), 1, abs_tol=1e-12)
    assert np.all(p >= 0) and np.all(m >= 0)
    # disjoint supports
    assert np.all(p * m == 0)
    assert np.allclose(eps * (p - m), mu - nu, atol=1e-14)


@FAST
@given(seeds, st.integers(2, 10), st.data())
def test_compress_reduces_entropy(seed, d, data):
    rng = np.random.default_rng(seed)
    r = data.draw(st.integers(1, d))
    sigma = DensityOperator.from_diagonal(rng.dirichlet(np.ones(d)))
    out = compress_to_support(sigma, np.eye(d), r)
    assert out.rank <= r
    assert out.entropy() <= sigma.entropy() + 1e-12
    assert math.isclose(np.trace(out.matrix).real, 1.0, abs_tol=1e-12)


@FAST
@given(energies)
def test_gibbs_solution_invariants(E):
    for spec in (NUMBER, QUADRATIC):
        sol = solve_beta(spec, E)
        p = sol.probabilities
        assert sol.beta > 0
        assert math.isclose(p.sum(), 1.0, abs_tol=1e-10)
        assert math.isclose(sol.energy, E, rel_tol=1e-8, abs_tol=1e-10)
        assert np.all(np.diff(p) <= 1e-15)
        assert sol.tail_bound <= 1e-10
