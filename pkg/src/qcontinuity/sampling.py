"""Seeded random states and pairs for the verification campaigns.

Every sampler takes a ``numpy.random.Generator``; campaigns derive one per
trial with :func:`trial_rng` so trials can run in any order or thread.
"""

from __future__ import annotations

import numpy as np
from scipy.stats import unitary_group

from .classical import JointDistribution, tv_distance as classical_tv
from .conditional import QCEnsembleState, qc_trace_distance
from .errors import InfeasibleConstraint
from .hamiltonians import SpectrumSequence
from .linalg import DensityOperator, trace_distance
from .oscillator import CoherentMixture, mixture_tv

# pairs closer than this are treated as identical so bounds never see eps ~ 1e-17
EPS_FLOOR = 1e-12


def trial_rng(seed: int, trial: int, stream: int = 0) -> np.random.Generator:
    """Independent Philox stream for one (seed, trial, stream) triple."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, trial, stream])))


def haar_unitary(rng, d: int) -> np.ndarray:
    if d == 1:
        return np.exp(2j * np.pi * rng.random()).reshape(1, 1)
    return unitary_group.rvs(d, random_state=rng)


def random_probs(rng, d: int, rank: int | None = None, spread: float | None = None) -> np.ndarray:
    """Dirichlet vector on ``rank`` of ``d`` entries (all by default)."""
    rank = d if rank is None else rank
    alpha = spread if spread is not None else rng.choice([0.2, 0.5, 1.0, 3.0])
    p = np.zeros(d)
    p[:rank] = rng.dirichlet(np.full(rank, alpha))
    return p


def block_unitary(rng, d: int, max_block: int = 4) -> np.ndarray:
    """Unitary fixing the first basis vector and mixing nearby higher levels."""
    u = np.zeros((d, d), dtype=complex)
    u[0, 0] = 1.0
    i = 1
    while i < d:
        b = min(int(rng.integers(1, max_block + 1)), d - i)
        u[i:i + b, i:i + b] = haar_unitary(rng, b)
        i += b
    return u


def _contract_to_cap(p: np.ndarray, level_energy: np.ndarray, cap: float) -> np.ndarray:
    """Move weight onto entry 0 (energy 0) until sum p_k e_k <= cap."""
    e = float(np.dot(p, level_energy))
    if e <= cap:
        return p
    t = 1.0 - cap / e
    out = (1.0 - t) * p
    out[0] += t
    return out


def _state(p: np.ndarray, u: np.ndarray | None) -> DensityOperator:
    if u is None:
        return DensityOperator.from_diagonal(p)
    return DensityOperator((u * p) @ u.conj().T, validate=False)


def energy_capped_state(rng, levels: np.ndarray, E: float, generic: bool | None = None) -> DensityOperator:
    """Random state with Tr H rho <= E for H = diag(levels), levels[0] = 0.

    The spectrum decays along the levels with random noise; the eigenbasis is
    either a random block rotation of the energy basis or, when ``generic``,
    a Haar unitary. The cap is met by contracting toward the ground state,
    with a random slack so that not every sample sits on the boundary.
    """
    if E < 0:
        raise InfeasibleConstraint(f"negative energy cap {E}")
    d = levels.size
    generic = rng.random() < 0.3 if generic is None else generic
    decay = rng.uniform(0.05, 2.0)
    p = np.sort(rng.dirichlet(np.ones(d)) * np.exp(-decay * np.arange(d)))[::-1]
    p /= p.sum()
    u = haar_unitary(rng, d) if generic else block_unitary(rng, d)
    level_energy = np.einsum("ij,i,ij->j", u.conj(), levels, u).real
    if generic:
        # ground weight must sit on |0>, so contract in the matrix picture
        rho = (u * p) @ u.conj().T
        e = float(np.dot(levels, np.diag(rho).real))
        cap = E * rng.uniform(0.5, 1.0)
        if e > cap:
            t = 1.0 - cap / e
            rho = (1.0 - t) * rho
            rho[0, 0] += t
        return DensityOperator(rho, validate=False)
    p = _contract_to_cap(p, level_energy, E * rng.uniform(0.5, 1.0))
    return _state(p, u)


def arbitrary_state(rng, d: int, rank: int | None = None) -> DensityOperator:
    p = random_probs(rng, d, rank)
    return _state(p, haar_unitary(rng, d))


def mix_toward(target, other, eps: float):
    """(1 - t) other + t target with t minimal so the distance is <= eps.

    Distance is linear in (1 - t) along the segment, so t has a closed form.
    Works for density operators, q-c states, joint distributions and
    coherent mixtures.
    """
    dist = _distance(target, other)
    if dist <= eps:
        return other
    t = 1.0 - eps / dist
    if t >= 1.0 - EPS_FLOOR:
        return target
    return _combine(target, other, t)


def _distance(a, b) -> float:
    if isinstance(a, DensityOperator):
        return trace_distance(a, b)
    if isinstance(a, QCEnsembleState):
        return qc_trace_distance(a, b)
    if isinstance(a, JointDistribution):
        return classical_tv(a, b)
    if isinstance(a, CoherentMixture):
        return mixture_tv(a, b)
    raise TypeError(type(a))


def _combine(target, other, t: float):
    if isinstance(target, DensityOperator):
        if target.is_diagonal and other.is_diagonal:
            return DensityOperator.from_diagonal((1 - t) * other.diagonal + t * target.diagonal)
        return DensityOperator((1 - t) * other.matrix + t * target.matrix, validate=False)
    if isinstance(target, QCEnsembleState):
        k = max(target.n_classes, other.n_classes)
        blocks = [(1 - t) * b + t * a for a, b in zip(target.weighted_blocks(k), other.weighted_blocks(k))]
        probs = np.array([np.trace(b).real for b in blocks])
        states = [
            DensityOperator(b / pk, validate=False) if pk > 0 else DensityOperator.from_diagonal(np.eye(target.dim_a)[0])
            for b, pk in zip(blocks, probs)
        ]
        return QCEnsembleState(probs / probs.sum(), states)
    if isinstance(target, JointDistribution):
        keys = dict.fromkeys(list(other.entries) + list(target.entries))
        table = {x: (1 - t) * other.entries.get(x, 0.0) + t * target.entries.get(x, 0.0) for x in keys}
        total = sum(table.values())
        return JointDistribution({x: w / total for x, w in table.items()}, target.arity)
    if isinstance(target, CoherentMixture):
        a, b = target.measure, other.measure
        atoms = list(dict.fromkeys(list(b) + list(a)))
        w = np.array([(1 - t) * b.get(z, 0.0) + t * a.get(z, 0.0) for z in atoms])
        return CoherentMixture(target.modes, atoms, w / w.sum(), max(target.cutoff, other.cutoff))
    raise TypeError(type(target))


def sample_commuting_pair(dim: int, constraint: dict, eps_target: float, rng):
    """Commuting (rho, sigma) diagonal in one random basis, within eps_target.

    ``constraint`` is ``{"rank": r}`` (both supported on the same r basis
    vectors) or ``{"energy": (spec, E)}`` (both with Tr H <= E, H diagonal in
    the computational basis). Returns the pair and the shared basis.
    """
    if "rank" in constraint:
        r = int(constraint["rank"])
        if not 1 <= r <= dim:
            raise InfeasibleConstraint(f"rank {r} impossible in dimension {dim}")
        u = haar_unitary(rng, dim)
        support = rng.permutation(dim)[:r]
        p = np.zeros(dim)
        q = np.zeros(dim)
        p[support] = random_probs(rng, r)
        q[support] = random_probs(rng, r)
    elif "energy" in constraint:
        spec, E = constraint["energy"]
        if E < 0:
            raise InfeasibleConstraint(f"negative energy cap {E}")
        levels = spec.levels(dim)
        u = block_unitary(rng, dim)
        level_energy = np.einsum("ij,i,ij->j", u.conj(), levels, u).real
        p = _contract_to_cap(random_probs(rng, dim), level_energy, E)
        q = _contract_to_cap(random_probs(rng, dim), level_energy, E)
    else:
        raise InfeasibleConstraint(f"unknown constraint {constraint}")
    # the shared basis makes trace distance the l1 distance of p and q
    dist = 0.5 * np.abs(p - q).sum()
    if dist > eps_target:
        t = 1.0 - eps_target / dist
        q = (1.0 - t) * q + t * p
    return _state(p, u), _state(q, u), u


def product_block_basis(rng, d1: int, d2: int) -> np.ndarray:
    """Basis |i> (x) u_j^(i) of A1 A2 with an independent unitary per i."""
    cols = []
    for i in range(d1):
        e = np.zeros(d1)
        e[i] = 1.0
        v = haar_unitary(rng, d2)
        cols.extend(np.kron(e, v[:, j]) for j in range(d2))
    return np.array(cols).T


def sample_qc_state(rng, dim_a: int, n_classes: int, levels: np.ndarray, E: float | None) -> QCEnsembleState:
    probs = random_probs(rng, n_classes)
    states = []
    for _ in range(n_classes):
        if E is None:
            states.append(arbitrary_state(rng, dim_a, int(rng.integers(1, dim_a + 1))))
        else:
            states.append(energy_capped_state(rng, levels, E))
    return QCEnsembleState(probs, states)


def sample_joint_distribution(rng, n1: int, n2: int, levels: np.ndarray | None = None, E: float | None = None) -> JointDistribution:
    """Random bivariate table on {0..n1-1} x {0..n2-1}; optional E(X1) <= E."""
    p = random_probs(rng, n1 * n2).reshape(n1, n2)
    # sparsify some tables so support sizes vary
    if rng.random() < 0.5:
        p *= rng.random(p.shape) < rng.uniform(0.3, 1.0)
        if p.sum() == 0:
            p[0, 0] = 1.0
        p /= p.sum()
    if E is not None:
        row_energy = levels[:n1]
        e = float(np.dot(row_energy, p.sum(axis=1)))
        cap = E * rng.uniform(0.5, 1.0)
        if e > cap:
            t = 1.0 - cap / e
            p = (1.0 - t) * p
            p[0, :] += t * rng.dirichlet(np.ones(n2))
    return JointDistribution.from_array(p / p.sum())


def sample_coherent_mixture(rng, modes: int, n_atoms: int, max_amp: float, cutoff: int) -> CoherentMixture:
    r = max_amp * np.sqrt(rng.random((n_atoms, modes)))
    phase = np.exp(2j * np.pi * rng.random((n_atoms, modes)))
    atoms = [tuple(row) for row in r * phase]
    return CoherentMixture(modes, atoms, rng.dirichlet(np.ones(n_atoms)), cutoff)


def sample_two_qubit_state(rng) -> DensityOperator:
    """Mixture of random two-qubit families: pure, Bell-diagonal, Werner, generic."""
    kind = rng.integers(4)
    if kind == 0:
        return arbitrary_state(rng, 4, 1)
    if kind == 1:
        bell = np.array([[1, 0, 0, 1], [1, 0, 0, -1], [0, 1, 1, 0], [0, 1, -1, 0]], dtype=complex).T / np.sqrt(2)
        return _state(random_probs(rng, 4), bell)
    if kind == 2:
        return werner_state(rng.random())
    return arbitrary_state(rng, 4, int(rng.integers(1, 5)))


def werner_state(f: float) -> DensityOperator:
    """f |Psi-><Psi-| + (1 - f) (I - |Psi-><Psi-|)/3."""
    psi = np.array([0, 1, -1, 0], dtype=complex) / np.sqrt(2)
    proj = np.outer(psi, psi.conj())
    return DensityOperator(f * proj + (1 - f) * (np.eye(4) - proj) / 3)


def default_spectrum() -> SpectrumSequence:
    return SpectrumSequence.arithmetic(1.0)
