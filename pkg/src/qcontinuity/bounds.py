"""Continuity bounds for the von Neumann entropy.

Every evaluator returns a value in nats. Bounds that are only meaningful for
``eps > 0`` return exactly 0 at ``eps = 0``.
"""

from __future__ import annotations

import math

import numpy as np

from .afw import KNOWN_CLASSES, afw_energy_bound
from .errors import BasisMismatch, ConstraintViolated, OutOfRange
from .hamiltonians import F, SpectrumSequence, g, gibbs_state, h2
from .linalg import DensityOperator, positive_part


def _eps(eps: float, *, allow_zero: bool = True) -> float:
    eps = float(eps)
    lo_ok = eps >= 0.0 if allow_zero else eps > 0.0
    if not (lo_ok and eps <= 1.0):
        raise OutOfRange(f"epsilon {eps} outside {'[' if allow_zero else '('}0, 1]")
    return eps


def audenaert_bound(d: int, eps: float) -> float:
    """Optimal bound for dimension ``d``; saturates at ln d past eps = 1 - 1/d."""
    eps = _eps(eps)
    if d < 1:
        raise OutOfRange(f"dimension must be positive, got {d}")
    if eps > 1.0 - 1.0 / d:
        return math.log(d)
    if eps == 0.0:
        return 0.0
    return eps * math.log(d - 1) + h2(eps)


def winter_energy_bound(spec: SpectrumSequence, E: float, eps: float) -> float:
    """2 eps F(E/eps) + h2(eps)."""
    eps = _eps(eps)
    if eps == 0.0:
        return 0.0
    return 2.0 * eps * F(spec, E / eps) + h2(eps)


def bdj_bound(E: float, eps: float) -> float:
    """Optimal bound for the number operator, valid for eps <= E/(E+1)."""
    eps = _eps(eps)
    if E < 0:
        raise OutOfRange(f"energy {E} must be nonnegative")
    if eps > E / (E + 1.0) + 1e-15:
        raise OutOfRange(f"epsilon {eps} exceeds E/(E+1) = {E / (E + 1.0):.6g}")
    if eps == 0.0:
        return 0.0
    return E * h2(min(eps / E, 1.0)) + h2(eps)


def entropy_energy_bound(spec: SpectrumSequence, E: float, eps: float) -> float:
    """eps F(E/eps) + g(eps) for any pair with Tr H rho <= E."""
    return afw_energy_bound(KNOWN_CLASSES["entropy"], spec, 1, E, eps)


def _energies_for(rho: DensityOperator, spec_or_energies) -> np.ndarray:
    if isinstance(spec_or_energies, SpectrumSequence):
        if spec_or_energies.is_finite and len(spec_or_energies) < rho.dim:
            raise BasisMismatch(f"spectrum has {len(spec_or_energies)} levels, state dim {rho.dim}")
        return spec_or_energies.levels(rho.dim)
    e = np.asarray(spec_or_energies, dtype=float)
    if e.shape != (rho.dim,):
        raise BasisMismatch(f"{e.size} energies for a state of dim {rho.dim}")
    return e


def hamiltonian_expectation(rho: DensityOperator, spec_or_energies, basis=None) -> float:
    """Tr H rho with H diagonal in ``basis`` (computational basis by default)."""
    e = _energies_for(rho, spec_or_energies)
    if basis is None:
        return float(np.dot(e, rho.diagonal))
    u = _basis(basis, rho.dim)
    return float(np.dot(e, np.einsum("ij,ik,kj->j", u.conj(), rho.matrix, u).real))


def _basis(basis, dim: int) -> np.ndarray:
    u = np.asarray(basis, dtype=complex)
    if u.shape != (dim, dim):
        raise BasisMismatch(f"basis shape {u.shape} vs state dim {dim}")
    if np.max(np.abs(u.conj().T @ u - np.eye(dim))) > 1e-9:
        raise BasisMismatch("basis is not orthonormal")
    return u


def e_h_eps(rho: DensityOperator, spec_or_energies, eps: float, basis=None) -> float:
    """Tr H [rho - eps I]_+ with H = sum_k E_k |b_k><b_k|.

    ``basis`` holds the eigenvectors b_k of H as columns; the computational
    basis is used when it is omitted.
    """
    e = _energies_for(rho, spec_or_energies)
    if rho.is_diagonal and basis is None:
        return float(np.dot(e, np.clip(rho.diagonal - eps, 0.0, None)))
    pp = positive_part(rho.matrix - eps * np.eye(rho.dim))
    if basis is None:
        return float(np.dot(e, np.diag(pp).real))
    u = _basis(basis, rho.dim)
    return float(np.dot(e, np.einsum("ij,ik,kj->j", u.conj(), pp, u).real))


def e_star(eigs, energies, eps: float) -> float:
    """sum_k E_k [lambda_k - eps]_+ with eigenvalues sorted down and energies up."""
    lam = np.sort(np.asarray(eigs, dtype=float))[::-1]
    en = np.sort(np.asarray(energies, dtype=float))
    n = min(lam.size, en.size)
    return float(np.dot(en[:n], np.clip(lam[:n] - eps, 0.0, None)))


def refined_entropy_bound(
    rho: DensityOperator,
    spec: SpectrumSequence,
    E: float,
    eps: float,
    basis=None,
    use_lower_offset: bool = False,
) -> float:
    """eps F((E - Tr H[rho - eps I]_+)/eps) + g(eps).

    With ``use_lower_offset`` the offset is replaced by the spectral lower
    bound :func:`e_star`, which needs no eigenbasis of H.
    """
    eps = _eps(eps)
    if eps == 0.0:
        return 0.0
    energy = hamiltonian_expectation(rho, spec, basis)
    if energy > E + 1e-9:
        raise ConstraintViolated(f"Tr H rho = {energy:.10g} exceeds E = {E}")
    if use_lower_offset:
        offset = e_star(rho.eigenvalues, spec.levels(rho.dim), eps)
    else:
        offset = e_h_eps(rho, spec, eps, basis)
    return eps * F(spec, max(E - offset, 0.0) / eps) + g(eps)


def extremal_pair(spec: SpectrumSequence, E: float, eps: float):
    """States at distance eps whose entropy gap exceeds eps F(E/eps).

    ``rho`` mixes the Gibbs state at energy E/eps with weight eps into the
    ground state, ``sigma`` is the ground state itself. Both are diagonal.
    """
    eps = _eps(eps, allow_zero=False)
    if E <= 0:
        raise OutOfRange(f"energy {E} must be positive")
    probs = gibbs_state(spec, E / eps).diagonal
    ground = np.zeros_like(probs)
    ground[0] = 1.0
    rho = DensityOperator.from_diagonal(eps * probs + (1.0 - eps) * ground)
    return rho, DensityOperator.from_diagonal(ground)


def rank_entropy_bound(rank: int, eps: float) -> float:
    """eps ln(rank - 1) + h2(eps), valid for eps <= 1 - 1/rank."""
    eps = _eps(eps)
    if rank < 1:
        raise OutOfRange(f"rank must be positive, got {rank}")
    if eps > 1.0 - 1.0 / rank + 1e-15:
        raise OutOfRange(f"epsilon {eps} exceeds 1 - 1/rank = {1.0 - 1.0 / rank:.6g}")
    if eps == 0.0:
        return 0.0
    return eps * math.log(rank - 1) + h2(eps)


def mixed_bound(d: int, spec: SpectrumSequence, E_rho: float, eps: float) -> tuple[float, float]:
    """(lower, upper) magnitudes for S(rho) - S(sigma) when rank sigma <= d."""
    lower = rank_entropy_bound(d, eps)
    return lower, entropy_energy_bound(spec, E_rho, eps)


def two_sided_energy_bound(spec: SpectrumSequence, E_rho: float, E_sigma: float, eps: float) -> tuple[float, float]:
    """(lower, upper) magnitudes for S(rho) - S(sigma) with separate energy caps."""
    return entropy_energy_bound(spec, E_sigma, eps), entropy_energy_bound(spec, E_rho, eps)
