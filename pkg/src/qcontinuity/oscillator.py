"""Classical states of quantum oscillators as finite mixtures of coherent states.

Coherent states live in a Fock space truncated at ``N`` levels per mode and
are renormalized after truncation; the cutoff must keep the discarded
Poisson tail below ``LEAK_TOL``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import reduce

import numpy as np
from scipy.special import gammainc, gammaln

from .afw import QuasiClassicalEnsemble, tv_distance
from .conditional import mi_bound, mutual_information
from .errors import CutoffTooSmall, DimensionTooLarge, IndexOutOfRange, InvalidState
from .linalg import DensityOperator, partial_trace

LEAK_TOL = 1e-10
MAX_DIM = 1024


def leakage(z: complex, N: int) -> float:
    """Weight of |z> on Fock levels >= N (a Poisson tail)."""
    lam = abs(z) ** 2
    return 0.0 if lam == 0 else float(gammainc(N, lam))


def auto_cutoff(z: complex) -> int:
    r = abs(z)
    return int(math.ceil(r * r + 10.0 * r + 20.0))


def coherent_vector(z: complex, N: int, leak_tol: float = LEAK_TOL) -> np.ndarray:
    """Fock amplitudes exp(-|z|^2/2) z^k / sqrt(k!) for k < N, renormalized."""
    N = int(N)
    if N < 1:
        raise CutoffTooSmall("cutoff must be positive")
    leak = leakage(z, N)
    if leak >= leak_tol:
        raise CutoffTooSmall(f"cutoff {N} leaks {leak:.2e} of |{z}>")
    k = np.arange(N)
    r = abs(z)
    if r == 0:
        v = np.zeros(N, dtype=complex)
        v[0] = 1.0
        return v
    log_mod = -0.5 * r * r + k * math.log(r) - 0.5 * gammaln(k + 1)
    v = np.exp(log_mod) * np.exp(1j * k * np.angle(z))
    return v / np.linalg.norm(v)


@dataclass
class CoherentMixture:
    """Atomic measure on C^n: weights over tuples of coherent amplitudes."""

    modes: int
    atoms: tuple
    weights: np.ndarray
    cutoff: int | None = None

    def __post_init__(self):
        if self.modes < 1:
            raise InvalidState("at least one mode is required")
        merged: dict[tuple, float] = {}
        for z, w in zip(self.atoms, np.asarray(self.weights, dtype=float)):
            z = tuple(complex(c) for c in np.atleast_1d(z))
            if len(z) != self.modes:
                raise InvalidState(f"atom {z} does not have {self.modes} amplitudes")
            if w < 0:
                raise InvalidState("weights must be nonnegative")
            if w > 0:
                merged[z] = merged.get(z, 0.0) + float(w)
        if not merged:
            raise InvalidState("empty mixture")
        self.atoms = tuple(merged)
        self.weights = np.array(list(merged.values()))
        if abs(self.weights.sum() - 1.0) > 1e-12:
            raise InvalidState(f"weights sum to {self.weights.sum():.15f}")
        if self.cutoff is None:
            self.cutoff = max(auto_cutoff(c) for z in self.atoms for c in z)
        for z in self.atoms:
            for c in z:
                if leakage(c, self.cutoff) >= LEAK_TOL:
                    raise CutoffTooSmall(f"cutoff {self.cutoff} too small for amplitude {c}")

    @classmethod
    def from_atoms(cls, atoms, cutoff: int | None = None) -> "CoherentMixture":
        """Build from ``[(z_tuple, weight), ...]``."""
        zs, ws = zip(*atoms)
        modes = len(np.atleast_1d(zs[0]))
        return cls(modes, zs, np.array(ws, dtype=float), cutoff)

    @property
    def measure(self) -> dict:
        return dict(zip(self.atoms, self.weights))

    @property
    def dim(self) -> int:
        return self.cutoff ** self.modes

    def with_cutoff(self, cutoff: int) -> "CoherentMixture":
        return CoherentMixture(self.modes, self.atoms, self.weights, cutoff)

    def marginal(self, k: int) -> "CoherentMixture":
        """Single-mode mixture of the k-th amplitudes (1-based)."""
        _check_mode(self, k)
        return CoherentMixture(1, [(z[k - 1],) for z in self.atoms], self.weights, self.cutoff)


def _check_mode(mix: CoherentMixture, k: int) -> None:
    if not 1 <= k <= mix.modes:
        raise IndexOutOfRange(f"mode {k} outside 1..{mix.modes}")


def product_vector(z: tuple, N: int) -> np.ndarray:
    return reduce(np.kron, [coherent_vector(c, N) for c in z])


def assemble_classical_state(mix: CoherentMixture) -> DensityOperator:
    """sum_j w_j |z_j><z_j| on the truncated space of dimension N^n."""
    if mix.dim > MAX_DIM:
        raise DimensionTooLarge(f"N^n = {mix.dim} exceeds {MAX_DIM}")
    vecs = np.array([product_vector(z, mix.cutoff) for z in mix.atoms])
    rho = (vecs.T * mix.weights) @ vecs.conj()
    return DensityOperator(rho)


def mean_photon(mix: CoherentMixture, k: int) -> float:
    """Mean photon number of mode k (1-based): sum_j w_j |z_jk|^2."""
    _check_mode(mix, k)
    return float(sum(w * abs(z[k - 1]) ** 2 for z, w in zip(mix.atoms, mix.weights)))


def number_expectation(rho: DensityOperator, cutoff: int, modes: int, k: int) -> float:
    """Tr N_k rho computed on the truncated matrix."""
    dims = [cutoff] * modes
    local = partial_trace(rho, dims, [k - 1])
    return float(np.dot(np.arange(cutoff), np.diag(local).real))


def classical_mi_value(mix: CoherentMixture) -> float:
    """I(A1:A2) of the assembled two-mode classical state."""
    if mix.modes != 2:
        raise InvalidState("mutual information needs a two-mode mixture")
    rho = assemble_classical_state(mix)
    return mutual_information(rho, [mix.cutoff, mix.cutoff])


def classical_mi_bound(E: float, eps: float) -> float:
    """eps g(E/eps) + 2 g(eps)."""
    return mi_bound("energy_classical_oscillator", eps, E=E)


def mixture_tv(mu: CoherentMixture, nu: CoherentMixture) -> float:
    """Total variation between the representing measures (union of atoms)."""
    return tv_distance(mu.measure, nu.measure)


def shared_ensembles(mu: CoherentMixture, nu: CoherentMixture):
    """Quasi-classical ensembles of both mixtures over one shared state map."""
    if mu.modes != nu.modes:
        raise InvalidState("mixtures have different numbers of modes")
    N = max(mu.cutoff, nu.cutoff)
    if N ** mu.modes > MAX_DIM:
        raise DimensionTooLarge(f"N^n = {N ** mu.modes} exceeds {MAX_DIM}")
    state_map = {}
    for z in dict.fromkeys(mu.atoms + nu.atoms):
        v = product_vector(z, N)
        state_map[z] = DensityOperator(np.outer(v, v.conj()), validate=False)
    return (
        QuasiClassicalEnsemble(mu.atoms, mu.weights, state_map),
        QuasiClassicalEnsemble(nu.atoms, nu.weights, state_map),
    )
