"""Bipartite quantities: conditional entropy of q-c states, entanglement of
formation and quantum mutual information, with their continuity bounds."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .afw import KNOWN_CLASSES, afw_energy_bound, afw_rank_bound
from .bounds import _eps
from .errors import ConstraintViolated, DimMismatch, InvalidState, OutOfRange
from .hamiltonians import SpectrumSequence, h2
from .linalg import DensityOperator, partial_trace, positive_part, spectral_entropy


@dataclass
class QCEnsembleState:
    """q-c state ``sum_k p_k rho_k (x) |k><k|`` stored by its components."""

    probs: np.ndarray
    states: tuple

    def __post_init__(self):
        self.probs = np.asarray(self.probs, dtype=float)
        self.states = tuple(self.states)
        if self.probs.shape != (len(self.states),) or not self.states:
            raise InvalidState("one probability per component is required")
        if np.any(self.probs < 0) or abs(self.probs.sum() - 1.0) > 1e-12:
            raise InvalidState("component probabilities must sum to 1")
        if len({s.dim for s in self.states}) != 1:
            raise DimMismatch("all components must share the dimension of A")

    @classmethod
    def from_components(cls, components) -> "QCEnsembleState":
        ps, sts = zip(*components)
        return cls(np.array(ps, dtype=float), sts)

    @property
    def dim_a(self) -> int:
        return self.states[0].dim

    @property
    def n_classes(self) -> int:
        return len(self.states)

    def weighted_blocks(self, n_classes: int | None = None) -> list[np.ndarray]:
        """The blocks p_k rho_k, padded with zeros up to ``n_classes``."""
        k = n_classes or self.n_classes
        blocks = [p * s.matrix for p, s in zip(self.probs, self.states)]
        blocks += [np.zeros((self.dim_a, self.dim_a), dtype=complex)] * (k - len(blocks))
        return blocks

    def reduced_a(self) -> DensityOperator:
        return DensityOperator(sum(self.weighted_blocks()), validate=False)

    def assemble(self) -> DensityOperator:
        """Full matrix on A (x) B with the A index major."""
        da, k = self.dim_a, self.n_classes
        out = np.zeros((da * k, da * k), dtype=complex)
        for j, block in enumerate(self.weighted_blocks()):
            out[j::k, j::k] = block
        return DensityOperator(out, validate=False)


def qc_trace_distance(rho: QCEnsembleState, sigma: QCEnsembleState) -> float:
    """Half trace norm of the difference, evaluated block by block."""
    if rho.dim_a != sigma.dim_a:
        raise DimMismatch(f"A dimensions differ: {rho.dim_a} vs {sigma.dim_a}")
    k = max(rho.n_classes, sigma.n_classes)
    total = 0.0
    for a, b in zip(rho.weighted_blocks(k), sigma.weighted_blocks(k)):
        total += np.sum(np.abs(np.linalg.eigvalsh(a - b)))
    return float(min(1.0, 0.5 * total))


def qce_value(qc: QCEnsembleState) -> float:
    """Conditional entropy S(A|B) of a q-c state, sum_k p_k S(rho_k)."""
    return float(sum(p * s.entropy() for p, s in zip(qc.probs, qc.states) if p > 0))


def conditional_entropy(rho: DensityOperator, dims: Sequence[int]) -> float:
    """S(AB) - S(B) for a bipartite state with ``dims = (d_A, d_B)``."""
    rb = partial_trace(rho, dims, [1])
    return rho.entropy() - spectral_entropy(np.linalg.eigvalsh(rb))


def mutual_information(rho: DensityOperator, dims: Sequence[int]) -> float:
    """S(A) + S(B) - S(AB)."""
    ra = partial_trace(rho, dims, [0])
    rb = partial_trace(rho, dims, [1])
    return spectral_entropy(np.linalg.eigvalsh(ra)) + spectral_entropy(np.linalg.eigvalsh(rb)) - rho.entropy()


def qc_energy_offset(qc: QCEnsembleState, energies, eps: float) -> float:
    """sum_k Tr H [p_k rho_k - eps I]_+ with H diagonal in the basis of A."""
    e = np.asarray(energies, dtype=float)
    total = 0.0
    for block in qc.weighted_blocks():
        pp = positive_part(block - eps * np.eye(qc.dim_a))
        total += float(np.dot(e, np.diag(pp).real))
    return total


def qce_bound(
    mode: str,
    eps: float,
    *,
    rank: int | None = None,
    spec: SpectrumSequence | None = None,
    E: float | None = None,
    rho: QCEnsembleState | None = None,
) -> float:
    """One-sided bound on S(A|B)_rho - S(A|B)_sigma for q-c states.

    ``mode="rank"`` needs ``rank`` (of rho_A); ``mode="energy"`` needs
    ``spec`` and ``E`` and applies the ensemble refinement when ``rho`` is
    given.
    """
    eps = _eps(eps)
    params = KNOWN_CLASSES["conditional_entropy_qc"]
    if mode == "rank":
        if rank is None:
            raise OutOfRange("rank mode needs a rank")
        return afw_rank_bound(params, rank, eps)
    if mode != "energy":
        raise OutOfRange(f"unknown mode {mode!r}")
    if spec is None or E is None:
        raise OutOfRange("energy mode needs a spectrum and an energy")
    offset = 0.0
    if rho is not None and eps > 0:
        energies = spec.levels(rho.dim_a)
        energy = float(np.dot(energies, rho.reduced_a().diagonal))
        if energy > E + 1e-9:
            raise ConstraintViolated(f"Tr H rho_A = {energy:.10g} exceeds E = {E}")
        offset = min(qc_energy_offset(rho, energies, eps), E)
    return afw_energy_bound(params, spec, 1, E, eps, offset=offset)


def eof_delta(eps: float) -> float:
    eps = _eps(eps)
    return math.sqrt(eps * (1.0 - eps))


def eof_bound(
    mode: str,
    eps: float,
    *,
    rank: int | None = None,
    spec: SpectrumSequence | None = None,
    E: float | None = None,
) -> float:
    """Entanglement-of-formation bound with delta = sqrt(eps (1 - eps)).

    ``mode="rank"``: delta ln rank + g(delta); ``mode="energy"``:
    delta F(E/delta) + g(delta). Both vanish at eps in {0, 1}.
    """
    delta = eof_delta(eps)
    params = KNOWN_CLASSES["conditional_entropy_qc"]
    if mode == "rank":
        if rank is None:
            raise OutOfRange("rank mode needs a rank")
        return afw_rank_bound(params, rank, delta)
    if mode == "energy":
        if spec is None or E is None:
            raise OutOfRange("energy mode needs a spectrum and an energy")
        return afw_energy_bound(params, spec, 1, E, delta)
    raise OutOfRange(f"unknown mode {mode!r}")


_SIGMA_YY = np.array(
    [[0, 0, 0, -1], [0, 0, 1, 0], [0, 1, 0, 0], [-1, 0, 0, 0]], dtype=complex
)


def concurrence(rho: DensityOperator) -> float:
    if rho.dim != 4:
        raise DimMismatch(f"two-qubit state expected, got dim {rho.dim}")
    m = rho.matrix
    tilde = _SIGMA_YY @ m.conj() @ _SIGMA_YY
    # sqrt(rho) tilde sqrt(rho) is Hermitian, unlike rho @ tilde
    vals, vecs = np.linalg.eigh(m)
    root = (vecs * np.sqrt(np.clip(vals, 0.0, None))) @ vecs.conj().T
    r = np.linalg.eigvalsh(root @ tilde @ root)
    # rounding noise on zero eigenvalues would be amplified by the square root
    r[r < 1e-13 * max(r[-1], 1e-300)] = 0.0
    lam = np.sqrt(r)[::-1]
    return float(max(0.0, lam[0] - lam[1] - lam[2] - lam[3]))


def wootters_eof(rho: DensityOperator) -> float:
    """Entanglement of formation of a two-qubit state, in nats."""
    c = min(concurrence(rho), 1.0)
    return h2(0.5 * (1.0 + math.sqrt(max(0.0, 1.0 - c * c))))


MI_MODES = ("rank_one_sided", "rank_two_sided", "energy_commuting", "energy_classical_oscillator")


def mi_bound(
    mode: str,
    eps: float,
    *,
    rank: int | None = None,
    rank_sigma: int | None = None,
    spec: SpectrumSequence | None = None,
    E: float | None = None,
    offset: float = 0.0,
):
    """Continuity bounds for the mutual information I(A1:A2).

    rank_one_sided
        2 eps ln rank + 2 g(eps) for commuting pairs.
    rank_two_sided
        ``(lower, upper)`` magnitudes using ``rank_sigma`` and ``rank``.
    energy_commuting
        2 eps F((E - offset)/eps) + 2 g(eps); ``offset`` is the optional
        refinement from :func:`qcontinuity.afw.refined_energy_offset`.
    energy_classical_oscillator
        eps g(E/eps) + 2 g(eps) for classical states of two oscillators
        (``spec`` defaults to the number operator).
    """
    eps = _eps(eps)
    if mode == "rank_one_sided":
        if rank is None:
            raise OutOfRange("rank mode needs a rank")
        return afw_rank_bound(KNOWN_CLASSES["mutual_information"], rank, eps)
    if mode == "rank_two_sided":
        if rank is None or rank_sigma is None:
            raise OutOfRange("two-sided rank mode needs rank and rank_sigma")
        p = KNOWN_CLASSES["mutual_information"]
        return afw_rank_bound(p, rank_sigma, eps), afw_rank_bound(p, rank, eps)
    if mode == "energy_commuting":
        if spec is None or E is None:
            raise OutOfRange("energy mode needs a spectrum and an energy")
        return afw_energy_bound(KNOWN_CLASSES["mutual_information"], spec, 1, E, eps, offset=offset)
    if mode == "energy_classical_oscillator":
        if E is None:
            raise OutOfRange("energy mode needs an energy")
        spec = spec if spec is not None else SpectrumSequence.arithmetic(1.0)
        return afw_energy_bound(KNOWN_CLASSES["mutual_information_separable"], spec, 1, E, eps)
    raise OutOfRange(f"unknown mode {mode!r}; choose from {MI_MODES}")
