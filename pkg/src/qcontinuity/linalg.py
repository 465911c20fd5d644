"""Dense Hermitian linear algebra and state-level primitives.

All entropies are in nats. Eigenvalues are reported in non-increasing order;
ties keep the original (ascending) index order, so bases may differ between
runs only inside degenerate eigenspaces and spectra never do.
"""

from __future__ import annotations

from functools import cached_property
from typing import Sequence

import numpy as np

from .errors import DimMismatch, InvalidRank, InvalidState, NonHermitian

TOL_HERM = 1e-12
TOL_TRACE = 1e-10
TOL_NEG = 1e-12
RANK_TOL = 1e-10


def _sort_desc(values: np.ndarray) -> np.ndarray:
    return np.argsort(-values, kind="stable")


def as_hermitian(matrix, tol: float = TOL_HERM) -> np.ndarray:
    """Return ``matrix`` as a complex square array after checking hermiticity.

    The returned array is symmetrised, ``(M + M^dagger) / 2``, so downstream
    eigensolvers see an exactly Hermitian input.
    """
    if isinstance(matrix, DensityOperator):
        return matrix.matrix
    m = np.asarray(matrix, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise NonHermitian(f"expected a square matrix, got shape {m.shape}")
    dev = np.max(np.abs(m - m.conj().T)) if m.size else 0.0
    if dev > tol:
        raise NonHermitian(f"max |M - M^dagger| = {dev:.3e} exceeds {tol:.0e}")
    return 0.5 * (m + m.conj().T)


def eigendecompose(matrix) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (non-increasing) and the matching orthonormal eigenvectors.

    Eigenvectors are the columns of the second return value.
    """
    if isinstance(matrix, DensityOperator):
        return matrix.eigenvalues, matrix.eigenvectors
    m = as_hermitian(matrix)
    vals, vecs = np.linalg.eigh(m)
    order = _sort_desc(vals)
    return vals[order], vecs[:, order]


def spectral_entropy(values) -> float:
    """Sum of eta(x) = -x ln x over ``values`` with eta(0) = 0."""
    v = np.asarray(values, dtype=float)
    v = v[v > 0]
    return float(-np.sum(v * np.log(v)))


class DensityOperator:
    """A validated density matrix with a lazily cached eigensystem.

    States that are diagonal in the computational basis can be built with
    :meth:`from_diagonal`; they keep only the probability vector and build the
    full matrix on demand, which lets Gibbs-type states with thousands of
    levels stay cheap.
    """

    def __init__(self, matrix, *, validate: bool = True):
        m = np.asarray(matrix, dtype=complex)
        if validate:
            m = as_hermitian(m)
            tr = np.trace(m).real
            if abs(tr - 1.0) > TOL_TRACE:
                raise InvalidState(f"trace {tr:.12f} differs from 1")
        self._matrix = m
        self._diag = None
        if validate and m.size:
            vals = np.linalg.eigvalsh(m)[::-1]
            if vals[-1] < -TOL_NEG:
                raise InvalidState(f"negative eigenvalue {vals[-1]:.3e}")
            self.__dict__["eigenvalues"] = np.clip(vals, 0.0, 1.0)

    @classmethod
    def from_diagonal(cls, probs, *, validate: bool = True) -> "DensityOperator":
        p = np.asarray(probs, dtype=float).copy()
        if p.ndim != 1 or p.size == 0:
            raise InvalidState("diagonal must be a non-empty vector")
        if validate:
            if np.min(p) < -TOL_NEG:
                raise InvalidState(f"negative probability {np.min(p):.3e}")
            if abs(p.sum() - 1.0) > TOL_TRACE:
                raise InvalidState(f"probabilities sum to {p.sum():.12f}")
        p = np.clip(p, 0.0, 1.0)
        obj = cls.__new__(cls)
        obj._matrix = None
        obj._diag = p
        return obj

    @classmethod
    def from_vector(cls, psi) -> "DensityOperator":
        v = np.asarray(psi, dtype=complex).ravel()
        nrm = np.linalg.norm(v)
        if nrm == 0:
            raise InvalidState("zero vector")
        v = v / nrm
        return cls(np.outer(v, v.conj()))

    @classmethod
    def from_spectrum(cls, probs, basis) -> "DensityOperator":
        """State with eigenvalues ``probs`` on the columns of ``basis``."""
        p = np.asarray(probs, dtype=float)
        u = np.asarray(basis, dtype=complex)
        if u.shape != (p.size, p.size):
            raise DimMismatch(f"basis shape {u.shape} vs {p.size} eigenvalues")
        return cls((u * p) @ u.conj().T)

    @property
    def dim(self) -> int:
        return self._diag.size if self._diag is not None else self._matrix.shape[0]

    @property
    def is_diagonal(self) -> bool:
        return self._diag is not None

    @property
    def diagonal(self) -> np.ndarray:
        if self._diag is not None:
            return self._diag
        return np.diag(self._matrix).real.copy()

    @property
    def matrix(self) -> np.ndarray:
        if self._matrix is None:
            self._matrix = np.diag(self._diag).astype(complex)
        return self._matrix

    @cached_property
    def _eigensystem(self) -> tuple[np.ndarray, np.ndarray]:
        if self._diag is not None:
            order = _sort_desc(self._diag)
            vecs = np.eye(self.dim, dtype=complex)[:, order]
            return self._diag[order], vecs
        vals, vecs = np.linalg.eigh(self._matrix)
        order = _sort_desc(vals)
        vals = vals[order]
        vals = np.where((vals < 0) & (vals >= -TOL_NEG), 0.0, vals)
        return np.clip(vals, 0.0, 1.0), vecs[:, order]

    @cached_property
    def eigenvalues(self) -> np.ndarray:
        if self._diag is not None:
            return np.sort(self._diag)[::-1].copy()
        if "_eigensystem" in self.__dict__:
            return self._eigensystem[0]
        # eigenvalues alone are an order of magnitude cheaper than eigh
        vals = np.linalg.eigvalsh(self._matrix)[::-1]
        vals = np.where((vals < 0) & (vals >= -TOL_NEG), 0.0, vals)
        return np.clip(vals, 0.0, 1.0)

    @property
    def eigenvectors(self) -> np.ndarray:
        return self._eigensystem[1]

    @property
    def rank(self) -> int:
        return int(np.count_nonzero(self.eigenvalues > RANK_TOL))

    def entropy(self) -> float:
        return spectral_entropy(self.eigenvalues)

    def expectation(self, operator) -> float:
        """Tr(A rho) for a Hermitian A given as a matrix or as a diagonal."""
        a = np.asarray(operator)
        if a.ndim == 1:
            if a.size != self.dim:
                raise DimMismatch(f"operator length {a.size} vs dim {self.dim}")
            return float(np.dot(a.real, self.diagonal))
        if a.shape != (self.dim, self.dim):
            raise DimMismatch(f"operator shape {a.shape} vs dim {self.dim}")
        return float(np.real(np.trace(a @ self.matrix)))

    def __repr__(self) -> str:
        kind = "diagonal" if self.is_diagonal else "dense"
        return f"DensityOperator(dim={self.dim}, {kind}, rank={self.rank})"


def _check_same_dim(rho: DensityOperator, sigma: DensityOperator) -> None:
    if rho.dim != sigma.dim:
        raise DimMismatch(f"dimensions differ: {rho.dim} vs {sigma.dim}")


def von_neumann_entropy(rho) -> float:
    if not isinstance(rho, DensityOperator):
        rho = DensityOperator(rho)
    return rho.entropy()


def trace_norm(matrix) -> float:
    vals = np.linalg.eigvalsh(as_hermitian(matrix, tol=1e-9))
    return float(np.sum(np.abs(vals)))


def trace_distance(rho: DensityOperator, sigma: DensityOperator) -> float:
    """Half the trace norm of ``rho - sigma``."""
    _check_same_dim(rho, sigma)
    if rho.is_diagonal and sigma.is_diagonal:
        return float(0.5 * np.sum(np.abs(rho.diagonal - sigma.diagonal)))
    vals = np.linalg.eigvalsh(rho.matrix - sigma.matrix)
    return float(min(1.0, 0.5 * np.sum(np.abs(vals))))


def positive_part(matrix) -> np.ndarray:
    """[M]_+, the projection of Hermitian M onto its positive eigenspace."""
    vals, vecs = eigendecompose(matrix)
    pos = np.clip(vals, 0.0, None)
    return (vecs * pos) @ vecs.conj().T


def mirsky_rearrange(rho: DensityOperator, sigma: DensityOperator) -> DensityOperator:
    """Place the sorted spectrum of ``sigma`` on the sorted eigenbasis of ``rho``.

    The result commutes with ``rho``, has the spectrum of ``sigma`` and is no
    farther from ``rho`` in trace distance than ``sigma`` is.
    """
    _check_same_dim(rho, sigma)
    if rho.is_diagonal:
        order = _sort_desc(rho.diagonal)
        out = np.empty(rho.dim)
        out[order] = sigma.eigenvalues
        return DensityOperator.from_diagonal(out, validate=False)
    return DensityOperator(
        (rho.eigenvectors * sigma.eigenvalues) @ rho.eigenvectors.conj().T,
        validate=False,
    )


def compress_to_support(sigma: DensityOperator, basis, n: int) -> DensityOperator:
    """Fold a state diagonal in ``basis`` onto the first ``n`` basis vectors.

    Entry ``j*n + k`` of the diagonal (in ``basis``) is moved onto vector ``k``,
    which is the action of the channel built from the partial isometries
    |phi_k><phi_{k + n j}|. The output never has more entropy than ``sigma``.
    """
    u = np.asarray(basis, dtype=complex)
    d = sigma.dim
    if u.shape != (d, d):
        raise DimMismatch(f"basis shape {u.shape} vs state dim {d}")
    if not 1 <= n <= d:
        raise InvalidRank(f"rank {n} outside [1, {d}]")
    in_basis = u.conj().T @ sigma.matrix @ u
    off = in_basis - np.diag(np.diag(in_basis))
    if off.size and np.max(np.abs(off)) > 1e-9:
        raise DimMismatch("state is not diagonal in the supplied basis")
    diag = np.diag(in_basis).real
    folded = np.zeros(d)
    for j in range(0, d, n):
        chunk = diag[j:j + n]
        folded[: chunk.size] += chunk
    return DensityOperator((u * folded) @ u.conj().T, validate=False)


def partial_trace(matrix, dims: Sequence[int], keep: Sequence[int]) -> np.ndarray:
    """Reduced matrix on the subsystems listed in ``keep`` (0-based)."""
    m = matrix.matrix if isinstance(matrix, DensityOperator) else np.asarray(matrix)
    dims = list(dims)
    n = len(dims)
    total = int(np.prod(dims))
    if m.shape != (total, total):
        raise DimMismatch(f"matrix shape {m.shape} vs subsystem dims {dims}")
    keep = sorted(keep)
    traced = [i for i in range(n) if i not in keep]
    t = m.reshape(dims + dims)
    for count, axis in enumerate(traced):
        ax = axis - count
        t = np.trace(t, axis1=ax, axis2=ax + t.ndim // 2)
    dk = int(np.prod([dims[i] for i in keep])) if keep else 1
    return t.reshape(dk, dk)


def reduced_state(rho: DensityOperator, dims: Sequence[int], keep: Sequence[int]) -> DensityOperator:
    return DensityOperator(partial_trace(rho, dims, keep), validate=False)
