"""Quasi-classical Alicki-Fannes-Winter machinery.

States are mixtures ``rho = sum_x mu(x) omega(x)`` of a fixed family of states
``omega``. Given two representing measures, the Jordan decomposition of
``mu - nu`` yields the states ``tau_plus`` and ``tau_minus`` with
``eps * tau_plus <= rho`` and ``eps * tau_minus <= sigma``; the generic bounds
below are the closed-form right-hand sides obtained from that construction.
Only finitely supported measures are handled.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Hashable, Mapping, Sequence

import numpy as np

from .errors import (
    BasisMismatch,
    ConstraintViolated,
    DominationFailure,
    EqualMeasures,
    InvalidState,
    LabelMismatch,
    OutOfRange,
)
from .hamiltonians import F_multi, SpectrumSequence, g
from .linalg import DensityOperator, partial_trace, positive_part


@dataclass
class QuasiClassicalEnsemble:
    """Finite ensemble ``{mu(x), omega(x)}`` over labelled points."""

    points: tuple
    weights: np.ndarray
    state_map: Mapping[Hashable, DensityOperator] = field(repr=False)

    def __post_init__(self):
        self.points = tuple(self.points)
        self.weights = np.asarray(self.weights, dtype=float)
        if self.weights.shape != (len(self.points),):
            raise LabelMismatch("one weight per point is required")
        if len(set(self.points)) != len(self.points):
            raise LabelMismatch("duplicate points")
        if np.any(self.weights < 0) or abs(self.weights.sum() - 1.0) > 1e-12:
            raise InvalidState("weights must be a probability vector")
        missing = [x for x in self.points if x not in self.state_map]
        if missing:
            raise LabelMismatch(f"points without a state: {missing[:3]}")
        dims = {self.state_map[x].dim for x in self.points}
        if len(dims) > 1:
            raise InvalidState(f"states of different dimensions {sorted(dims)}")
        self._state = None

    @property
    def measure(self) -> dict:
        return dict(zip(self.points, self.weights))

    def state(self) -> DensityOperator:
        if self._state is None:
            self._state = _assemble(self.state_map, self.measure)
        return self._state


def _assemble(state_map, measure: Mapping) -> DensityOperator:
    acc = None
    for x, w in measure.items():
        if w == 0:
            continue
        m = state_map[x].matrix
        acc = w * m if acc is None else acc + w * m
    return DensityOperator(acc)


def _aligned(mu, nu) -> tuple[list | None, np.ndarray, np.ndarray]:
    if isinstance(mu, Mapping) and isinstance(nu, Mapping):
        labels = list(mu)
        labels += [x for x in nu if x not in mu]
        a = np.array([mu.get(x, 0.0) for x in labels], dtype=float)
        b = np.array([nu.get(x, 0.0) for x in labels], dtype=float)
        return labels, a, b
    if isinstance(mu, Mapping) or isinstance(nu, Mapping):
        raise LabelMismatch("cannot compare a labelled measure with a bare vector")
    a = np.asarray(mu, dtype=float)
    b = np.asarray(nu, dtype=float)
    if a.shape != b.shape:
        raise LabelMismatch(f"label sets differ in size: {a.shape} vs {b.shape}")
    return None, a, b


def tv_distance(mu, nu) -> float:
    """Total variation distance of two finitely supported measures.

    Accepts either two equal-length weight vectors or two ``{label: weight}``
    mappings (missing labels count as zero weight).
    """
    _, a, b = _aligned(mu, nu)
    return float(min(1.0, 0.5 * np.sum(np.abs(a - b))))


def jordan_decompose(mu, nu):
    """Return ``(eps, nu_plus, nu_minus)`` with ``eps * nu_pm = [mu - nu]_pm``.

    The outputs mirror the input form: vectors for vectors, mappings for
    mappings.
    """
    labels, a, b = _aligned(mu, nu)
    diff = a - b
    pos = np.clip(diff, 0.0, None)
    neg = np.clip(-diff, 0.0, None)
    eps = 0.5 * (pos.sum() + neg.sum())
    if eps <= 0.0:
        raise EqualMeasures("measures coincide; the decomposition is undefined")
    nu_plus, nu_minus = pos / eps, neg / eps
    if labels is not None:
        return float(eps), dict(zip(labels, nu_plus)), dict(zip(labels, nu_minus))
    return float(eps), nu_plus, nu_minus


def min_domination_gap(big: DensityOperator, small: DensityOperator, eps: float) -> float:
    """Smallest eigenvalue of ``big - eps * small``."""
    return float(np.linalg.eigvalsh(big.matrix - eps * small.matrix)[0])


def tau_states(ens_rho: QuasiClassicalEnsemble, ens_sigma: QuasiClassicalEnsemble, tol: float = 1e-9):
    """``(tau_plus, tau_minus, eps)`` built from the Jordan parts of mu_rho - mu_sigma.

    The operator inequalities ``eps tau_plus <= rho`` and ``eps tau_minus <= sigma``
    are checked; a violation beyond ``tol`` raises :class:`DominationFailure`.
    """
    smap = ens_rho.state_map
    if ens_sigma.state_map is not smap:
        shared = set(smap) & set(ens_sigma.state_map)
        if any(smap[x] is not ens_sigma.state_map[x] for x in shared) or not (
            set(ens_rho.points) | set(ens_sigma.points)
        ) <= shared:
            raise LabelMismatch("ensembles must share the same state map")
    eps, nu_plus, nu_minus = jordan_decompose(ens_rho.measure, ens_sigma.measure)
    tau_plus = _assemble(smap, nu_plus)
    tau_minus = _assemble(smap, nu_minus)
    rho, sigma = ens_rho.state(), ens_sigma.state()
    for big, small, name in ((rho, tau_plus, "rho - eps tau_plus"), (sigma, tau_minus, "sigma - eps tau_minus")):
        gap = min_domination_gap(big, small, eps)
        if gap < -tol:
            raise DominationFailure(f"{name} has eigenvalue {gap:.3e}")
    return tau_plus, tau_minus, eps


def omega_star_residual(rho, sigma, tau_plus, tau_minus, eps: float) -> float:
    """Max-norm gap between the two expressions of the common mixture omega*."""
    left = (rho.matrix + eps * tau_minus.matrix) / (1.0 + eps)
    right = (sigma.matrix + eps * tau_plus.matrix) / (1.0 + eps)
    return float(np.max(np.abs(left - right)))


@dataclass(frozen=True)
class LAAClassParams:
    """Parameters of a class of locally almost affine functions.

    ``C = c_minus + c_plus`` bounds the function by the marginal entropies of
    the first ``m`` of ``n`` subsystems; ``D = d_minus + d_plus`` scales the
    binary-entropy deficits in the weak concavity/convexity inequalities.
    Unspecified splits default to ``c_plus = C`` and ``d_plus = D``.
    """

    C: float
    D: float
    c_minus: float | None = None
    c_plus: float | None = None
    d_minus: float | None = None
    d_plus: float | None = None
    m: int = 1
    n: int = 1

    def __post_init__(self):
        for name, total, lo, hi in (
            ("c", self.C, self.c_minus, self.c_plus),
            ("d", self.D, self.d_minus, self.d_plus),
        ):
            if total < 0:
                raise OutOfRange(f"{name.upper()} must be nonnegative")
            if lo is None and hi is None:
                lo, hi = 0.0, float(total)
            elif lo is None:
                lo = total - hi
            elif hi is None:
                hi = total - lo
            if lo < 0 or hi < 0 or abs(lo + hi - total) > 1e-12:
                raise OutOfRange(f"{name}_minus + {name}_plus must equal {name.upper()}")
            object.__setattr__(self, f"{name}_minus", float(lo))
            object.__setattr__(self, f"{name}_plus", float(hi))
        if not 1 <= self.m <= self.n:
            raise OutOfRange(f"need 1 <= m <= n, got m={self.m}, n={self.n}")

    def a(self, p: float) -> float:
        from .hamiltonians import h2

        return self.d_minus * h2(p)

    def b(self, p: float) -> float:
        from .hamiltonians import h2

        return self.d_plus * h2(p)


# Class memberships of the characteristics handled by the toolkit.
KNOWN_CLASSES = {
    "entropy": LAAClassParams(1, 1, m=1, n=1),
    "conditional_entropy": LAAClassParams(2, 1, m=1, n=2),
    "conditional_entropy_qc": LAAClassParams(1, 1, m=1, n=2),
    "mutual_information": LAAClassParams(2, 2, d_minus=1, d_plus=1, m=1, n=2),
    "mutual_information_separable": LAAClassParams(1, 2, d_minus=1, d_plus=1, m=1, n=2),
    "equivocation": LAAClassParams(1, 1, m=1, n=2),
}


def _check_eps(eps: float) -> float:
    eps = float(eps)
    if not 0.0 <= eps <= 1.0:
        raise OutOfRange(f"epsilon {eps} outside [0, 1]")
    return eps


def afw_rank_bound(params: LAAClassParams, d_m: int, eps: float) -> float:
    """C eps ln d_m + D g(eps) for states whose marginal ranks multiply to d_m."""
    eps = _check_eps(eps)
    if d_m < 1:
        raise OutOfRange(f"rank product must be >= 1, got {d_m}")
    if eps == 0.0:
        return 0.0
    return params.C * eps * math.log(d_m) + params.D * g(eps)


def afw_energy_bound(
    params: LAAClassParams,
    specs: SpectrumSequence | Sequence[SpectrumSequence],
    m: int,
    E: float,
    eps: float,
    offset: float = 0.0,
) -> float:
    """C eps F_m((m E - offset) / eps) + D g(eps).

    ``specs`` is either one spectrum used for all ``m`` subsystems or a list of
    ``m`` spectra. ``offset`` is the refinement term available for commuting
    states (see :func:`refined_energy_offset`).
    """
    eps = _check_eps(eps)
    if E < 0:
        raise OutOfRange(f"energy {E} must be nonnegative")
    if eps == 0.0:
        return 0.0
    if isinstance(specs, SpectrumSequence):
        specs = [specs] * m
    specs = list(specs)
    if len(specs) != m:
        raise OutOfRange(f"expected {m} spectra, got {len(specs)}")
    budget = m * E - offset
    if budget < -1e-9:
        raise ConstraintViolated(f"offset {offset} exceeds the energy budget {m * E}")
    return params.C * eps * F_multi(specs, max(budget, 0.0) / eps) + params.D * g(eps)


def refined_energy_offset(rho: DensityOperator, local_energies, dims: Sequence[int], eps: float) -> float:
    """sum_k Tr H_k <[rho - eps I]_+>_{A_k} over the first ``m`` subsystems.

    ``local_energies[k]`` lists the diagonal of H_k in the local basis, and
    ``dims`` gives every subsystem dimension (including unconstrained ones).
    """
    dims = [int(d) for d in dims]
    if rho.dim != int(np.prod(dims)):
        raise BasisMismatch(f"state dim {rho.dim} does not match subsystem dims {dims}")
    local_energies = [np.asarray(e, dtype=float) for e in local_energies]
    if len(local_energies) > len(dims) or any(e.size != dims[k] for k, e in enumerate(local_energies)):
        raise BasisMismatch("each local Hamiltonian must match its subsystem dimension")
    eps = float(eps)
    total = 0.0
    if rho.is_diagonal:
        t = np.clip(rho.diagonal - eps, 0.0, None).reshape(dims)
        for k, e in enumerate(local_energies):
            axes = tuple(i for i in range(len(dims)) if i != k)
            total += float(np.dot(e, t.sum(axis=axes)))
        return total
    pp = positive_part(rho.matrix - eps * np.eye(rho.dim))
    for k, e in enumerate(local_energies):
        marg = partial_trace(pp, dims, [k])
        total += float(np.dot(e, np.diag(marg).real))
    return total
