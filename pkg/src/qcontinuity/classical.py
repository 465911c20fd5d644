"""Discrete n-variate distributions and the Shannon-side continuity bounds.

Outcomes of every variable are nonnegative integers. When a spectrum is
attached to the first variable, outcome ``i`` carries energy ``E_i`` (the
i-th level, counting from 0).
"""

from __future__ import annotations

from collections import defaultdict
from typing import Mapping

import numpy as np

from .afw import KNOWN_CLASSES, LAAClassParams, afw_energy_bound, afw_rank_bound
from .bounds import _eps, rank_entropy_bound
from .errors import ArityMismatch, ConstraintViolated, IndexOutOfRange, InvalidState, OutOfRange
from .hamiltonians import SpectrumSequence
from .linalg import spectral_entropy


class JointDistribution:
    """Sparse probability table over integer tuples of length ``arity``."""

    def __init__(self, entries: Mapping[tuple, float], arity: int | None = None):
        table: dict[tuple, float] = {}
        for key, p in entries.items():
            key = (int(key),) if np.isscalar(key) else tuple(int(i) for i in key)
            if key in table:
                raise InvalidState(f"duplicate outcome {key}")
            p = float(p)
            if p < 0:
                raise InvalidState(f"negative probability at {key}")
            if p > 0:
                table[key] = p
        if not table:
            raise InvalidState("empty distribution")
        arities = {len(k) for k in table}
        if len(arities) != 1 or (arity is not None and arities != {arity}):
            raise ArityMismatch(f"outcome tuples of lengths {sorted(arities)}")
        total = sum(table.values())
        if abs(total - 1.0) > 1e-12:
            raise InvalidState(f"probabilities sum to {total:.15f}")
        self.arity = arities.pop()
        self.entries = table

    @classmethod
    def from_rows(cls, rows, arity: int) -> "JointDistribution":
        """Build from ``[i_1, ..., i_n, p]`` rows."""
        table = {}
        for row in rows:
            if len(row) != arity + 1:
                raise ArityMismatch(f"row {row} does not have {arity} indices and a weight")
            key = tuple(int(i) for i in row[:arity])
            if key in table:
                raise InvalidState(f"duplicate outcome {key}")
            table[key] = float(row[-1])
        return cls(table, arity)

    @classmethod
    def from_array(cls, probs) -> "JointDistribution":
        a = np.asarray(probs, dtype=float)
        return cls({tuple(int(i) for i in idx): a[idx] for idx in zip(*np.nonzero(a))}, a.ndim)

    def __len__(self) -> int:
        return len(self.entries)

    def probabilities(self) -> np.ndarray:
        return np.fromiter(self.entries.values(), float, len(self.entries))

    def __repr__(self) -> str:
        return f"JointDistribution(arity={self.arity}, support={len(self.entries)})"


def marginal(p: JointDistribution, k: int) -> dict:
    """Distribution of the k-th variable (1-based) as ``{outcome: prob}``."""
    if not 1 <= k <= p.arity:
        raise IndexOutOfRange(f"variable {k} outside 1..{p.arity}")
    out: dict[int, float] = defaultdict(float)
    for key, w in p.entries.items():
        out[key[k - 1]] += w
    return dict(sorted(out.items()))


def shannon_entropy(p) -> float:
    """Entropy in nats of a distribution given as a mapping, table or vector."""
    if isinstance(p, JointDistribution):
        return spectral_entropy(p.probabilities())
    if isinstance(p, Mapping):
        return spectral_entropy(list(p.values()))
    return spectral_entropy(p)


def equivocation(p: JointDistribution) -> float:
    """H(X1|X2) = H(X1 X2) - H(X2)."""
    if p.arity != 2:
        raise ArityMismatch(f"equivocation needs two variables, got {p.arity}")
    return max(0.0, shannon_entropy(p) - shannon_entropy(marginal(p, 2)))


def total_correlation(p: JointDistribution) -> float:
    """sum_k H(X_k) - H(X_1 ... X_n)."""
    parts = sum(shannon_entropy(marginal(p, k)) for k in range(1, p.arity + 1))
    return max(0.0, parts - shannon_entropy(p))


def tv_distance(p: JointDistribution, q: JointDistribution) -> float:
    """Total variation over the union of supports."""
    if p.arity != q.arity:
        raise ArityMismatch(f"arities differ: {p.arity} vs {q.arity}")
    keys = set(p.entries) | set(q.entries)
    diff = sum(abs(p.entries.get(x, 0.0) - q.entries.get(x, 0.0)) for x in keys)
    return float(min(1.0, 0.5 * diff))


def support_size(p: JointDistribution, k: int = 1) -> int:
    """Number of outcomes of the k-th variable with positive probability."""
    return len(marginal(p, k))


def classical_rank_bound(params: LAAClassParams, d: int, eps: float) -> float:
    """C eps ln d + D g(eps)."""
    return afw_rank_bound(params, d, eps)


def equivocation_rank_bounds(p: JointDistribution, q: JointDistribution, eps: float) -> tuple[float, float]:
    """(lower, upper) magnitudes for H(X1|X2)_p - H(Y1|Y2)_q from marginal support sizes."""
    params = KNOWN_CLASSES["equivocation"]
    return (
        classical_rank_bound(params, support_size(q), eps),
        classical_rank_bound(params, support_size(p), eps),
    )


def first_marginal_energy(p: JointDistribution, spec: SpectrumSequence) -> float:
    """sum_i E_i [p_1]_i."""
    m = marginal(p, 1)
    levels = spec.levels(max(m) + 1)
    return float(sum(levels[i] * w for i, w in m.items()))


def energy_offset(p: JointDistribution, spec: SpectrumSequence, eps: float) -> float:
    """sum_i E_i sum_{rest} [p_{i, rest} - eps]_+."""
    acc: dict[int, float] = defaultdict(float)
    for key, w in p.entries.items():
        if w > eps:
            acc[key[0]] += w - eps
    if not acc:
        return 0.0
    levels = spec.levels(max(acc) + 1)
    return float(sum(levels[i] * w for i, w in acc.items()))


def classical_energy_bound(
    params: LAAClassParams,
    spec: SpectrumSequence,
    E: float,
    eps: float,
    p: JointDistribution | None = None,
) -> float:
    """C eps F_S((E - E_eps(p))/eps) + D g(eps).

    The refinement term E_eps(p) is used only when ``p`` is supplied; ``p``
    must then respect the mean-energy cap on its first variable.
    """
    if spec.ground_energy != 0.0:
        raise OutOfRange("the spectrum must start at 0")
    eps = _eps(eps)
    offset = 0.0
    if p is not None and eps > 0:
        mean = first_marginal_energy(p, spec)
        if mean > E + 1e-9:
            raise ConstraintViolated(f"mean energy {mean:.10g} exceeds E = {E}")
        offset = min(energy_offset(p, spec, eps), E)
    return afw_energy_bound(params, spec, 1, E, eps, offset=offset)


def alhejji_smith_bound(n: int, eps: float) -> float:
    """eps ln(n - 1) + h2(eps) for eps <= 1 - 1/n (outcome alphabet of size n)."""
    return rank_entropy_bound(n, eps)
