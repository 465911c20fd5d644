"""Hamiltonian spectra, Gibbs states and the constrained entropy maximum F.

``F(spec, E)`` is the largest entropy of a state whose mean energy does not
exceed ``E``; it is attained at the Gibbs state with inverse temperature
``beta(E)``. Spectra are dimensionless and grounded by the caller.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np
from scipy.optimize import brentq
from scipy.special import logsumexp

from .errors import (
    BracketFailure,
    EnergyBelowGround,
    NegativeInput,
    OutOfRange,
)
from .linalg import DensityOperator, spectral_entropy

N_MAX = 2**20
BETA_MIN = 1e-8
BETA_MAX = 1e300


def g(x: float) -> float:
    """(x+1) ln(x+1) - x ln x: entropy of a thermal oscillator with mean x."""
    x = float(x)
    if x < 0:
        raise NegativeInput(f"g is defined for x >= 0, got {x}")
    if x == 0.0:
        return 0.0
    return math.log1p(x) + x * math.log1p(1.0 / x)


def binary_entropy(p: float) -> float:
    p = float(p)
    if not 0.0 <= p <= 1.0:
        raise OutOfRange(f"probability {p} outside [0, 1]")
    if p == 0.0 or p == 1.0:
        return 0.0
    return -p * math.log(p) - (1.0 - p) * math.log1p(-p)


h2 = binary_entropy


@dataclass(frozen=True)
class SpectrumSequence:
    """Nondecreasing nonnegative energy levels E_0 <= E_1 <= ...

    Build instances with :meth:`arithmetic`, :meth:`explicit` or
    :meth:`generator`. Explicit spectra are finite; the other kinds are
    unbounded and get truncated adaptively when needed.
    """

    kind: str
    step: float = 1.0
    values: tuple = ()
    func: Callable | None = field(default=None, compare=True)
    name: str = ""
    multiplicity: int = 1

    @classmethod
    def arithmetic(cls, step: float = 1.0) -> "SpectrumSequence":
        if not step > 0:
            raise OutOfRange(f"arithmetic step must be positive, got {step}")
        return cls(kind="arithmetic", step=float(step))

    @classmethod
    def explicit(cls, values: Sequence[float]) -> "SpectrumSequence":
        v = tuple(float(x) for x in values)
        if not v:
            raise OutOfRange("explicit spectrum needs at least one level")
        if any(b < a for a, b in zip(v, v[1:])):
            raise OutOfRange("explicit spectrum must be nondecreasing")
        if v[0] < 0:
            raise OutOfRange("explicit spectrum must be nonnegative")
        return cls(kind="explicit", values=v)

    @classmethod
    def generator(cls, func: Callable, name: str = "", ground_multiplicity: int = 1) -> "SpectrumSequence":
        """Unbounded spectrum E_k = func(k); ``func`` must accept an index array."""
        return cls(kind="generator", func=func, name=name, multiplicity=int(ground_multiplicity))

    @property
    def is_finite(self) -> bool:
        return self.kind == "explicit"

    def __len__(self) -> int:
        if not self.is_finite:
            raise TypeError("unbounded spectrum has no length")
        return len(self.values)

    def levels(self, n: int) -> np.ndarray:
        """The first ``n`` levels (all of them for a shorter explicit spectrum)."""
        if self.kind == "arithmetic":
            return self.step * np.arange(n, dtype=float)
        if self.kind == "explicit":
            return np.asarray(self.values[:n], dtype=float)
        out = np.asarray(self.func(np.arange(n)), dtype=float)
        return np.broadcast_to(out, (n,)).copy()

    @property
    def ground_energy(self) -> float:
        return float(self.levels(1)[0])

    @property
    def ground_multiplicity(self) -> int:
        if self.kind == "explicit":
            v = np.asarray(self.values)
            return int(np.count_nonzero(v <= v[0] + 1e-12))
        return self.multiplicity

    def to_dict(self) -> dict:
        if self.kind == "arithmetic":
            return {"kind": "arithmetic", "step": self.step}
        if self.kind == "explicit":
            return {"kind": "explicit", "values": list(self.values)}
        raise TypeError("generator spectra have no file representation")

    @classmethod
    def from_dict(cls, data: dict) -> "SpectrumSequence":
        kind = data.get("kind")
        if kind == "arithmetic":
            return cls.arithmetic(data.get("step", 1.0))
        if kind == "explicit":
            return cls.explicit(data["values"])
        raise OutOfRange(f"unknown spectrum kind {kind!r}")


@dataclass(frozen=True)
class GibbsSolution:
    energy: float
    beta: float
    truncation: int
    probabilities: np.ndarray = field(repr=False)
    F_value: float
    tail_bound: float

    def state(self) -> DensityOperator:
        return DensityOperator.from_diagonal(self.probabilities, validate=False)


def _gibbs(levels: np.ndarray, beta: float) -> tuple[np.ndarray, float]:
    w = -beta * (levels - levels[0])
    p = np.exp(w - logsumexp(w))
    return p, float(np.dot(p, levels))


def _partial_sums(levels: np.ndarray, beta: float, e0: float) -> tuple[np.ndarray, np.ndarray]:
    w = np.exp(-beta * (levels - e0))
    return np.cumsum(w), np.cumsum(w * (levels - e0))


def _truncate(spec: SpectrumSequence, beta: float, tol: float, with_energy: bool) -> int:
    if spec.is_finite:
        return len(spec)
    e0 = spec.ground_energy
    n = 16
    while True:
        if 2 * n > N_MAX:
            raise BracketFailure(
                f"no truncation N <= {N_MAX} reaches tail tolerance {tol:.1e} at beta={beta:.3e}"
            )
        z, ez = _partial_sums(spec.levels(2 * n), beta, e0)
        ok = z[-1] - z[n - 1] < tol * z[n - 1]
        if with_energy:
            ok = ok and ez[-1] - ez[n - 1] < tol * max(1.0, ez[n - 1] / z[n - 1]) * z[n - 1]
        if ok:
            break
        n *= 2
    # smallest N whose tail (measured against the doubled sum) is below tol
    lo, hi = 1, 2 * n
    while lo < hi:
        mid = (lo + hi) // 2
        good = z[-1] - z[mid - 1] < tol * z[mid - 1]
        if with_energy:
            scale = max(1.0, ez[mid - 1] / z[mid - 1])
            good = good and ez[-1] - ez[mid - 1] < tol * scale * z[mid - 1]
        if good:
            hi = mid
        else:
            lo = mid + 1
    return lo


def adaptive_truncation(spec: SpectrumSequence, beta_min: float, tol: float) -> int:
    """Number of levels N whose discarded Boltzmann weight at ``beta_min`` is
    below ``tol`` times the retained partition sum.

    Doubling stops once the last doubling changes the partition sum by less
    than ``tol`` (relative); the minimal N is then located by bisection.
    """
    if not beta_min > 0:
        raise OutOfRange(f"beta_min must be positive, got {beta_min}")
    return _truncate(spec, beta_min, tol, with_energy=False)


def _bracket(mean_at, E: float, start: float) -> tuple[float, float]:
    lo = hi = start
    while mean_at(hi) >= E:
        hi *= 2.0
        if hi > BETA_MAX:
            raise BracketFailure(f"energy {E} too close to the ground level")
    while mean_at(lo) <= E:
        lo /= 2.0
        if lo < BETA_MIN:
            raise BracketFailure(
                f"mean energy stays below {E} at beta={BETA_MIN:.0e}; spectrum grows too slowly"
            )
    return lo, hi


def _uniform_mean(spec: SpectrumSequence) -> float:
    return float(np.mean(spec.values))


def solve_beta(spec: SpectrumSequence, E: float, tol: float = 1e-10) -> GibbsSolution:
    """Gibbs distribution with mean energy ``E`` (residual at most ``tol``)."""
    E = float(E)
    e0 = spec.ground_energy
    if E <= e0:
        raise EnergyBelowGround(f"energy {E} is not above the ground level {e0}")
    tail_tol = 1e-3 * tol / max(1.0, E)

    if spec.kind == "arithmetic":
        x = E / spec.step
        beta = math.log1p(1.0 / x) / spec.step
        r = x / (x + 1.0)
        n = max(1, math.ceil(math.log(tail_tol) / math.log(r)))
        n = min(n, N_MAX)
        p = (1.0 - r) * r ** np.arange(n, dtype=float)
        tail = float(r**n)
        p /= p.sum()
        return GibbsSolution(E, beta, n, p, g(x), tail)

    if spec.is_finite and E >= _uniform_mean(spec):
        raise BracketFailure(
            f"energy {E} is at or above the uniform mean {_uniform_mean(spec):.6g}; "
            "the energy constraint is inactive"
        )

    def levels_for(beta: float) -> np.ndarray:
        return spec.levels(_truncate(spec, beta, tail_tol, with_energy=True))

    def mean_at(beta: float) -> float:
        return _gibbs(levels_for(beta), beta)[1]

    lo, hi = _bracket(mean_at, E, 1.0 / max(E - e0, 1e-300))
    levels = levels_for(lo)
    beta = brentq(lambda b: _gibbs(levels, b)[1] - E, lo, hi, xtol=1e-300, rtol=4 * np.finfo(float).eps, maxiter=500)
    p, mean = _gibbs(levels, beta)
    if abs(mean - E) > tol:
        raise BracketFailure(f"mean-energy residual {abs(mean - E):.2e} exceeds {tol:.1e}")
    if spec.is_finite:
        tail = 0.0
    else:
        z_in = float(np.sum(np.exp(-beta * (levels - e0))))
        tail = float(np.exp(-beta * (spec.levels(2 * levels.size)[levels.size:] - e0)).sum() / z_in)
    return GibbsSolution(E, float(beta), levels.size, p, spectral_entropy(p), tail)


def gibbs_state(spec: SpectrumSequence, E: float, tol: float = 1e-10) -> DensityOperator:
    return solve_beta(spec, E, tol).state()


@lru_cache(maxsize=8192)
def _F_cached(spec: SpectrumSequence, E: float) -> float:
    e0 = spec.ground_energy
    if E < e0 - 1e-12:
        raise EnergyBelowGround(f"energy {E} below the ground level {e0}")
    if E <= e0:
        return math.log(spec.ground_multiplicity)
    if spec.kind == "arithmetic":
        return g((E - e0) / spec.step)
    if spec.is_finite and E >= _uniform_mean(spec):
        return math.log(len(spec))
    return solve_beta(spec, E, tol=1e-10 * max(1.0, E)).F_value


def F(spec: SpectrumSequence, E: float) -> float:
    """Maximal entropy under the mean-energy constraint ``Tr H rho <= E``."""
    return _F_cached(spec, float(E))


def F_multi(specs: Sequence[SpectrumSequence], E: float) -> float:
    """Maximal entropy of a composite system under a total-energy cap.

    The Hamiltonian is the sum of the local ones. Identical factors use
    ``m F(spec, E/m)``; distinct ones share a single inverse temperature.
    """
    specs = list(specs)
    if not specs:
        raise OutOfRange("need at least one spectrum")
    for s in specs:
        if s.ground_energy != 0.0:
            raise OutOfRange("spectra must be grounded at zero")
    m = len(specs)
    E = float(E)
    if m == 1:
        return F(specs[0], E)
    if all(s == specs[0] for s in specs):
        return m * F(specs[0], E / m)
    if E < 0:
        raise EnergyBelowGround(f"energy {E} below zero")
    if E == 0:
        return float(sum(math.log(s.ground_multiplicity) for s in specs))
    if all(s.is_finite for s in specs) and E >= sum(_uniform_mean(s) for s in specs):
        return float(sum(math.log(len(s)) for s in specs))
    return _joint_gibbs(tuple(specs), E, 1e-10 * max(1.0, E))[1]


def _joint_gibbs(specs: tuple, E: float, tol: float) -> tuple[float, float]:
    tail_tol = 1e-3 * tol / max(1.0, E)

    def levels_for(beta: float) -> list[np.ndarray]:
        return [s.levels(_truncate(s, beta, tail_tol, with_energy=True)) for s in specs]

    def total_mean(levels: list[np.ndarray], beta: float) -> float:
        return sum(_gibbs(lv, beta)[1] for lv in levels)

    lo, hi = _bracket(lambda b: total_mean(levels_for(b), b), E, 1.0 / E)
    levels = levels_for(lo)
    beta = brentq(lambda b: total_mean(levels, b) - E, lo, hi, xtol=1e-300, rtol=4 * np.finfo(float).eps, maxiter=500)
    ent = sum(spectral_entropy(_gibbs(lv, beta)[0]) for lv in levels)
    return float(beta), float(ent)
