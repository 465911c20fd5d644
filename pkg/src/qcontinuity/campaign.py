"""Seeded verification campaigns and tightness sweeps.

A campaign runs a list of scenarios. Each scenario draws one random pair per
trial, measures the quantity a family of bounds is about, and emits one
:class:`BoundReport` per bound. Trial ``i`` of scenario ``s`` always uses the
Philox stream ``(seed, i, index of s)``, so reports do not depend on thread
count or scheduling.
"""

from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import bounds as vb
from .afw import KNOWN_CLASSES, afw_rank_bound, refined_energy_offset
from .classical import (
    alhejji_smith_bound,
    classical_energy_bound,
    classical_rank_bound,
    equivocation,
    equivocation_rank_bounds,
    first_marginal_energy,
    support_size,
    tv_distance as classical_tv,
)
from .conditional import (
    QCEnsembleState,
    eof_bound,
    eof_delta,
    mi_bound,
    mutual_information,
    qc_trace_distance,
    qce_bound,
    qce_value,
    wootters_eof,
)
from .errors import ConfigError, ContinuityError
from .hamiltonians import F, SpectrumSequence, g, h2
from .linalg import DensityOperator, partial_trace, trace_distance
from .oscillator import assemble_classical_state, classical_mi_bound, mean_photon, mixture_tv
from .reports import BoundReport
from . import sampling as smp


def _measured_eps(a, b, dist) -> float:
    eps = dist(a, b)
    return 0.0 if eps < smp.EPS_FLOOR else min(1.0, eps)


def _energy(rho: DensityOperator, levels: np.ndarray) -> float:
    return float(np.dot(levels, rho.diagonal))


# -- scenarios -------------------------------------------------------------
# Each takes (rng, eps_target, params) and returns (inputs, list of reports).


def scenario_entropy(rng, eps_target, params):
    """Energy-capped pairs in general position (no commutation)."""
    spec = params["spec"]
    dim = int(rng.choice(params.get("dims", [8, 16, 32, 64])))
    E = params.get("E", 1.0)
    levels = spec.levels(dim)
    rho = smp.energy_capped_state(rng, levels, E)
    sigma = smp.mix_toward(rho, smp.energy_capped_state(rng, levels, E), eps_target)
    eps = _measured_eps(rho, sigma, trace_distance)
    e_rho, e_sig = _energy(rho, levels), _energy(sigma, levels)
    diff = rho.entropy() - sigma.entropy()
    inputs = {"dim": dim, "eps": eps, "E_rho": e_rho, "E_sigma": e_sig}
    partners = {
        "w-cb-1": vb.winter_energy_bound(spec, max(e_rho, e_sig), eps),
        "aud": vb.audenaert_bound(dim, eps),
    }
    sh = vb.entropy_energy_bound(spec, max(e_rho, e_sig), eps)
    lo, hi = vb.two_sided_energy_bound(spec, e_rho, e_sig, eps)
    refined = vb.refined_entropy_bound(rho, spec, e_rho, eps)
    refined_star = vb.refined_entropy_bound(rho, spec, e_rho, eps, use_lower_offset=True)
    unrefined = vb.entropy_energy_bound(spec, e_rho, eps)
    return [
        BoundReport.check("sh-cb", dict(inputs, E=max(e_rho, e_sig)), sh, abs(diff), partners),
        BoundReport.check("w-cb-2", dict(inputs, E=e_rho), refined, diff, {"sh-cb": unrefined, "w-cb-2-star": refined_star}),
        BoundReport.check("w-cb-2-star", dict(inputs, E=e_rho), refined_star, diff, {"sh-cb": unrefined}),
        BoundReport.two_sided("cor3", inputs, lo, hi, diff),
    ]


def scenario_mixed(rng, eps_target, params):
    """rho energy-capped, sigma of rank <= d; rho is pulled toward sigma."""
    spec = params["spec"]
    dim = int(rng.choice(params.get("dims", [8, 16, 32, 64])))
    d = int(rng.integers(2, min(params.get("max_rank", 8), dim) + 1))
    eps_target = min(eps_target, 1.0 - 1.0 / d)
    levels = spec.levels(dim)
    sigma = smp.arbitrary_state(rng, dim, d)
    rho = smp.mix_toward(sigma, smp.energy_capped_state(rng, levels, params.get("E", 1.0)), eps_target)
    eps = _measured_eps(rho, sigma, trace_distance)
    e_rho = _energy(rho, levels)
    lo, hi = vb.mixed_bound(d, spec, e_rho, eps)
    inputs = {"dim": dim, "d": d, "eps": eps, "E_rho": e_rho}
    return [BoundReport.two_sided("mixed", inputs, lo, hi, rho.entropy() - sigma.entropy())]


def scenario_commuting(rng, eps_target, params):
    """Pairs from :func:`sample_commuting_pair` under rank and energy constraints."""
    spec = params["spec"]
    dim = int(rng.choice(params.get("dims", [8, 16, 32, 64])))
    out = []
    r = int(rng.integers(1, min(params.get("max_rank", 8), dim) + 1))
    rho, sigma, _ = smp.sample_commuting_pair(dim, {"rank": r}, eps_target, rng)
    eps = _measured_eps(rho, sigma, trace_distance)
    diff = rho.entropy() - sigma.entropy()
    inputs = {"dim": dim, "rank": r, "eps": eps}
    out.append(BoundReport.check("afw-rank", inputs, afw_rank_bound(KNOWN_CLASSES["entropy"], r, eps), abs(diff)))
    if r >= 2 and eps <= 1.0 - 1.0 / r:
        out.append(BoundReport.check("rank-cb", inputs, vb.rank_entropy_bound(r, eps), abs(diff)))
    else:
        out.append(BoundReport.not_applicable("rank-cb", inputs, "eps above 1 - 1/rank"))
    E = params.get("E", 1.0)
    rho, sigma, u = smp.sample_commuting_pair(dim, {"energy": (spec, E)}, eps_target, rng)
    eps = _measured_eps(rho, sigma, trace_distance)
    levels = spec.levels(dim)
    e_rho, e_sig = _energy(rho, levels), _energy(sigma, levels)
    diff = rho.entropy() - sigma.entropy()
    inputs = {"dim": dim, "E": E, "eps": eps, "E_rho": e_rho, "E_sigma": e_sig}
    out.append(BoundReport.check("sh-cb-commuting", inputs, vb.entropy_energy_bound(spec, max(e_rho, e_sig), eps), abs(diff)))
    return out


def scenario_qc(rng, eps_target, params):
    """q-c states rho, sigma on A (x) B with diagonal-in-B structure."""
    spec = params["spec"]
    shapes = [(da, k) for da in params.get("dims_a", [2, 4, 8, 16]) for k in (2, 3, 4) if da * k <= 64]
    da, k = shapes[int(rng.integers(len(shapes)))]
    levels = spec.levels(da)
    E = params.get("E", 1.0)

    def draw():
        probs = smp.random_probs(rng, k)
        states = []
        for _ in range(k):
            if rng.random() < 0.3:
                r = int(rng.integers(1, da + 1))
                sub = smp.arbitrary_state(rng, r).matrix
                m = np.zeros((da, da), dtype=complex)
                m[:r, :r] = sub
                states.append(DensityOperator(m, validate=False))
            else:
                states.append(smp.energy_capped_state(rng, levels, E))
        return QCEnsembleState(probs, states)

    rho = draw()
    sigma = smp.mix_toward(rho, draw(), eps_target)
    eps = _measured_eps(rho, sigma, qc_trace_distance)
    e_rho = _energy(rho.reduced_a(), levels)
    e_sig = _energy(sigma.reduced_a(), levels)
    r_rho, r_sig = rho.reduced_a().rank, sigma.reduced_a().rank
    diff = qce_value(rho) - qce_value(sigma)
    inputs = {"dim_a": da, "classes": k, "eps": eps, "E_rho": e_rho, "E_sigma": e_sig, "rank_rho_a": r_rho, "rank_sigma_a": r_sig}
    unrefined = qce_bound("energy", eps, spec=spec, E=e_rho)
    return [
        BoundReport.check("qce-rank", inputs, qce_bound("rank", eps, rank=r_rho), diff),
        BoundReport.two_sided("qce-1++", inputs, qce_bound("rank", eps, rank=r_sig), qce_bound("rank", eps, rank=r_rho), diff),
        BoundReport.check("qce-energy", inputs, qce_bound("energy", eps, spec=spec, E=e_rho, rho=rho), diff, {"unrefined": unrefined}),
        BoundReport.check("qce-2++", inputs, qce_bound("energy", eps, spec=spec, E=max(e_rho, e_sig)), abs(diff)),
    ]


def scenario_mi(rng, eps_target, params):
    """Commuting states of A1 A2 diagonal in a product-block basis."""
    spec = params["spec"]
    shapes = [(a, b) for a in range(2, 9) for b in range(2, 9) if a * b <= params.get("max_dim", 64)]
    d1, d2 = shapes[int(rng.integers(len(shapes)))]
    levels_a1 = spec.levels(d1)
    basis = smp.product_block_basis(rng, d1, d2)
    level_energy = np.repeat(levels_a1, d2)
    E = params.get("E", 1.0)

    def draw():
        p = smp.random_probs(rng, d1 * d2).reshape(d1, d2)
        if rng.random() < 0.5:
            keep = int(rng.integers(1, d1 + 1))
            p[keep:] = 0.0
            p /= p.sum()
        return smp._contract_to_cap(p.ravel(), level_energy, E * rng.uniform(0.5, 1.0))

    p = draw()
    q = draw()
    dist = 0.5 * np.abs(p - q).sum()
    if dist > eps_target:
        t = 1.0 - eps_target / dist
        q = (1 - t) * q + t * p
    rho = DensityOperator((basis * p) @ basis.conj().T, validate=False)
    sigma = DensityOperator((basis * q) @ basis.conj().T, validate=False)
    eps = 0.5 * float(np.abs(p - q).sum())
    eps = 0.0 if eps < smp.EPS_FLOOR else eps
    dims = [d1, d2]
    e_rho = float(np.dot(level_energy, p))
    e_sig = float(np.dot(level_energy, q))
    r_rho = DensityOperator(partial_trace(rho, dims, [0]), validate=False).rank
    diff = mutual_information(rho, dims) - mutual_information(sigma, dims)
    inputs = {"d1": d1, "d2": d2, "eps": eps, "E_rho": e_rho, "E_sigma": e_sig, "rank_rho_a1": r_rho}
    offset = refined_energy_offset(rho, [levels_a1], dims, eps) if eps > 0 else 0.0
    return [
        BoundReport.check("mi-rank", inputs, mi_bound("rank_one_sided", eps, rank=r_rho), diff),
        BoundReport.two_sided("mi-energy", inputs, *(mi_bound("energy_commuting", eps, spec=spec, E=max(e_rho, e_sig)),) * 2, diff),
        BoundReport.check(
            "mi-energy-refined",
            dict(inputs, offset=offset),
            mi_bound("energy_commuting", eps, spec=spec, E=e_rho, offset=min(offset, e_rho)),
            diff,
            {"unrefined": mi_bound("energy_commuting", eps, spec=spec, E=e_rho)},
        ),
    ]


def scenario_classical(rng, eps_target, params):
    """Bivariate distributions; p has a mean-energy cap on X1, q is unconstrained."""
    spec = params["spec"]
    n1 = int(rng.integers(2, params.get("max_outcomes", 8) + 1))
    n2 = int(rng.integers(2, params.get("max_outcomes", 8) + 1))
    levels = spec.levels(n1)
    p = smp.sample_joint_distribution(rng, n1, n2, levels, params.get("E", 1.0))
    q = smp.mix_toward(p, smp.sample_joint_distribution(rng, n1, n2), eps_target)
    eps = _measured_eps(p, q, classical_tv)
    diff = equivocation(p) - equivocation(q)
    e_p = first_marginal_energy(p, spec)
    inputs = {"n1": n1, "n2": n2, "eps": eps, "E_p": e_p, "support_p1": support_size(p), "support_q1": support_size(q)}
    params_eq = KNOWN_CLASSES["equivocation"]
    lo, hi = equivocation_rank_bounds(p, q, eps)
    my_cb = classical_rank_bound(params_eq, n1, eps)
    out = [
        BoundReport.check("eq-1-cb", inputs, hi, diff),
        BoundReport.two_sided("eq-1-cb+", inputs, lo, hi, diff),
        BoundReport.check("eq-2-cb", inputs, classical_energy_bound(params_eq, spec, e_p, eps), diff),
        BoundReport.check("eq-2-cb-refined", inputs, classical_energy_bound(params_eq, spec, e_p, eps, p=p), diff),
        BoundReport.check("my-cb", inputs, my_cb, abs(diff)),
    ]
    if eps <= 1.0 - 1.0 / n1:
        out.append(BoundReport.check("opt-cb", inputs, alhejji_smith_bound(n1, eps), abs(diff), {"my-cb": my_cb}))
    else:
        out.append(BoundReport.not_applicable("opt-cb", inputs, "eps above 1 - 1/n"))
    return out


def scenario_eof(rng, eps_target, params):
    """Two-qubit pairs; eps is kept at or below eps_max (default 1/2)."""
    eps_target = min(eps_target, params.get("eps_max", 0.5))
    rho = smp.sample_two_qubit_state(rng)
    sigma = smp.mix_toward(rho, smp.sample_two_qubit_state(rng), eps_target)
    eps = _measured_eps(rho, sigma, trace_distance)
    diff = wootters_eof(rho) - wootters_eof(sigma)
    r_a = DensityOperator(partial_trace(rho, [2, 2], [0]), validate=False).rank
    inputs = {"eps": eps, "delta": eof_delta(eps), "rank_rho_a": r_a}
    return [
        BoundReport.check("eof-rank", inputs, eof_bound("rank", eps, rank=2), abs(diff)),
        BoundReport.check("eof-rank-onesided", inputs, eof_bound("rank", eps, rank=r_a), diff),
    ]


def scenario_oscillator(rng, eps_target, params):
    """Two-mode classical states from random atomic P-measures."""
    cutoff = int(params.get("cutoff", 18))
    amp = float(params.get("max_amp", 1.5))
    mu = smp.sample_coherent_mixture(rng, 2, int(rng.integers(2, 5)), amp, cutoff)
    nu = smp.mix_toward(mu, smp.sample_coherent_mixture(rng, 2, int(rng.integers(2, 5)), amp, cutoff), eps_target)
    eps = _measured_eps(mu, nu, mixture_tv)
    e_mu, e_nu = mean_photon(mu, 1), mean_photon(nu, 1)
    rho_mu, rho_nu = assemble_classical_state(mu), assemble_classical_state(nu)
    dims = [mu.cutoff, nu.cutoff]
    diff = mutual_information(rho_mu, dims) - mutual_information(rho_nu, dims)
    td = trace_distance(rho_mu, rho_nu)
    inputs = {"cutoff": cutoff, "eps": eps, "E_mu": e_mu, "E_nu": e_nu, "atoms_mu": len(mu.atoms), "atoms_nu": len(nu.atoms)}
    partners = {"trace_distance": td}
    return [
        BoundReport.check("mi-c", inputs, classical_mi_bound(e_mu, eps), diff, partners),
        BoundReport.check("mi-c++", inputs, classical_mi_bound(max(e_mu, e_nu), eps), abs(diff), partners),
    ]


SCENARIOS = {
    "entropy": scenario_entropy,
    "mixed": scenario_mixed,
    "commuting": scenario_commuting,
    "qc": scenario_qc,
    "mi": scenario_mi,
    "classical": scenario_classical,
    "eof": scenario_eof,
    "oscillator": scenario_oscillator,
}

# -- configuration ---------------------------------------------------------


@dataclass
class CampaignConfig:
    """Everything needed to reproduce a campaign."""

    seed: int = 42
    trials: int = 200
    epsilon_grid: list = field(default_factory=lambda: [0.01, 0.05, 0.1, 0.2, 0.3, 0.5])
    scenarios: dict = field(default_factory=lambda: {name: {} for name in SCENARIOS})
    bounds: list | None = None
    threads: int = 1
    output: str | None = None
    format: str = "json"

    def __post_init__(self):
        if not isinstance(self.trials, int) or self.trials < 1:
            raise ConfigError(f"trials must be a positive integer, got {self.trials!r}")
        if not 0 <= int(self.seed) < 2**64:
            raise ConfigError("seed must fit in 64 unsigned bits")
        grid = [float(e) for e in self.epsilon_grid]
        if not grid or any(not 0 < e <= 1 for e in grid):
            raise ConfigError("epsilon_grid entries must lie in (0, 1]")
        if grid != sorted(grid):
            raise ConfigError("epsilon_grid must be sorted ascending")
        self.epsilon_grid = grid
        unknown = set(self.scenarios) - set(SCENARIOS)
        if unknown:
            raise ConfigError(f"unknown scenarios {sorted(unknown)}")
        if self.threads < 1:
            raise ConfigError("threads must be >= 1")
        if self.format not in ("json", "csv"):
            raise ConfigError(f"format must be json or csv, got {self.format!r}")

    @classmethod
    def from_dict(cls, data: dict) -> "CampaignConfig":
        known = {"seed", "trials", "epsilon_grid", "scenarios", "bounds", "threads", "output", "format"}
        extra = set(data) - known
        if extra:
            raise ConfigError(f"unknown config keys {sorted(extra)}")
        data = dict(data)
        scen = data.get("scenarios")
        if isinstance(scen, list):
            data["scenarios"] = {name: {} for name in scen}
        try:
            return cls(**data)
        except TypeError as exc:
            raise ConfigError(str(exc)) from exc

    @classmethod
    def from_file(cls, path) -> "CampaignConfig":
        try:
            data = json.loads(Path(path).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        if not isinstance(data, dict):
            raise ConfigError("config must be a JSON object")
        return cls.from_dict(data)


def _scenario_params(raw: dict) -> dict:
    params = dict(raw)
    spec = params.get("spectrum", {"kind": "arithmetic", "step": 1.0})
    params["spec"] = spec if isinstance(spec, SpectrumSequence) else SpectrumSequence.from_dict(spec)
    return params


def run_scenario(name: str, raw_params: dict, config: CampaignConfig, index: int) -> list[BoundReport]:
    fn = SCENARIOS[name]
    params = _scenario_params(raw_params)
    trials = int(params.get("trials", config.trials))
    grid = config.epsilon_grid

    def one(i: int) -> list[BoundReport]:
        rng = smp.trial_rng(int(config.seed), i, index)
        try:
            reports = fn(rng, grid[i % len(grid)], params)
        except ContinuityError as exc:
            raise type(exc)(f"scenario {name}, trial {i}: {exc}") from exc
        for r in reports:
            r.inputs = {"scenario": name, "trial": i, **r.inputs}
        return reports

    if config.threads > 1:
        with ThreadPoolExecutor(config.threads) as pool:
            chunks = list(pool.map(one, range(trials)))
    else:
        chunks = [one(i) for i in range(trials)]
    return [r for chunk in chunks for r in chunk]


def run_campaign(config: CampaignConfig) -> list[BoundReport]:
    """Run every configured scenario; the result depends only on ``config``."""
    reports = []
    names = list(SCENARIOS)
    for name, raw in config.scenarios.items():
        reports.extend(run_scenario(name, raw or {}, config, names.index(name)))
    if config.bounds is not None:
        wanted = set(config.bounds)
        reports = [r for r in reports if r.bound in wanted]
    return reports


# -- tightness -------------------------------------------------------------


def tightness_sweep(spec: SpectrumSequence, E_grid, eps_grid) -> list[dict]:
    """Extremal-pair gaps next to the competing bound values.

    ``bdj`` is filled only for the number operator and eps <= E/(E+1).
    """
    number_op = spec.kind == "arithmetic" and spec.step == 1.0
    rows = []
    for E in E_grid:
        for eps in eps_grid:
            rho, sigma = vb.extremal_pair(spec, E, eps)
            gap = rho.entropy() - sigma.entropy()
            lower = eps * F(spec, E / eps)
            sh = vb.entropy_energy_bound(spec, E, eps)
            bdj = vb.bdj_bound(E, eps) if number_op and eps <= E / (E + 1) else None
            rows.append(
                {
                    "E": E,
                    "eps": eps,
                    "gap": gap,
                    "lower": lower,
                    "sh_cb": sh,
                    "bdj": bdj,
                    "w_cb_1": vb.winter_energy_bound(spec, E, eps),
                    "ratio": gap / sh,
                    "in_band": bool(lower < gap <= sh + 1e-12),
                    "g_minus_h2": g(eps) - h2(eps),
                }
            )
    return rows
