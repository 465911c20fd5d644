"""Named bounds evaluable from plain ``key=value`` parameters.

Each entry maps a bound name to ``(function, required keys, summary)``. The
function takes a dict of floats (plus ``spec`` when a spectrum is needed)
and returns either a value or a ``(lower, upper)`` pair.
"""

from __future__ import annotations

from . import bounds as vb
from .afw import LAAClassParams, afw_energy_bound, afw_rank_bound
from .classical import alhejji_smith_bound
from .conditional import eof_bound, mi_bound, qce_bound
from .errors import ConfigError
from .hamiltonians import SpectrumSequence
from .oscillator import classical_mi_bound

INT_KEYS = {"d", "rank", "rank_sigma", "n", "m"}


def _laa(p) -> LAAClassParams:
    return LAAClassParams(C=p.get("C", 1.0), D=p.get("D", 1.0), m=int(p.get("m", 1)))


CATALOG = {
    "aud": (lambda p: vb.audenaert_bound(p["d"], p["eps"]), ("d", "eps"), "eps ln(d-1) + h2(eps), capped at ln d"),
    "w-cb-1": (lambda p: vb.winter_energy_bound(p["spec"], p["E"], p["eps"]), ("E", "eps"), "2 eps F(E/eps) + h2(eps)"),
    "bdj": (lambda p: vb.bdj_bound(p["E"], p["eps"]), ("E", "eps"), "E h2(eps/E) + h2(eps), number operator"),
    "sh-cb": (lambda p: vb.entropy_energy_bound(p["spec"], p["E"], p["eps"]), ("E", "eps"), "eps F(E/eps) + g(eps)"),
    "rank-cb": (lambda p: vb.rank_entropy_bound(p["rank"], p["eps"]), ("rank", "eps"), "eps ln(rank-1) + h2(eps)"),
    "mixed": (
        lambda p: vb.mixed_bound(p["d"], p["spec"], p["E"], p["eps"]),
        ("d", "E", "eps"),
        "(lower, upper) = (eps ln(d-1) + h2(eps), eps F(E/eps) + g(eps))",
    ),
    "cor3": (
        lambda p: vb.two_sided_energy_bound(p["spec"], p["E_rho"], p["E_sigma"], p["eps"]),
        ("E_rho", "E_sigma", "eps"),
        "(lower, upper) two-sided energy bound",
    ),
    "qce-rank": (lambda p: qce_bound("rank", p["eps"], rank=p["rank"]), ("rank", "eps"), "eps ln rank + g(eps)"),
    "qce-energy": (
        lambda p: qce_bound("energy", p["eps"], spec=p["spec"], E=p["E"]),
        ("E", "eps"),
        "eps F(E/eps) + g(eps)",
    ),
    "eof-rank": (lambda p: eof_bound("rank", p["eps"], rank=p["rank"]), ("rank", "eps"), "delta ln rank + g(delta)"),
    "eof-energy": (
        lambda p: eof_bound("energy", p["eps"], spec=p["spec"], E=p["E"]),
        ("E", "eps"),
        "delta F(E/delta) + g(delta)",
    ),
    "mi-rank": (
        lambda p: mi_bound("rank_one_sided", p["eps"], rank=p["rank"]),
        ("rank", "eps"),
        "2 eps ln rank + 2 g(eps)",
    ),
    "mi-rank-2": (
        lambda p: mi_bound("rank_two_sided", p["eps"], rank=p["rank"], rank_sigma=p["rank_sigma"]),
        ("rank", "rank_sigma", "eps"),
        "(lower, upper) two-sided rank bound",
    ),
    "mi-energy": (
        lambda p: mi_bound("energy_commuting", p["eps"], spec=p["spec"], E=p["E"], offset=p.get("offset", 0.0)),
        ("E", "eps"),
        "2 eps F((E - offset)/eps) + 2 g(eps)",
    ),
    "mi-c": (lambda p: classical_mi_bound(p["E"], p["eps"]), ("E", "eps"), "eps g(E/eps) + 2 g(eps)"),
    "eq-1-cb": (
        lambda p: afw_rank_bound(LAAClassParams(C=1.0, D=1.0), p["d"], p["eps"]),
        ("d", "eps"),
        "eps ln d + g(eps), d = support of the first marginal",
    ),
    "eq-2-cb": (
        lambda p: afw_energy_bound(LAAClassParams(C=1.0, D=1.0), p["spec"], 1, p["E"], p["eps"], offset=p.get("offset", 0.0)),
        ("E", "eps"),
        "eps F((E - offset)/eps) + g(eps)",
    ),
    "my-cb": (
        lambda p: afw_rank_bound(LAAClassParams(C=1.0, D=1.0), p["n"], p["eps"]),
        ("n", "eps"),
        "eps ln n + g(eps)",
    ),
    "opt-cb": (lambda p: alhejji_smith_bound(p["n"], p["eps"]), ("n", "eps"), "eps ln(n-1) + h2(eps)"),
    "afw-rank": (
        lambda p: afw_rank_bound(_laa(p), p["d"], p["eps"]),
        ("d", "eps"),
        "C eps ln d + D g(eps)",
    ),
    "afw-energy": (
        lambda p: afw_energy_bound(_laa(p), p["spec"], int(p.get("m", 1)), p["E"], p["eps"], offset=p.get("offset", 0.0)),
        ("E", "eps"),
        "C eps F_m((m E - offset)/eps) + D g(eps)",
    ),
}


def parse_params(pairs) -> dict:
    """``["E=1", "eps=0.2"]`` -> ``{"E": 1.0, "eps": 0.2}``; integer keys are cast."""
    out = {}
    for item in pairs or ():
        key, sep, val = item.partition("=")
        if not sep or not key:
            raise ConfigError(f"expected key=value, got {item!r}")
        if key == "spec":
            out[key] = val
            continue
        try:
            num = float(val)
        except ValueError as exc:
            raise ConfigError(f"{key}: not a number: {val!r}") from exc
        if key in INT_KEYS:
            if num != int(num):
                raise ConfigError(f"{key} must be an integer")
            num = int(num)
        out[key] = num
    return out


def evaluate(name: str, params: dict, spec: SpectrumSequence | None = None):
    """Evaluate a catalog bound; the spectrum defaults to the number operator."""
    if name not in CATALOG:
        raise ConfigError(f"unknown bound {name!r}; choose from {', '.join(sorted(CATALOG))}")
    fn, required, _ = CATALOG[name]
    missing = [k for k in required if k not in params]
    if missing:
        raise ConfigError(f"bound {name} needs {', '.join(missing)}")
    p = dict(params)
    if spec is None and "step" in p:
        spec = SpectrumSequence.arithmetic(float(p["step"]))
    p["spec"] = spec if spec is not None else SpectrumSequence.arithmetic(1.0)
    return fn(p)
