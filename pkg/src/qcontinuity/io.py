"""JSON loaders for spectra, ensembles, distributions and coherent mixtures.

Every loader accepts a path or an already-parsed ``dict`` and raises
:class:`ConfigError` on malformed input.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .afw import QuasiClassicalEnsemble
from .classical import JointDistribution
from .errors import ConfigError, ContinuityError
from .hamiltonians import SpectrumSequence
from .linalg import DensityOperator
from .oscillator import CoherentMixture, coherent_vector


def read_json(source):
    if isinstance(source, (dict, list)):
        return source
    try:
        return json.loads(Path(source).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read {source}: {exc}") from exc


def load_spectrum(source) -> SpectrumSequence:
    """``{"kind": "arithmetic", "step": 1.0}`` or ``{"kind": "explicit", "values": [...]}``."""
    data = read_json(source)
    if not isinstance(data, dict):
        raise ConfigError("a spectrum must be a JSON object")
    try:
        return SpectrumSequence.from_dict(data)
    except (KeyError, TypeError, ContinuityError) as exc:
        raise ConfigError(f"bad spectrum definition: {exc}") from exc


def named_state(ref: str, dim: int) -> DensityOperator:
    """``"fock:n"`` or ``"coherent:re,im"`` on a Fock space of ``dim`` levels."""
    kind, _, arg = ref.partition(":")
    try:
        if kind == "fock":
            n = int(arg)
            if not 0 <= n < dim:
                raise ConfigError(f"Fock level {n} outside cutoff {dim}")
            v = np.zeros(dim)
            v[n] = 1.0
            return DensityOperator.from_diagonal(v)
        if kind == "coherent":
            re, im = (float(x) for x in arg.split(","))
            return DensityOperator.from_vector(coherent_vector(complex(re, im), dim))
    except ValueError as exc:
        raise ConfigError(f"bad state reference {ref!r}: {exc}") from exc
    raise ConfigError(f"unknown state reference {ref!r}")


def _state_from(entry, dim: int | None) -> DensityOperator:
    if isinstance(entry, str):
        if dim is None:
            raise ConfigError("named states need a 'cutoff'")
        return named_state(entry, dim)
    if isinstance(entry, dict) and "matrix" in entry:
        m = np.asarray(entry["matrix"], dtype=float)
        if "imag" in entry:
            m = m + 1j * np.asarray(entry["imag"], dtype=float)
        return DensityOperator(m)
    if isinstance(entry, dict) and "diagonal" in entry:
        return DensityOperator.from_diagonal(entry["diagonal"])
    raise ConfigError(f"cannot build a state from {entry!r}")


def load_ensembles(source) -> dict[str, QuasiClassicalEnsemble]:
    """Ensembles sharing one state map.

    Format::

        {"cutoff": 20,
         "states": {"a": "fock:0", "b": "coherent:1.0,0.5", "c": {"diagonal": [...]}},
         "ensembles": {"rho": {"points": ["a", "b"], "weights": [0.5, 0.5]}, ...}}

    A file with top-level ``points``/``weights`` instead of ``ensembles``
    yields a single ensemble under the key ``"ensemble"``.
    """
    data = read_json(source)
    try:
        dim = data.get("cutoff")
        state_map = {label: _state_from(entry, dim) for label, entry in data["states"].items()}
        specs = data.get("ensembles") or {"ensemble": {"points": data["points"], "weights": data["weights"]}}
        return {
            name: QuasiClassicalEnsemble(tuple(e["points"]), np.asarray(e["weights"], dtype=float), state_map)
            for name, e in specs.items()
        }
    except KeyError as exc:
        raise ConfigError(f"ensemble file lacks {exc}") from exc
    except ContinuityError as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"invalid ensemble: {exc}") from exc


def load_distribution(source) -> JointDistribution:
    """``{"arity": 2, "entries": [[i, j, p], ...]}``."""
    data = read_json(source)
    try:
        return JointDistribution.from_rows(data["entries"], int(data["arity"]))
    except KeyError as exc:
        raise ConfigError(f"distribution file lacks {exc}") from exc
    except ContinuityError as exc:
        raise ConfigError(f"invalid distribution: {exc}") from exc


def load_mixture(source) -> CoherentMixture:
    """``{"modes": 2, "atoms": [{"z": [[re, im], [re, im]], "w": 0.5}, ...], "cutoff": N}``."""
    data = read_json(source)
    try:
        modes = int(data["modes"])
        atoms = [tuple(complex(re, im) for re, im in a["z"]) for a in data["atoms"]]
        weights = np.array([float(a["w"]) for a in data["atoms"]])
        return CoherentMixture(modes, atoms, weights, data.get("cutoff"))
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"bad mixture definition: {exc}") from exc
    except ContinuityError as exc:
        raise ConfigError(f"invalid mixture: {exc}") from exc


def mixture_to_dict(mix: CoherentMixture) -> dict:
    return {
        "modes": mix.modes,
        "cutoff": mix.cutoff,
        "atoms": [
            {"z": [[c.real, c.imag] for c in z], "w": float(w)} for z, w in zip(mix.atoms, mix.weights)
        ],
    }


def distribution_to_dict(p: JointDistribution) -> dict:
    return {"arity": p.arity, "entries": [[*k, w] for k, w in sorted(p.entries.items())]}
