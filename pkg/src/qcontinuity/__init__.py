"""Continuity bounds for entropic quantities under rank and energy constraints."""

from .afw import (
    KNOWN_CLASSES,
    LAAClassParams,
    QuasiClassicalEnsemble,
    afw_energy_bound,
    afw_rank_bound,
    jordan_decompose,
    refined_energy_offset,
    tau_states,
)
from .bounds import (
    audenaert_bound,
    bdj_bound,
    entropy_energy_bound,
    extremal_pair,
    mixed_bound,
    rank_entropy_bound,
    refined_entropy_bound,
    two_sided_energy_bound,
    winter_energy_bound,
)
from .campaign import CampaignConfig, run_campaign, tightness_sweep
from .classical import JointDistribution, equivocation, marginal, shannon_entropy
from .conditional import QCEnsembleState, eof_bound, mi_bound, qce_bound, wootters_eof
from .errors import ContinuityError
from .hamiltonians import F, F_multi, SpectrumSequence, g, gibbs_state, h2, solve_beta
from .linalg import DensityOperator, partial_trace, trace_distance, von_neumann_entropy
from .oscillator import CoherentMixture, assemble_classical_state, classical_mi_bound

__version__ = "0.1.0"
