"""Entanglement dynamics of a three-qubit anisotropic Heisenberg ring.

Builds the ring Hamiltonian with antisymmetric exchange and a magnetic
field, evolves states unitarily or with intrinsic decoherence, pushes them
through qubit noise channels, and quantifies tripartite entanglement
(one-to-other I-tangles, pair concurrences, three-way concurrences, the
concurrence fill). Closed-form benchmarks and cross-validation runners
keep the numeric pipeline honest.
"""
from .channels import KrausChannel, Placement, adc, apply, by_name, dephasing_lambda, gadc, nonmarkov_dephasing, pdc
from .closedform import ScenarioId
from .dynamics import HamiltonianParams, MilburnParams, basis_change_u, build_hamiltonian, milburn_evolve, schrodinger_evolve, spectrum_closed_form
from .experiments import CrossValidationReport, FieldCheck, FrequencySet, SweepSpec, common_period, cross_validate, cross_validate_all, detect_period, first_local_maximum, gw_frequencies, run_figure, run_sweep
from .linalg import EigenDecomposition, herm_eig, kron, kron3, min_eig_sym3, partial_trace
from .measures import MeasureReport, concurrence_fill, full_report, gtc_pure, gtc_xstate, itangle_trace_part, linear_entropy, rank2_itangle, rank2_m_matrix, rank2_m_min, residual_entanglement_pure, spectral_itangle, wootters_concurrence, x_part_concurrence, xstate_concurrence
from .states import StateValidationError, gghz, ghz, gw, mix_ghz_extremes, mix_w_vacuum, pure_dm, validate, w, wbar, wwbar

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "KrausChannel", "Placement", "adc", "apply", "by_name", "dephasing_lambda",
    "gadc", "nonmarkov_dephasing", "pdc",
    "ScenarioId",
    "HamiltonianParams", "MilburnParams", "basis_change_u", "build_hamiltonian",
    "milburn_evolve", "schrodinger_evolve", "spectrum_closed_form",
    "CrossValidationReport", "FieldCheck", "FrequencySet", "SweepSpec",
    "common_period", "cross_validate", "cross_validate_all", "detect_period",
    "first_local_maximum", "gw_frequencies", "run_figure", "run_sweep",
    "EigenDecomposition", "herm_eig", "kron", "kron3", "min_eig_sym3",
    "partial_trace",
    "MeasureReport", "concurrence_fill", "full_report", "gtc_pure", "gtc_xstate",
    "itangle_trace_part", "linear_entropy", "rank2_itangle", "rank2_m_matrix",
    "rank2_m_min",
    "residual_entanglement_pure", "spectral_itangle", "wootters_concurrence",
    "x_part_concurrence", "xstate_concurrence",
    "StateValidationError", "gghz", "ghz", "gw", "mix_ghz_extremes",
    "mix_w_vacuum", "pure_dm", "validate", "w", "wbar", "wwbar",
]
