"""Random matrices from integer link functions: spectra, circuits and closed forms."""

__version__ = "0.1.0"

from .analytic import (
    MomentReport,
    analytic_moment,
    lattice_corrected_moment,
    moment_upper_bound,
    predicted_moment,
    quadratic_link_m4,
    semicircle_moment,
)
from .circuits import (
    CircuitCount,
    count_circuits,
    fit_extrapolation,
    limiting_contribution,
    moment_from_words,
    word_contributions,
)
from .ensemble import Distribution, EnsembleConfig, InputSequence, build_matrix, derive_draw, derive_draws
from .experiment import ExperimentConfig, load_config, run_experiment, simulate, variance_diagnostic
from .links import (
    LinkFunction,
    LinkKind,
    Sign,
    Zone,
    delta_L,
    generalized_hankel,
    generalized_toeplitz,
    monotonicity_radius,
    polynomial_hankel,
    polynomial_toeplitz,
    zone,
)
from .report import emit_report
from .spectral import (
    Normalization,
    SpectralSample,
    eigenvalues_symmetric,
    empirical_moment,
    histogram,
    trace_moment,
)
from .words import PairWord, catalan_number, enumerate_pair_words, is_catalan
from .zones import CaseKind, ZoneCase, all_zone_cases, contribution_volume, lattice_density, zone_case_analysis
