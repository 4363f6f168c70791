"""Exact simulation of collective emission of fermions (and the photonic reference)
by N localized two-level atoms: emission rates, bright/dark classification,
Lindblad dynamics and multi-mode sector structure."""

from .analytics import (
    RateParams,
    correlation_element,
    max_rate_bound,
    rate_bosonic_product_state,
    rate_closed_form,
    rate_fermion_parent_product_state,
    rate_fermionic_product_state,
    rate_numeric,
)
from .collective import (
    Classification,
    CollectiveModeSet,
    SectorGraph,
    bright_mode_population,
    classify_states,
    collective_jump,
    collective_mode_operator,
    excitation_resolved_classification,
    multimode_sector_graph,
    nilpotency_check,
    sector_rate_spectrum,
    verify_sector_graph,
)
from .dynamics import (
    ModelParams,
    MomentState,
    Trajectory,
    analytic_n0,
    cavity_basis,
    dephasing_decay_rates,
    evolve_density_matrix,
    evolve_moments,
    fit_decay_rate,
    fit_rabi_frequency,
    initial_state,
    regime_classify,
)
from .hilbert import (
    BasisDescriptor,
    StatisticsConfig,
    apply,
    build_basis,
    product_superposition_state,
    site_jump_operator,
    site_number_operator,
)

__version__ = "0.1.0"
