"""Ergodic capacity of RIS-aided links under outdated CSI.

Centralized and distributed reflecting-surface deployments, near- and
far-field path loss, a moment-matched Gamma capacity analysis with Jensen
bounds, and an independent Monte Carlo oracle.
"""

from .capacity import (
    CapacityReport,
    GammaFit,
    capacity_report,
    ec_lower_bound,
    ec_upper_bound,
    ergodic_capacity,
    gamma_fit,
    snr_cdf,
    snr_mean,
    snr_variance,
)
from .channel import (
    CsiAging,
    RicianParams,
    envelope_error_variance,
    laguerre_half,
    outdated_correlation,
    rician_mean_envelope,
    sample_rician,
    sample_rician_envelope,
)
from .errors import (
    DegenerateDistribution,
    GeometryError,
    InvalidScenario,
    NegativeCorrelation,
    NumericalFailure,
    QuadratureFailure,
    RiscapError,
    ScenarioError,
    SingularPattern,
    ValidationFailure,
)
from .geometry import (
    ElementLink,
    PanelLink,
    Point3,
    RisPanel,
    element_centers,
    element_links,
    near_field_boundary,
    panel_link,
)
from .moments import (
    EffectiveSnr,
    MomentSummary,
    PanelStats,
    centralized_moments,
    centralized_noise_variance,
    distributed_moments,
    distributed_noise_variance,
    saturation_gamma_teff,
)
from .montecarlo import (
    EnvelopeMomentEstimate,
    McEstimate,
    PanelChannel,
    SnrEnsemble,
    TrialConfig,
    empirical_snr_cdf,
    simulate_ec,
    simulate_envelope_moments,
)
from .pathloss import (
    LinkBudget,
    PathLossSet,
    beta0_reference,
    combine_pattern,
    direct_pathloss,
    element_pathloss,
    farfield_pathloss,
    pathloss_set,
)
from .presets import PRESET_NAMES, fig8_distributed_cases, preset
from .scenario import (
    DopplerSpec,
    PanelSetup,
    Scenario,
    dump_scenario,
    load_scenario,
    parse_scenario,
    save_scenario,
    scenario_to_dict,
)
from .workbench import (
    ResolvedScenario,
    RunResult,
    SweepRow,
    SweepSpec,
    apply_sweep_value,
    resolve,
    rows_to_csv,
    run_scenario,
    run_sweep,
)

__version__ = "0.1.0"
