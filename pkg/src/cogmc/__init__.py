"""Underlay cognitive molecular communication toolkit.

Two point transmitters and two fully-absorbing spherical receivers of
unequal radii share a 3-D diffusive medium.  The package evaluates the
closed-form hitting probabilities of that channel (with and without
molecular degradation), budgets the secondary transmitter so its expected
interference at the primary receiver stays under a threshold, computes
exact OOK bit-error probabilities under ISI and cross-link interference,
and cross-validates everything against a Brownian particle simulator.
"""

from ._version import __version__
from .geometry import (
    MediumParams,
    Topology,
    TwoFarGeometry,
    ValidityReport,
    derive_geometry,
    validate_topology,
)
from .hitting import (
    ChannelTaps,
    SeriesControl,
    channel_taps,
    hitting_rate,
    p_single,
    p_two_far,
    p_two_far_deg,
    p_two_far_deg_inf,
    p_two_far_inf,
)
from .particle import SimConfig, SimResult, simulate_first_hit_histogram, simulate_two_far
from .control import (
    ControlParams,
    SlotSchedule,
    TrafficModel,
    detect_plateau,
    expected_absorbed,
    expected_cci,
    steady_state_bound,
    transmit_budget,
    transmit_budget_no_isi,
)
from .detection import (
    BerResult,
    Component,
    DetectionConfig,
    McBerResult,
    ObservationModel,
    ber_convolution_oracle,
    ber_corollary_eta1,
    ber_exact,
    ber_no_isi,
    build_observation_model,
    mc_link_ber,
    suboptimal_threshold,
)
from .experiments import (
    ExperimentConfig,
    SimParams,
    SweepSpec,
    list_recipes,
    recipe_config,
    run_experiment,
    validate_config,
)

__all__ = [
    "__version__",
    "MediumParams",
    "Topology",
    "TwoFarGeometry",
    "ValidityReport",
    "derive_geometry",
    "validate_topology",
    "ChannelTaps",
    "SeriesControl",
    "channel_taps",
    "hitting_rate",
    "p_single",
    "p_two_far",
    "p_two_far_deg",
    "p_two_far_deg_inf",
    "p_two_far_inf",
    "SimConfig",
    "SimResult",
    "simulate_first_hit_histogram",
    "simulate_two_far",
    "ControlParams",
    "SlotSchedule",
    "TrafficModel",
    "detect_plateau",
    "expected_absorbed",
    "expected_cci",
    "steady_state_bound",
    "transmit_budget",
    "transmit_budget_no_isi",
    "BerResult",
    "Component",
    "DetectionConfig",
    "McBerResult",
    "ObservationModel",
    "ber_convolution_oracle",
    "ber_corollary_eta1",
    "ber_exact",
    "ber_no_isi",
    "build_observation_model",
    "mc_link_ber",
    "suboptimal_threshold",
    "ExperimentConfig",
    "SimParams",
    "SweepSpec",
    "list_recipes",
    "recipe_config",
    "run_experiment",
    "validate_config",
]
