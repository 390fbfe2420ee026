"""Experiment configuration, figure recipes and flat-file artifact output.

Each recipe bundles the parameter set of one published sweep and a runner
that produces CSV rows.  Where a caption leaves a parameter unstated (the
primary emission count, traffic priors, receiver radii for the budget
sweeps, degradation rate for some error sweeps) the recipe records an
explicit documented default, overridable through the JSON config.

Artifacts are deterministic: CSV floats use 17 significant digits, the JSON
sidecar echoes the fully resolved configuration and library version, and all
randomness flows from the caller-supplied master seed.
"""

from __future__ import annotations

import csv
import dataclasses
import json
import math
from dataclasses import dataclass

import numpy as np

from ._version import __version__
from .control import (
    ControlParams,
    SlotSchedule,
    TrafficModel,
    expected_cci,
    transmit_budget,
)
from .detection import (
    build_observation_model,
    ber_convolution_oracle,
    suboptimal_threshold,
)
from .geometry import MediumParams, Topology, ValidityReport, derive_geometry, validate_topology
from .hitting import ChannelTaps, channel_taps, p_two_far_deg
from .particle import SimConfig, simulate_two_far

__all__ = [
    "SCHEMA_VERSION",
    "SimParams",
    "SweepSpec",
    "ExperimentConfig",
    "Recipe",
    "ConfigError",
    "list_recipes",
    "recipe_config",
    "run_experiment",
    "validate_config",
]

SCHEMA_VERSION = 1

SWEEP_VARIABLES = ("uM", "r_SP", "eta", "t", "mu", "Tb")


class ConfigError(ValueError):
    """Configuration file rejected: parse failure, unknown key or bad value."""


@dataclass(frozen=True)
class SimParams:
    """Particle-simulation parameters; the master seed joins at run time."""

    dt: float = 1e-4
    n_particles: int = 100_000
    t_max: float = 2.0
    n_time_bins: int = 100

    def to_config(self, seed: int) -> SimConfig:
        return SimConfig(
            dt=self.dt,
            n_particles=self.n_particles,
            t_max=self.t_max,
            seed=seed,
            n_time_bins=self.n_time_bins,
        )


@dataclass(frozen=True)
class SweepSpec:
    """Sweep axis: evenly spaced values of one named variable."""

    variable: str
    start: float
    stop: float
    steps: int

    def __post_init__(self):
        if self.variable not in SWEEP_VARIABLES:
            raise ConfigError(
                f"sweep variable must be one of {SWEEP_VARIABLES}, got {self.variable!r}"
            )
        if not (math.isfinite(self.start) and math.isfinite(self.stop)):
            raise ConfigError("sweep range must be finite")
        if self.stop < self.start:
            raise ConfigError("sweep range must be ordered (start <= stop)")
        if self.steps < 1:
            raise ConfigError("sweep needs at least one step")

    def values(self) -> np.ndarray:
        if self.steps == 1:
            return np.array([self.start])
        return np.linspace(self.start, self.stop, self.steps)


@dataclass(frozen=True)
class ExperimentConfig:
    """Fully resolved experiment: physics, nodes, traffic, control, sweep."""

    medium: MediumParams
    topology: Topology
    traffic: TrafficModel
    control: ControlParams
    sim: SimParams | None = None
    sweep: SweepSpec | None = None
    output: str | None = None

    def to_dict(self) -> dict:
        d = {
            "schema_version": SCHEMA_VERSION,
            "medium": {"D": self.medium.D, "mu": self.medium.mu, "Tb": self.medium.Tb},
            "topology": {
                "x_P": list(self.topology.x_P),
                "x_S": list(self.topology.x_S),
                "y_P": list(self.topology.y_P),
                "y_S": list(self.topology.y_S),
                "a_P": self.topology.a_P,
                "a_S": self.topology.a_S,
            },
            "traffic": {"q1P": self.traffic.q1P, "q1S": self.traffic.q1S},
            "control": {"N": self.control.N, "uL": self.control.uL, "uM": self.control.uM},
        }
        if self.sim is not None:
            d["sim"] = dataclasses.asdict(self.sim)
        if self.sweep is not None:
            d["sweep"] = dataclasses.asdict(self.sweep)
        if self.output is not None:
            d["output"] = self.output
        return d


_SECTION_KEYS = {
    "medium": {"D", "mu", "Tb"},
    "topology": {"x_P", "x_S", "y_P", "y_S", "a_P", "a_S"},
    "traffic": {"q1P", "q1S"},
    "control": {"N", "uL", "uM"},
    "sim": {"dt", "n_particles", "t_max", "n_time_bins"},
    "sweep": {"variable", "start", "stop", "steps"},
}
_TOP_KEYS = set(_SECTION_KEYS) | {"schema_version", "output"}


def _check_keys(d: dict, allowed: set, where: str) -> None:
    unknown = set(d) - allowed
    if unknown:
        raise ConfigError(f"unknown key(s) in {where}: {sorted(unknown)}")


def _require(d: dict, keys: set, where: str) -> None:
    missing = keys - set(d)
    if missing:
        raise ConfigError(f"missing key(s) in {where}: {sorted(missing)}")


def config_from_dict(data: dict, base: ExperimentConfig | None = None) -> ExperimentConfig:
    """Build a config from a JSON document, optionally overriding ``base``.

    Unknown keys anywhere are rejected.  Without a base, the four core
    sections are required; with a base, any subset may be given and section
    contents are merged key by key.
    """
    if not isinstance(data, dict):
        raise ConfigError("configuration document must be a JSON object")
    _check_keys(data, _TOP_KEYS, "configuration")
    version = data.get("schema_version", SCHEMA_VERSION)
    if version != SCHEMA_VERSION:
        raise ConfigError(f"unsupported schema_version {version!r}")

    merged: dict = base.to_dict() if base is not None else {}
    for section, keys in _SECTION_KEYS.items():
        if section in data:
            given = data[section]
            if not isinstance(given, dict):
                raise ConfigError(f"section {section!r} must be an object")
            _check_keys(given, keys, f"section {section!r}")
            merged.setdefault(section, {}).update(given)
    if "output" in data:
        merged["output"] = data["output"]

    if base is None:
        for section in ("medium", "topology", "traffic", "control"):
            _require(merged, {section}, "configuration")
            _require(merged[section], _SECTION_KEYS[section], f"section {section!r}")

    try:
        medium = MediumParams(**merged["medium"])
        topology = Topology(**merged["topology"])
        traffic = TrafficModel(**merged["traffic"])
        control = ControlParams(**merged["control"])
        sim = SimParams(**merged["sim"]) if "sim" in merged else None
        sweep = SweepSpec(**merged["sweep"]) if "sweep" in merged else None
    except ConfigError:
        raise
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from exc
    return ExperimentConfig(
        medium=medium,
        topology=topology,
        traffic=traffic,
        control=control,
        sim=sim,
        sweep=sweep,
        output=merged.get("output"),
    )


def load_config(path, base: ExperimentConfig | None = None) -> ExperimentConfig:
    try:
        with open(path) as fh:
            data = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON in {path} at line {exc.lineno}: {exc.msg}") from exc
    return config_from_dict(data, base=base)


def validate_config(path) -> tuple[ValidityReport, ExperimentConfig]:
    """Schema plus physical validation of a standalone config file, without
    running anything.  Hard modeling errors raise; near-field issues come
    back as warnings in the report."""
    config = load_config(path)
    report = validate_topology(config.topology)
    return report, config


# ---------------------------------------------------------------------------
# recipe helpers

def _with_xS(topology: Topology, x_S) -> Topology:
    return dataclasses.replace(topology, x_S=np.asarray(x_S, dtype=float))


def _taps(
    topology: Topology, medium: MediumParams, tx: str, rx: str, L: int
) -> ChannelTaps:
    geom = derive_geometry(topology, tx, rx)
    return channel_taps(geom, medium.D, medium.mu, medium.Tb, L, pair=(tx, rx))


def _uniform_schedule(u: int, N: int, horizon: int) -> SlotSchedule:
    return SlotSchedule(u_S=(u,) * horizon, u_P=N, horizon=horizon)


def _link_models(
    topology: Topology,
    medium: MediumParams,
    traffic: TrafficModel,
    control: ControlParams,
    l: int,
    controlled: bool,
):
    """Observation models for both receivers at slot l, with the secondary
    schedule either budget-controlled or pinned at the cap."""
    taps_PP = _taps(topology, medium, "P", "P", l)
    taps_SP = _taps(topology, medium, "S", "P", l)
    taps_PS = _taps(topology, medium, "P", "S", l)
    taps_SS = _taps(topology, medium, "S", "S", l)
    if controlled:
        schedule = transmit_budget(taps_SP, traffic, control, l)
    else:
        schedule = _uniform_schedule(control.uL, control.N, l)
    model_P = build_observation_model(
        taps_PP, taps_SP, control.N, schedule.u_S, traffic.q1P, traffic.q1S, l
    )
    model_S = build_observation_model(
        taps_SS, taps_PS, schedule.u_S, control.N, traffic.q1S, traffic.q1P, l
    )
    return model_P, model_S, schedule


def _ber_at(model, q1: float, eta: float) -> float:
    return ber_convolution_oracle(model, q1, eta).pe


#: Detection depth used by all error-probability sweeps.
BER_SLOT = 3

#: Slots evaluated by the budget sweeps.
FIG2_HORIZON = 30

#: Representative fixed threshold for the fixed-vs-adaptive comparison.
FIG7_FIXED_ETA = 20.0

#: Center separations (units of the larger radius) probed by the
#: approximation-error grid, and the probe directions.
FIG4_SEPARATION_FACTORS = (1.9, 2.2, 3.0, 4.0, 6.0)
FIG4_DIRECTIONS = (
    (1.0, 0.0, 0.0),
    (0.0, -1.0, 0.0),
    (0.0, 0.0, 1.0),
    (math.sqrt(0.5), math.sqrt(0.5), 0.0),
)


def _run_fig2(config: ExperimentConfig, seed, Tb: float, sweep_r: bool):
    medium = dataclasses.replace(config.medium, Tb=Tb)
    rows = []
    if sweep_r:
        for r_sp in config.sweep.values():
            x_s = config.topology.y_P - np.array([float(r_sp), 0.0, 0.0])
            topology = _with_xS(config.topology, x_s)
            taps = _taps(topology, medium, "S", "P", FIG2_HORIZON)
            sched = transmit_budget(taps, config.traffic, config.control, FIG2_HORIZON)
            rows.extend(
                [l, float(r_sp), sched.u_at(l)] for l in range(1, FIG2_HORIZON + 1)
            )
        return ["l", "r_SP", "u_S"], rows
    taps = _taps(config.topology, medium, "S", "P", FIG2_HORIZON)
    for u_m in config.sweep.values():
        params = dataclasses.replace(config.control, uM=float(u_m))
        sched = transmit_budget(taps, config.traffic, params, FIG2_HORIZON)
        rows.extend(
            [l, float(u_m), sched.u_at(l)] for l in range(1, FIG2_HORIZON + 1)
        )
    return ["l", "uM", "u_S"], rows


def _run_fig3(config: ExperimentConfig, seed):
    steps = config.sweep.steps
    t_max = config.sweep.stop
    sim_cfg = SimConfig(
        dt=config.sim.dt,
        n_particles=config.sim.n_particles,
        t_max=t_max,
        seed=seed,
        n_time_bins=steps,
    )
    result = simulate_two_far(config.topology, "P", config.medium, sim_cfg)
    geom_p = derive_geometry(config.topology, "P", "P")
    geom_s = derive_geometry(config.topology, "P", "S")
    D, mu = config.medium.D, config.medium.mu
    cdf_p, cdf_s = result.cdf("P"), result.cdf("S")
    ci = np.maximum(result.ci_halfwidth("P"), result.ci_halfwidth("S"))
    rows = []
    for j, t in enumerate(result.times):
        rows.append(
            [
                float(t),
                p_two_far_deg(float(t), geom_p, D, mu),
                p_two_far_deg(float(t), geom_s, D, mu),
                float(cdf_p[j]),
                float(cdf_s[j]),
                float(ci[j]),
            ]
        )
    return ["t", "p_analytical_P", "p_analytical_S", "p_mc_P", "p_mc_S", "ci"], rows


def _run_fig4(config: ExperimentConfig, seed):
    max_a = max(config.topology.a_P, config.topology.a_S)
    points = [
        (factor * max_a, np.array(direction))
        for factor in FIG4_SEPARATION_FACTORS
        for direction in FIG4_DIRECTIONS
    ]
    point_seeds = np.random.SeedSequence(seed).generate_state(len(points), dtype=np.uint64)
    t_obs = config.sim.t_max
    rows = []
    for (R, direction), sub_seed in zip(points, point_seeds):
        y_s = config.topology.y_P + R * direction
        topology = dataclasses.replace(config.topology, y_S=y_s)
        sim_cfg = config.sim.to_config(int(sub_seed))
        result = simulate_two_far(topology, "P", config.medium, sim_cfg)
        p_mc = float(result.cdf("P")[-1])
        geom = derive_geometry(topology, "P", "P")
        p_an = p_two_far_deg(t_obs, geom, config.medium.D, config.medium.mu)
        rows.append(
            [float(R), float(y_s[0]), float(y_s[1]), float(y_s[2]), p_an, p_mc, abs(p_mc - p_an)]
        )
    return ["R", "yb_x", "yb_y", "yb_z", "p_analytical", "p_mc", "abs_err"], rows


def _run_fig5(config: ExperimentConfig, seed):
    l = BER_SLOT
    rows = []
    for r_sp in config.sweep.values():
        x_s = config.topology.y_P - np.array([float(r_sp), 0.0, 0.0])
        topology = _with_xS(config.topology, x_s)
        taps = _taps(topology, config.medium, "S", "P", l)
        sched = transmit_budget(taps, config.traffic, config.control, l)
        uniform = _uniform_schedule(config.control.uL, config.control.N, l)
        rows.append(
            [
                float(r_sp),
                expected_cci(sched, taps, config.traffic, l),
                expected_cci(uniform, taps, config.traffic, l),
            ]
        )
    return ["r_SP", "e_cci_controlled", "e_cci_uncontrolled"], rows


def _run_fig6(config: ExperimentConfig, seed):
    l = BER_SLOT
    model_p, model_s, sched = _link_models(
        config.topology, config.medium, config.traffic, config.control, l, controlled=True
    )
    rows = []
    for eta in config.sweep.values():
        eta = float(eta)
        rows.append(
            [
                eta,
                _ber_at(model_p, config.traffic.q1P, eta),
                _ber_at(model_s, config.traffic.q1S, eta),
                eta,
                eta,
                sched.u_at(l),
            ]
        )
    return ["eta", "pe_P", "pe_S", "eta_P", "eta_S", "u_S"], rows


def _ber_sweep_rows(config: ExperimentConfig, controlled: bool):
    """(r_SP, pe_P, pe_S, eta_P, eta_S, u_S[l]) with thresholds from the
    likelihood-ratio rule, for each swept secondary position."""
    l = BER_SLOT
    rows = []
    for r_sp in config.sweep.values():
        x_s = np.array([config.topology.y_P[0] - float(r_sp), config.topology.y_P[1], config.topology.y_P[2]])
        topology = _with_xS(config.topology, x_s)
        model_p, model_s, sched = _link_models(
            topology, config.medium, config.traffic, config.control, l, controlled
        )
        eta_p = suboptimal_threshold(model_p, config.traffic.q1P)
        eta_s = suboptimal_threshold(model_s, config.traffic.q1S)
        rows.append(
            [
                float(r_sp),
                _ber_at(model_p, config.traffic.q1P, eta_p),
                _ber_at(model_s, config.traffic.q1S, eta_s),
                eta_p,
                eta_s,
                sched.u_at(l),
            ]
        )
    return rows


def _run_fig7(config: ExperimentConfig, seed):
    l = BER_SLOT
    rows = []
    for adaptive_row in _ber_sweep_rows(config, controlled=True):
        r_sp = adaptive_row[0]
        x_s = np.array([config.topology.y_P[0] - r_sp, config.topology.y_P[1], config.topology.y_P[2]])
        topology = _with_xS(config.topology, x_s)
        model_p, model_s, _ = _link_models(
            topology, config.medium, config.traffic, config.control, l, controlled=True
        )
        rows.append(
            adaptive_row
            + [
                _ber_at(model_p, config.traffic.q1P, FIG7_FIXED_ETA),
                _ber_at(model_s, config.traffic.q1S, FIG7_FIXED_ETA),
                FIG7_FIXED_ETA,
            ]
        )
    return (
        ["r_SP", "pe_P", "pe_S", "eta_P", "eta_S", "u_S", "pe_P_fixed", "pe_S_fixed", "eta_fixed"],
        rows,
    )


def _run_fig8(config: ExperimentConfig, seed):
    controlled = _ber_sweep_rows(config, controlled=True)
    uncontrolled = _ber_sweep_rows(config, controlled=False)
    rows = [
        [c[0], c[1], c[2], u[1], u[2], c[3], c[4], u[3], u[4], c[5]]
        for c, u in zip(controlled, uncontrolled)
    ]
    return (
        [
            "r_SP",
            "pe_P_controlled",
            "pe_S_controlled",
            "pe_P_uncontrolled",
            "pe_S_uncontrolled",
            "eta_P_controlled",
            "eta_S_controlled",
            "eta_P_uncontrolled",
            "eta_S_uncontrolled",
            "u_S_controlled",
        ],
        rows,
    )


def _run_fig9(config: ExperimentConfig, seed):
    return ["r_SP", "pe_P", "pe_S", "eta_P", "eta_S", "u_S"], _ber_sweep_rows(
        config, controlled=True
    )


@dataclass(frozen=True)
class Recipe:
    name: str
    description: str
    stochastic: bool
    config: ExperimentConfig
    runner: object

    def run(self, config: ExperimentConfig, seed: int | None):
        return self.runner(config, seed)


def _budget_topology() -> Topology:
    return Topology(
        x_P=[55.0, 0.0, 0.0],
        x_S=[15.0, 0.0, 0.0],
        y_P=[30.0, 0.0, 0.0],
        y_S=[30.0, 50.0, 0.0],
        a_P=5.0,
        a_S=5.0,
    )


def _error_sweep_topology(a_P: float) -> Topology:
    return Topology(
        x_P=[30.0, -10.0, 0.0],
        x_S=[0.0, 10.0, 0.0],
        y_P=[30.0, 10.0, 0.0],
        y_S=[10.0, 10.0, 20.0],
        a_P=a_P,
        a_S=5.0,
    )


def _build_recipes() -> dict:
    traffic = TrafficModel(q1P=0.5, q1S=0.5)

    recipes = {}

    def add(name, description, stochastic, config, runner):
        recipes[name] = Recipe(name, description, stochastic, config, runner)

    budget_topo = _budget_topology()
    add(
        "fig2a",
        "Secondary budget vs interference threshold and slot "
        "(r_SP=15, Tb=1 s, D=100, uL=300; radii/traffic defaults documented)",
        False,
        ExperimentConfig(
            medium=MediumParams(D=100.0, mu=0.0, Tb=1.0),
            topology=budget_topo,
            traffic=traffic,
            control=ControlParams(N=300, uL=300, uM=25.0),
            sweep=SweepSpec("uM", 5.0, 50.0, 10),
        ),
        lambda cfg, seed: _run_fig2(cfg, seed, Tb=1.0, sweep_r=False),
    )
    add(
        "fig2b",
        "Secondary budget vs secondary-to-primary distance and slot (Tb=1 s)",
        False,
        ExperimentConfig(
            medium=MediumParams(D=100.0, mu=0.0, Tb=1.0),
            topology=budget_topo,
            traffic=traffic,
            control=ControlParams(N=300, uL=300, uM=25.0),
            sweep=SweepSpec("r_SP", 10.0, 50.0, 9),
        ),
        lambda cfg, seed: _run_fig2(cfg, seed, Tb=1.0, sweep_r=True),
    )
    add(
        "fig2c",
        "Secondary budget vs distance and slot at short slots (Tb=0.4 s; "
        "budgets may oscillate)",
        False,
        ExperimentConfig(
            medium=MediumParams(D=100.0, mu=0.0, Tb=0.4),
            topology=budget_topo,
            traffic=traffic,
            control=ControlParams(N=300, uL=300, uM=25.0),
            sweep=SweepSpec("r_SP", 10.0, 50.0, 9),
        ),
        lambda cfg, seed: _run_fig2(cfg, seed, Tb=0.4, sweep_r=True),
    )
    add(
        "fig3",
        "Hitting probability vs time, closed form vs particle run "
        "(x=[0,0,0], y_P=[-30,-20,0], y_S=[25,10,0], a_P=3, a_S=5, D=100, "
        "dt=1e-4; set medium.mu for the degradation curves)",
        True,
        ExperimentConfig(
            medium=MediumParams(D=100.0, mu=0.0, Tb=1.0),
            topology=Topology(
                x_P=[0.0, 0.0, 0.0],
                x_S=[0.0, 0.0, 0.0],
                y_P=[-30.0, -20.0, 0.0],
                y_S=[25.0, 10.0, 0.0],
                a_P=3.0,
                a_S=5.0,
            ),
            traffic=traffic,
            control=ControlParams(N=300, uL=300, uM=25.0),
            sim=SimParams(dt=1e-4, n_particles=100_000, t_max=2.0, n_time_bins=40),
            sweep=SweepSpec("t", 0.05, 2.0, 40),
        ),
        _run_fig3,
    )
    add(
        "fig4",
        "Approximation error grid: competing receiver moved around the "
        "target (y_i=[20,0,0], a_P=5, a_S=4, D=100, t=1 s, dt=1e-4); heavy "
        "at the default particle count",
        True,
        ExperimentConfig(
            medium=MediumParams(D=100.0, mu=0.0, Tb=1.0),
            topology=Topology(
                x_P=[0.0, 0.0, 0.0],
                x_S=[0.0, 0.0, 0.0],
                y_P=[20.0, 0.0, 0.0],
                y_S=[20.0, 20.0, 0.0],
                a_P=5.0,
                a_S=4.0,
            ),
            traffic=traffic,
            control=ControlParams(N=300, uL=300, uM=25.0),
            sim=SimParams(dt=1e-4, n_particles=100_000, t_max=1.0, n_time_bins=10),
        ),
        _run_fig4,
    )
    add(
        "fig5",
        "Expected secondary interference at the primary receiver vs distance, "
        "controlled vs uncontrolled (l=3, uM=25, uL=1000, x_P=[55,0,0], "
        "y_P=[30,0,0], y_S=[30,50,0])",
        False,
        ExperimentConfig(
            medium=MediumParams(D=100.0, mu=0.0, Tb=1.0),
            topology=dataclasses.replace(_budget_topology(), x_S=np.array([0.0, 0.0, 0.0])),
            traffic=traffic,
            control=ControlParams(N=300, uL=1000, uM=25.0),
            sweep=SweepSpec("r_SP", 8.0, 30.0, 12),
        ),
        _run_fig5,
    )
    add(
        "fig6",
        "Error probability vs detection threshold (a_P=3, a_S=5, Tb=2 s, "
        "l=3, uM=5, uL=300, mu=0.5, caption positions; N=300 default)",
        False,
        ExperimentConfig(
            medium=MediumParams(D=100.0, mu=0.5, Tb=2.0),
            topology=dataclasses.replace(_error_sweep_topology(3.0), x_S=np.array([10.0, 10.0, 0.0])),
            traffic=traffic,
            control=ControlParams(N=300, uL=300, uM=5.0),
            sweep=SweepSpec("eta", 1.0, 50.0, 50),
        ),
        _run_fig6,
    )
    error_config = ExperimentConfig(
        medium=MediumParams(D=100.0, mu=0.0, Tb=5.0),
        topology=_error_sweep_topology(5.0),
        traffic=traffic,
        control=ControlParams(N=300, uL=300, uM=5.0),
        sweep=SweepSpec("r_SP", 10.0, 30.0, 5),
    )
    add(
        "fig7",
        "Error probability vs secondary-to-primary distance, adaptive vs "
        "fixed threshold (a=5/5, Tb=5 s, l=3, uM=5, uL=300)",
        False,
        error_config,
        _run_fig7,
    )
    add(
        "fig8",
        "Error probability vs distance, controlled vs uncontrolled secondary "
        "emission (uncontrolled pins u_S at uL)",
        False,
        error_config,
        _run_fig8,
    )
    add(
        "fig9",
        "Error probability vs distance under degradation (defaults mu=0.5; "
        "rerun with another medium.mu to compare)",
        False,
        dataclasses.replace(error_config, medium=MediumParams(D=100.0, mu=0.5, Tb=5.0)),
        _run_fig9,
    )
    return recipes


_RECIPES = _build_recipes()


def list_recipes() -> dict:
    """Catalog of available figure recipes keyed by name."""
    return dict(_RECIPES)


def recipe_config(name: str) -> ExperimentConfig:
    return _get_recipe(name).config


def _get_recipe(name: str) -> Recipe:
    try:
        return _RECIPES[name]
    except KeyError:
        raise ConfigError(f"unknown recipe {name!r}") from None


def _format_cell(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return str(int(value))
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return format(float(value), ".17g")


def run_experiment(
    recipe_name: str,
    seed: int | None = None,
    out_prefix: str | None = None,
    config: ExperimentConfig | None = None,
) -> tuple[str, str]:
    """Run one recipe and write ``<prefix>.csv`` and ``<prefix>.json``.

    ``config`` overrides the recipe's recorded parameter set.  A master seed
    is mandatory for stochastic recipes and ignored by deterministic ones.
    Returns the two artifact paths.
    """
    recipe = _get_recipe(recipe_name)
    if config is None:
        config = recipe.config
    if recipe.stochastic and seed is None:
        raise ConfigError(f"recipe {recipe_name!r} is stochastic: a seed is required")
    prefix = out_prefix or config.output
    if not prefix:
        raise ConfigError("no output prefix: pass one or set 'output' in the config")
    columns, rows = recipe.run(config, seed)
    csv_path = f"{prefix}.csv"
    json_path = f"{prefix}.json"
    with open(csv_path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(columns)
        for row in rows:
            writer.writerow([_format_cell(v) for v in row])
    sidecar = {
        "schema_version": SCHEMA_VERSION,
        "recipe": recipe_name,
        "seed": seed,
        "library_version": __version__,
        "config": config.to_dict(),
    }
    with open(json_path, "w") as fh:
        json.dump(sidecar, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return csv_path, json_path
