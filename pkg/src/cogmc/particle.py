"""Particle-based Brownian oracle for the two-receiver hitting problem.

Molecules take independent Gaussian steps (per-axis standard deviation
sqrt(2 D dt)) and are absorbed by the first receiver whose interior they
occupy at a step boundary.  There is no intra-step bridge correction, which
matches the validation methodology the closed forms are compared against and
carries a known O(sqrt(dt)) under-absorption bias.

Degradation uses a lifetime drawn once per particle from an exponential
distribution; a particle is removed at the first step boundary past its
lifetime, before the absorption check for that step.

Particles run in fixed-size batches, each on a substream spawned from the
master seed, so results are bit-identical for a given seed no matter how many
worker processes execute the batches.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .geometry import MediumParams, Topology

__all__ = ["SimConfig", "SimResult", "simulate_two_far", "simulate_first_hit_histogram"]

#: Particles per batch.  Fixed so the batch layout (and with it the exact
#: random stream consumed by each batch) never depends on the worker count.
BATCH_SIZE = 25_000

#: Environment variable bounding the number of worker processes.
THREADS_ENV_VAR = "COGMC_THREADS"


def _worker_count() -> int:
    raw = os.environ.get(THREADS_ENV_VAR)
    if raw:
        return max(1, int(raw))
    return max(1, os.cpu_count() or 1)


@dataclass(frozen=True)
class SimConfig:
    """Step size, particle count, horizon, master seed and output binning."""

    dt: float
    n_particles: int
    t_max: float
    seed: int
    n_time_bins: int = 100

    def __post_init__(self):
        if not self.dt > 0:
            raise ValueError("dt must be positive")
        if self.n_particles < 1:
            raise ValueError("n_particles must be at least 1")
        if self.t_max < self.dt:
            raise ValueError("t_max must be at least dt")
        if self.n_time_bins < 1:
            raise ValueError("n_time_bins must be at least 1")

    @property
    def n_steps(self) -> int:
        return int(round(self.t_max / self.dt))


@dataclass(frozen=True)
class SimResult:
    """Empirical absorption curves for both receivers.

    ``hits_P[j]`` / ``hits_S[j]`` count particles absorbed by ``times[j]``;
    together with ``degraded`` and ``alive`` they account for every particle.
    """

    times: np.ndarray
    hits_P: np.ndarray
    hits_S: np.ndarray
    degraded: int
    alive: int
    n_particles: int

    def __post_init__(self):
        total = int(self.hits_P[-1]) + int(self.hits_S[-1]) + self.degraded + self.alive
        if total != self.n_particles:
            raise ValueError(
                f"particle accounting broken: {total} != {self.n_particles}"
            )
        if np.any(np.diff(self.hits_P) < 0) or np.any(np.diff(self.hits_S) < 0):
            raise ValueError("cumulative hit counts must be nondecreasing")

    def _counts(self, rx: str) -> np.ndarray:
        if rx == "P":
            return self.hits_P
        if rx == "S":
            return self.hits_S
        raise KeyError(f"unknown receiver {rx!r}")

    def cdf(self, rx: str) -> np.ndarray:
        """Empirical hitting-probability curve for receiver ``rx``."""
        return self._counts(rx) / self.n_particles

    def ci_halfwidth(self, rx: str) -> np.ndarray:
        """95% binomial (normal-approximation) half-width per time bin."""
        p = self.cdf(rx)
        return 1.96 * np.sqrt(p * (1.0 - p) / self.n_particles)


def _simulate_batch(args):
    (seed_seq, n, x0, y_p, a_p, y_s, a_s, sigma, n_steps, mu, dt) = args
    rng = np.random.default_rng(seed_seq)
    pos = np.tile(x0, (n, 1))
    if mu > 0:
        lifetimes = rng.exponential(1.0 / mu, size=n)
        # first step boundary strictly past the lifetime
        kill_step = np.floor(lifetimes / dt).astype(np.int64) + 1
    else:
        kill_step = None
    hist_p = np.zeros(n_steps + 1, dtype=np.int64)
    hist_s = np.zeros(n_steps + 1, dtype=np.int64)
    degraded = 0
    a_p2 = a_p * a_p
    a_s2 = a_s * a_s
    for k in range(1, n_steps + 1):
        if pos.shape[0] == 0:
            break
        if kill_step is not None:
            dead = kill_step <= k
            if dead.any():
                degraded += int(dead.sum())
                keep = ~dead
                pos = pos[keep]
                kill_step = kill_step[keep]
                if pos.shape[0] == 0:
                    break
        prev = pos
        pos = pos + rng.standard_normal(size=pos.shape) * sigma
        if a_p2 > 0:
            d = pos - y_p
            in_p = np.einsum("ij,ij->i", d, d) <= a_p2
        else:
            in_p = np.zeros(pos.shape[0], dtype=bool)
        if a_s2 > 0:
            d = pos - y_s
            in_s = np.einsum("ij,ij->i", d, d) <= a_s2
        else:
            in_s = np.zeros(pos.shape[0], dtype=bool)
        both = in_p & in_s
        if both.any():
            # pathological dt only; the receiver nearer at the step start wins
            d0p = prev[both] - y_p
            d0s = prev[both] - y_s
            nearer_p = (
                np.einsum("ij,ij->i", d0p, d0p) <= np.einsum("ij,ij->i", d0s, d0s)
            )
            in_p[both] = nearer_p
            in_s[both] = ~nearer_p
        n_hit_p = int(np.count_nonzero(in_p))
        n_hit_s = int(np.count_nonzero(in_s))
        if n_hit_p or n_hit_s:
            hist_p[k] += n_hit_p
            hist_s[k] += n_hit_s
            keep = ~(in_p | in_s)
            pos = pos[keep]
            if kill_step is not None:
                kill_step = kill_step[keep]
    return hist_p, hist_s, degraded, pos.shape[0]


def _run_engine(topology: Topology, tx: str, medium: MediumParams, cfg: SimConfig):
    """Per-step absorption histograms for both receivers, merged over batches."""
    n_steps = cfg.n_steps
    sigma = np.sqrt(2.0 * medium.D * cfg.dt)
    x0 = topology.tx(tx)
    sizes = [BATCH_SIZE] * (cfg.n_particles // BATCH_SIZE)
    if cfg.n_particles % BATCH_SIZE:
        sizes.append(cfg.n_particles % BATCH_SIZE)
    seeds = np.random.SeedSequence(cfg.seed).spawn(len(sizes))
    jobs = [
        (
            seeds[b],
            sizes[b],
            x0,
            topology.y_P,
            topology.a_P,
            topology.y_S,
            topology.a_S,
            sigma,
            n_steps,
            medium.mu,
            cfg.dt,
        )
        for b in range(len(sizes))
    ]
    workers = min(_worker_count(), len(jobs))
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_simulate_batch, jobs))
    else:
        results = [_simulate_batch(job) for job in jobs]
    hist_p = np.zeros(n_steps + 1, dtype=np.int64)
    hist_s = np.zeros(n_steps + 1, dtype=np.int64)
    degraded = 0
    alive = 0
    for hp, hs, dg, al in results:
        hist_p += hp
        hist_s += hs
        degraded += dg
        alive += al
    return hist_p, hist_s, degraded, alive


def _cumulative_at(hist: np.ndarray, edge_steps: np.ndarray) -> np.ndarray:
    return np.cumsum(hist)[edge_steps]


def simulate_two_far(
    topology: Topology, tx: str, medium: MediumParams, cfg: SimConfig
) -> SimResult:
    """Empirical hitting-probability curves for both receivers."""
    hist_p, hist_s, degraded, alive = _run_engine(topology, tx, medium, cfg)
    times = np.linspace(cfg.t_max / cfg.n_time_bins, cfg.t_max, cfg.n_time_bins)
    edge_steps = np.minimum(np.round(times / cfg.dt).astype(np.int64), cfg.n_steps)
    return SimResult(
        times=times,
        hits_P=_cumulative_at(hist_p, edge_steps),
        hits_S=_cumulative_at(hist_s, edge_steps),
        degraded=degraded,
        alive=alive,
        n_particles=cfg.n_particles,
    )


def simulate_first_hit_histogram(
    topology: Topology,
    tx: str,
    medium: MediumParams,
    cfg: SimConfig,
    Tb: float,
    L: int,
) -> tuple[np.ndarray, np.ndarray]:
    """Per-slot first-hit fractions for both receivers.

    Entry k estimates the probability of arriving during the k-th slot after
    emission; the fractions sum to the empirical hitting probability at L*Tb.
    """
    if L < 1:
        raise ValueError("L must be at least 1")
    if L * Tb > cfg.t_max + 1e-12:
        raise ValueError("L*Tb must not exceed the simulation horizon t_max")
    hist_p, hist_s, _, _ = _run_engine(topology, tx, medium, cfg)
    edges = np.arange(L + 1) * Tb
    edge_steps = np.minimum(np.round(edges / cfg.dt).astype(np.int64), cfg.n_steps)
    cum_p = _cumulative_at(hist_p, edge_steps)
    cum_s = _cumulative_at(hist_s, edge_steps)
    return (
        np.diff(cum_p) / cfg.n_particles,
        np.diff(cum_s) / cfg.n_particles,
    )
