"""Bit-error probabilities for OOK detection under ISI and cross-link interference.

The observed count in a slot is a sum of independent binomial components:
the current-slot emission (conditioned on the transmitted bit), same-link
leftovers from earlier slots, and cross-link arrivals.  Conditioned on bit 1
the count's generating function is a product of one pure binomial factor and
mixture factors ``q0 + q1 (1 - h + h v)^u``; bit 0 drops the pure factor.

``ber_exact`` extracts the decision-region mass from derivatives of that
product via the general Leibniz rule, enumerating bounded weak compositions
of the derivative order.  ``ber_convolution_oracle`` reaches the same numbers
by convolving the component PMFs, and ``mc_link_ber`` samples the model;
together they form the cross-validation triangle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.stats import binom as _binom

from .hitting import ChannelTaps

__all__ = [
    "Component",
    "ObservationModel",
    "DetectionConfig",
    "BerResult",
    "McBerResult",
    "BerComplexityError",
    "SupportOverflowError",
    "build_observation_model",
    "ber_exact",
    "ber_convolution_oracle",
    "ber_corollary_eta1",
    "ber_no_isi",
    "suboptimal_threshold",
    "mc_link_ber",
]

#: Abort ``ber_exact`` when the composition enumeration would exceed this.
COMPOSITION_CAP = 100_000_000

#: Abort the convolution oracle when the total support exceeds this.
SUPPORT_CAP = 100_001

#: Trials per Monte Carlo batch; fixed so results never depend on scheduling.
MC_BATCH = 250_000


class BerComplexityError(Exception):
    """Raised when the Leibniz enumeration would be too large; use
    :func:`ber_convolution_oracle` instead."""


class SupportOverflowError(Exception):
    """Raised when the convolution support would be too large."""


@dataclass(frozen=True)
class Component:
    """One mixture component: transmit prior q1, emission count u, tap h."""

    q1: float
    u: int
    h: float

    def __post_init__(self):
        if not 0 <= self.q1 <= 1:
            raise ValueError("q1 must be a probability")
        if self.u < 0:
            raise ValueError("u must be nonnegative")
        if not 0 <= self.h <= 1:
            raise ValueError("h must be a probability")


@dataclass(frozen=True)
class ObservationModel:
    """Binomial-mixture decomposition of the count observed in one slot.

    ``current`` is the (count, tap) of the decoded link's in-slot component;
    ``isi`` covers same-link lags 1..l-1 and ``cci`` cross-link lags 0..l-1,
    for 2l components in total at detection depth l.
    """

    current: tuple
    isi: tuple
    cci: tuple

    def __post_init__(self):
        u0, h0 = self.current
        if u0 < 0 or not 0 <= h0 <= 1:
            raise ValueError("current component must have u >= 0 and h in [0, 1]")
        object.__setattr__(self, "current", (int(u0), float(h0)))
        object.__setattr__(self, "isi", tuple(self.isi))
        object.__setattr__(self, "cci", tuple(self.cci))
        if not self.cci:
            raise ValueError("cci must cover at least the current lag")
        if len(self.isi) != len(self.cci) - 1:
            raise ValueError(
                "need l-1 ISI and l CCI components for detection depth l"
            )

    @property
    def l(self) -> int:
        return len(self.cci)

    @property
    def mixtures(self) -> tuple:
        return self.isi + self.cci


@dataclass(frozen=True)
class DetectionConfig:
    """Threshold rule: decode 1 iff the observed count is >= eta."""

    eta: float

    def __post_init__(self):
        if not self.eta > 0:
            raise ValueError("eta must be positive")

    def decide(self, count: int) -> int:
        return 1 if count >= self.eta else 0


@dataclass(frozen=True)
class BerResult:
    """False-alarm (pe0), miss (pe1) and prior-weighted total error."""

    pe0: float
    pe1: float
    pe: float


@dataclass(frozen=True)
class McBerResult:
    """Empirical error rates with 95% confidence half-widths."""

    pe0: float
    pe1: float
    pe: float
    ci0: float
    ci1: float
    ci: float
    trials: int


def _u_at(u_spec, slot: int) -> int:
    if isinstance(u_spec, (int, np.integer)):
        return int(u_spec)
    return int(u_spec[slot - 1])


def build_observation_model(
    taps_own: ChannelTaps,
    taps_cross: ChannelTaps,
    u_own,
    u_cross,
    q1_own: float,
    q1_cross: float,
    l: int,
) -> ObservationModel:
    """Assemble the slot-l observation model of a receiver from its two
    incoming channels.

    ``u_own``/``u_cross`` are either a constant per-slot count or a sequence
    indexed by slot (entry k-1 for slot k), e.g. a secondary budget schedule.
    """
    if l < 1:
        raise ValueError("l must be at least 1")
    if len(taps_own) < l or len(taps_cross) < l:
        raise ValueError("taps must cover at least l lags")
    current = (_u_at(u_own, l), float(taps_own.taps[0]))
    isi = tuple(
        Component(q1_own, _u_at(u_own, l - r), float(taps_own.taps[r]))
        for r in range(1, l)
    )
    cci = tuple(
        Component(q1_cross, _u_at(u_cross, l - j), float(taps_cross.taps[j]))
        for j in range(l)
    )
    return ObservationModel(current=current, isi=isi, cci=cci)


def _threshold_count(eta: float) -> int:
    """Smallest integer count decoded as 1."""
    if not eta > 0:
        raise ValueError("eta must be positive")
    return math.ceil(eta)


def _binom_weights(u: int, h: float, d_max: int) -> list:
    """``C(u, d) h^d (1-h)^(u-d)`` for d = 0..min(d_max, u), evaluated by an
    interleaved product so large falling factorials never overflow."""
    top = min(d_max, u)
    if u > 0 and u * math.log1p(-h) < -700.0:
        # the d = 0 anchor would underflow; evaluate each entry in log space
        lg_u = math.lgamma(u + 1)
        return [
            math.exp(
                lg_u
                - math.lgamma(d + 1)
                - math.lgamma(u - d + 1)
                + d * math.log(h)
                + (u - d) * math.log1p(-h)
            )
            for d in range(top + 1)
        ]
    out = [(1.0 - h) ** u]
    val = out[0]
    for d in range(1, top + 1):
        val = val * (u - d + 1) * h / (d * (1.0 - h))
        out.append(val)
    return out


def _current_table(u: int, h: float, d_max: int) -> list:
    """Taylor weights of the conditioned current-slot factor."""
    if h == 1.0:
        return [1.0 if d == u else 0.0 for d in range(min(d_max, u) + 1)]
    return _binom_weights(u, h, d_max)


def _mixture_table(comp: Component, d_max: int) -> list:
    """Taylor weights of one mixture factor ``q0 + q1 (1 - h + h v)^u``."""
    w = _current_table(comp.u, comp.h, d_max)
    out = [(1.0 - comp.q1) + comp.q1 * w[0]]
    out.extend(comp.q1 * wd for wd in w[1:])
    return out


def _composition_count(n_components: int, budget: int) -> int:
    return sum(
        math.comb(n + n_components - 1, n_components - 1) for n in range(budget + 1)
    )


def _sum_compositions(tables: Sequence[Sequence[float]], budget: int) -> float:
    """Sum the product of per-component Taylor weights over every bounded weak
    composition with total derivative order <= budget."""

    def rec(idx: int, remaining: int) -> float:
        if idx == len(tables):
            return 1.0
        total = 0.0
        table = tables[idx]
        for d in range(min(remaining, len(table) - 1) + 1):
            w = table[d]
            if w != 0.0:
                total += w * rec(idx + 1, remaining - d)
        return total

    return rec(0, budget)


def ber_exact(model: ObservationModel, q1: float, eta: float) -> BerResult:
    """Error probabilities by general-Leibniz enumeration of the generating
    function's derivatives.

    ``q1`` is the decoded link's prior of transmitting bit 1.  Raises
    :class:`BerComplexityError` when the enumeration would exceed the
    complexity cap; the convolution oracle is the production path.
    """
    if not 0 < q1 <= 1:
        raise ValueError("q1 must be in (0, 1]")
    thr = _threshold_count(eta)
    budget = thr - 1
    n_comp = 2 * model.l
    if _composition_count(n_comp, budget) > COMPOSITION_CAP:
        raise BerComplexityError(
            "composition enumeration too large; use ber_convolution_oracle"
        )
    u0, h0 = model.current
    tables_1 = [_current_table(u0, h0, budget)]
    tables_1.extend(_mixture_table(c, budget) for c in model.mixtures)
    pe1 = _sum_compositions(tables_1, budget)
    pe0 = 1.0 - _sum_compositions(tables_1[1:], budget)
    return BerResult(pe0=pe0, pe1=pe1, pe=(1.0 - q1) * pe0 + q1 * pe1)


def _mixture_pmf(comp: Component) -> np.ndarray:
    pmf = comp.q1 * _binom.pmf(np.arange(comp.u + 1), comp.u, comp.h)
    pmf[0] += 1.0 - comp.q1
    return pmf


def _count_pmfs(model: ObservationModel) -> tuple[np.ndarray, np.ndarray]:
    """Exact count PMFs conditioned on bit 0 and bit 1."""
    u0, h0 = model.current
    support = u0 + sum(c.u for c in model.mixtures) + 1
    if support > SUPPORT_CAP:
        raise SupportOverflowError(f"support {support} exceeds {SUPPORT_CAP}")
    pmf0 = np.ones(1)
    for comp in model.mixtures:
        pmf0 = np.convolve(pmf0, _mixture_pmf(comp))
    pmf1 = np.convolve(pmf0, _binom.pmf(np.arange(u0 + 1), u0, h0))
    return pmf0, pmf1


def ber_convolution_oracle(model: ObservationModel, q1: float, eta: float) -> BerResult:
    """Error probabilities from the exact count PMFs.

    Convolves every component's PMF; the false-alarm probability is read as a
    direct upper-tail sum, which stays relatively accurate even when tiny.
    """
    if not 0 < q1 <= 1:
        raise ValueError("q1 must be in (0, 1]")
    thr = _threshold_count(eta)
    pmf0, pmf1 = _count_pmfs(model)
    pe0 = float(pmf0[thr:].sum())
    pe1 = float(pmf1[:thr].sum())
    return BerResult(pe0=pe0, pe1=pe1, pe=(1.0 - q1) * pe0 + q1 * pe1)


def ber_corollary_eta1(model: ObservationModel) -> float:
    """Total error for eta = 1 and equiprobable bits, in closed product form."""
    u0, h0 = model.current
    beta0 = (1.0 - h0) ** u0
    prod = 1.0
    for comp in model.mixtures:
        prod *= (1.0 - comp.q1) + comp.q1 * (1.0 - comp.h) ** comp.u
    return 0.5 * (1.0 + prod * (beta0 - 1.0))


def ber_no_isi(model: ObservationModel, q1: float, eta: float) -> BerResult:
    """Error probabilities when all inter-slot taps vanish.

    Only the current-slot component and the lag-0 cross-link component
    remain; the double sum is their binomial Leibniz product.
    """
    for comp in model.isi:
        if comp.h != 0.0:
            raise ValueError("ber_no_isi requires zero same-link taps beyond lag 0")
    for comp in model.cci[1:]:
        if comp.h != 0.0:
            raise ValueError("ber_no_isi requires zero cross-link taps beyond lag 0")
    if not 0 < q1 <= 1:
        raise ValueError("q1 must be in (0, 1]")
    thr = _threshold_count(eta)
    budget = thr - 1
    u0, h0 = model.current
    w_beta = _current_table(u0, h0, budget)
    w_cci = _mixture_table(model.cci[0], budget)
    pe1 = 0.0
    pe0_cdf = 0.0
    for n in range(budget + 1):
        for k in range(n + 1):
            if k < len(w_cci) and n - k < len(w_beta):
                pe1 += w_beta[n - k] * w_cci[k]
        if n < len(w_cci):
            pe0_cdf += w_cci[n]
    pe0 = 1.0 - pe0_cdf
    return BerResult(pe0=pe0, pe1=pe1, pe=(1.0 - q1) * pe0 + q1 * pe1)


def _poisson_means(model: ObservationModel) -> tuple[float, float]:
    lam0 = sum(c.q1 * c.u * c.h for c in model.mixtures)
    u0, h0 = model.current
    return lam0, u0 * h0 + lam0


def _grid_search_eta(model: ObservationModel, q1: float) -> float:
    pmf0, pmf1 = _count_pmfs(model)
    tail0 = np.concatenate([np.cumsum(pmf0[::-1])[::-1], [0.0]])
    cdf1 = np.cumsum(pmf1)
    best_eta, best_pe = 1, math.inf
    for eta in range(1, pmf1.size + 1):
        pe0 = float(tail0[eta]) if eta < tail0.size else 0.0
        pe = (1.0 - q1) * pe0 + q1 * float(cdf1[eta - 1])
        if pe < best_pe:
            best_eta, best_pe = eta, pe
    return float(best_eta)


def suboptimal_threshold(model: ObservationModel, q1: float) -> float:
    """Detection threshold from a log-likelihood ratio test under a Poisson
    approximation of the observed count.

    The approximation is confined to threshold selection; error probabilities
    are always evaluated under the exact binomial model.  Falls back to a
    grid search over integer thresholds when the likelihood ratio is
    degenerate.
    """
    if not 0 < q1 <= 1:
        raise ValueError("q1 must be in (0, 1]")
    lam0, lam1 = _poisson_means(model)
    if lam0 <= 0.0 or lam1 <= lam0:
        return _grid_search_eta(model, q1)
    u0, h0 = model.current
    eta = (math.log((1.0 - q1) / q1) + u0 * h0) / math.log(lam1 / lam0)
    if eta <= 0.0:
        return _grid_search_eta(model, q1)
    return eta


def _sample_mixtures(rng, model: ObservationModel, m: int) -> np.ndarray:
    counts = np.zeros(m, dtype=np.int64)
    for comp in model.mixtures:
        active = rng.random(m) < comp.q1
        counts += np.where(active, rng.binomial(comp.u, comp.h, size=m), 0)
    return counts


def mc_link_ber(
    model: ObservationModel,
    q1: float,
    eta: float,
    trials: int,
    seed: int,
) -> McBerResult:
    """Monte Carlo estimate of the error probabilities with 95% intervals.

    Trials run in fixed-size batches on substreams spawned from the master
    seed; the two bit hypotheses use independent draws so their half-widths
    combine without covariance.
    """
    if trials < 1:
        raise ValueError("trials must be at least 1")
    if not 0 < q1 <= 1:
        raise ValueError("q1 must be in (0, 1]")
    u0, h0 = model.current
    sizes = [MC_BATCH] * (trials // MC_BATCH)
    if trials % MC_BATCH:
        sizes.append(trials % MC_BATCH)
    seeds = np.random.SeedSequence(seed).spawn(len(sizes))
    errors1 = 0
    errors0 = 0
    for sub_seed, m in zip(seeds, sizes):
        rng = np.random.default_rng(sub_seed)
        counts1 = _sample_mixtures(rng, model, m) + rng.binomial(u0, h0, size=m)
        errors1 += int(np.count_nonzero(counts1 < eta))
        counts0 = _sample_mixtures(rng, model, m)
        errors0 += int(np.count_nonzero(counts0 >= eta))
    pe1 = errors1 / trials
    pe0 = errors0 / trials
    q0 = 1.0 - q1
    se1 = math.sqrt(pe1 * (1.0 - pe1) / trials)
    se0 = math.sqrt(pe0 * (1.0 - pe0) / trials)
    se = math.sqrt((q0 * se0) ** 2 + (q1 * se1) ** 2)
    return McBerResult(
        pe0=pe0,
        pe1=pe1,
        pe=q0 * pe0 + q1 * pe1,
        ci0=1.96 * se0,
        ci1=1.96 * se1,
        ci=1.96 * se,
        trials=trials,
    )
