"""Hitting probabilities for one and two fully-absorbing spherical receivers.

The two-receiver quantities are evaluated from a geometric series over
mutual-capture orders.  Each term pairs a complementary-error-function factor
for the direct path with one for the path re-emitted from the competing
sphere's nearest surface point.  With degradation the erfc factors are
replaced by a kernel that would overflow if evaluated literally, so it is
computed through the scaled complementary error function erfcx with the
exponents combined analytically (see ``_deg_kernel``).

All functions are pure and operate on immutable inputs.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.special import erfcx

from .geometry import TwoFarGeometry

__all__ = [
    "SeriesControl",
    "ChannelTaps",
    "SeriesTruncationWarning",
    "p_single",
    "p_two_far",
    "hitting_rate",
    "p_two_far_deg",
    "p_two_far_inf",
    "p_two_far_deg_inf",
    "channel_taps",
]


class SeriesTruncationWarning(RuntimeWarning):
    """Emitted when the capture series hits ``n_max`` before converging."""


@dataclass(frozen=True)
class SeriesControl:
    """Truncation rule for the mutual-capture series.

    Summation stops at the first order whose full addend magnitude drops
    below ``tol``, or at ``n_max`` terms with a :class:`SeriesTruncationWarning`.
    The geometric ratio of the series is < 1 for any valid topology, so the
    default cap is never reached in practice.
    """

    tol: float = 1e-12
    n_max: int = 200

    def __post_init__(self):
        if not self.tol > 0:
            raise ValueError("tol must be positive")
        if self.n_max < 1:
            raise ValueError("n_max must be at least 1")


DEFAULT_SERIES = SeriesControl()


@dataclass(frozen=True)
class ChannelTaps:
    """Slotted channel: per-lag arrival probabilities for one (tx, rx) pair.

    ``taps[k]`` is the probability that a molecule emitted at a slot boundary
    is absorbed during the k-th following slot; ``p_cum[k]`` is the cumulative
    hitting probability at k slot durations.  ``p_cum`` is accumulated from
    the taps so that ``sum(taps) == p_cum[-1]`` holds exactly.
    """

    taps: np.ndarray
    p_cum: np.ndarray
    pair: tuple | None = None

    def __post_init__(self):
        taps = np.asarray(self.taps, dtype=float)
        p_cum = np.asarray(self.p_cum, dtype=float)
        object.__setattr__(self, "taps", taps)
        object.__setattr__(self, "p_cum", p_cum)
        if taps.ndim != 1 or p_cum.shape != (taps.size + 1,):
            raise ValueError("p_cum must have one more entry than taps")
        if np.any(taps < 0):
            raise ValueError("taps must be nonnegative")
        if np.any(np.diff(p_cum) < 0):
            raise ValueError("p_cum must be nondecreasing")
        if p_cum[-1] > 1.0 + 1e-12:
            raise ValueError("cumulative hitting probability exceeds 1")

    def __len__(self) -> int:
        return int(self.taps.size)


def _check_geometry(geom: TwoFarGeometry) -> float:
    gamma = geom.gamma
    if gamma >= 1.0:
        raise ValueError(
            f"series ratio gamma = {gamma:.6g} >= 1; geometry does not describe "
            "two separated spheres"
        )
    return gamma


def p_single(t: float, a: float, r: float, D: float) -> float:
    """Probability that a molecule released at distance r has been absorbed
    by an isolated sphere of radius a by time t."""
    if not 0 < a < r:
        raise ValueError(f"need 0 < a < r, got a = {a}, r = {r}")
    if t < 0:
        raise ValueError("t must be nonnegative")
    if t == 0:
        return 0.0
    return (a / r) * math.erfc((r - a) / math.sqrt(4.0 * D * t))


def _series_lengths(geom: TwoFarGeometry, n: int) -> tuple[float, float]:
    """Path lengths of the order-n direct and re-emitted terms."""
    delta = (geom.R_mib_i - geom.a_i) + (geom.R_mi_ib - geom.a_ib)
    phi_n = (geom.r_mi - geom.a_i) + n * delta
    psi_n = (geom.r_mib - geom.a_ib) + (geom.R_mib_i - geom.a_i) + n * delta
    return phi_n, psi_n


def _series_weights(geom: TwoFarGeometry) -> tuple[float, float]:
    """Amplitudes of the direct and re-emitted terms."""
    A = geom.a_i / geom.r_mi
    if geom.a_ib == 0:
        return A, 0.0
    B = geom.a_i * geom.a_ib / (geom.r_mib * geom.R_mib_i)
    return A, B


def _sum_series(geom: TwoFarGeometry, ctrl: SeriesControl, kernel) -> float:
    """Sum ``gamma^n * (A*kernel(phi_n) - B*kernel(psi_n))`` to tolerance."""
    gamma = _check_geometry(geom)
    A, B = _series_weights(geom)
    total = 0.0
    weight = 1.0
    for n in range(ctrl.n_max):
        phi_n, psi_n = _series_lengths(geom, n)
        term = weight * (A * kernel(phi_n) - B * kernel(psi_n))
        total += term
        if abs(term) < ctrl.tol:
            return total
        weight *= gamma
        if weight == 0.0:
            return total
    warnings.warn(
        f"series not converged after {ctrl.n_max} terms (gamma = {gamma:.4g})",
        SeriesTruncationWarning,
        stacklevel=3,
    )
    return total


def p_two_far(
    t: float,
    geom: TwoFarGeometry,
    D: float,
    ctrl: SeriesControl = DEFAULT_SERIES,
) -> float:
    """Probability of absorption by the target sphere by time t, in the
    presence of the competing sphere (no degradation)."""
    if t < 0:
        raise ValueError("t must be nonnegative")
    if t == 0:
        return 0.0
    s = math.sqrt(4.0 * D * t)
    return _sum_series(geom, ctrl, lambda x: math.erfc(x / s))


def hitting_rate(
    tau: float,
    geom: TwoFarGeometry,
    D: float,
    ctrl: SeriesControl = DEFAULT_SERIES,
) -> float:
    """Absorption rate (time derivative of the hitting probability) at tau > 0."""
    if tau <= 0:
        raise ValueError("tau must be positive; the rate has an integrable "
                         "singularity handled only under the integral")
    four_dt = 4.0 * D * tau
    norm = math.sqrt(math.pi * four_dt) * tau  # sqrt(4 pi D tau^3)

    def kernel(x: float) -> float:
        return (x / norm) * math.exp(-x * x / four_dt)

    return _sum_series(geom, ctrl, kernel)


def _deg_kernel(x: float, D: float, mu: float, t: float) -> float:
    """Stable evaluation of the degradation kernel

        0.5 * [erfc(u + v) * e^{2uv} + erfc(u - v) * e^{-2uv}],

    with u = x / sqrt(4 D t), v = sqrt(mu t), so 2uv = x sqrt(mu / D).
    The literal first factor overflows (the exponent can exceed 700), but
    erfc(z) e^{z^2} = erfcx(z) turns both products into erfcx(|u -+ v|)
    times e^{-(u^2 + v^2)}; the reflected branch for u < v uses
    erfc(-z) = 2 - erfc(z) to keep every factor bounded.
    """
    u = x / math.sqrt(4.0 * D * t)
    v = math.sqrt(mu * t)
    damp = math.exp(-(u * u + v * v))
    first = erfcx(u + v) * damp
    if u >= v:
        second = erfcx(u - v) * damp
    else:
        second = 2.0 * math.exp(-2.0 * u * v) - erfcx(v - u) * damp
    return 0.5 * (first + second)


def p_two_far_deg(
    t: float,
    geom: TwoFarGeometry,
    D: float,
    mu: float,
    ctrl: SeriesControl = DEFAULT_SERIES,
) -> float:
    """Probability that a degradable molecule is absorbed by the target sphere
    by time t, in the presence of the competing sphere.

    Reduces exactly to :func:`p_two_far` at mu = 0.
    """
    if mu < 0:
        raise ValueError("mu must be nonnegative")
    if t < 0:
        raise ValueError("t must be nonnegative")
    if mu == 0:
        return p_two_far(t, geom, D, ctrl)
    if t == 0:
        return 0.0
    return _sum_series(geom, ctrl, lambda x: _deg_kernel(x, D, mu, t))


def p_two_far_inf(geom: TwoFarGeometry) -> float:
    """Fraction of molecules eventually absorbed by the target sphere."""
    _check_geometry(geom)
    A, B = _series_weights(geom)
    if geom.a_ib == 0:
        return A
    denom = geom.R_mi_ib * geom.R_mib_i - geom.a_i * geom.a_ib
    return (geom.a_i * geom.R_mi_ib / denom) * (
        geom.R_mib_i / geom.r_mi - geom.a_ib / geom.r_mib
    )


def p_two_far_deg_inf(geom: TwoFarGeometry, D: float, mu: float) -> float:
    """Fraction of degradable molecules eventually absorbed by the target
    sphere; the t -> infinity limit of :func:`p_two_far_deg` in closed form."""
    if mu < 0:
        raise ValueError("mu must be nonnegative")
    _check_geometry(geom)
    if geom.a_ib == 0:
        return (geom.a_i / geom.r_mi) * math.exp(
            -(geom.r_mi - geom.a_i) * math.sqrt(mu / D)
        )
    s = math.sqrt(mu / D)
    decay_loop = math.exp(
        -(geom.R_mi_ib + geom.R_mib_i - geom.a_i - geom.a_ib) * s
    )
    denom = geom.R_mi_ib * geom.R_mib_i - geom.a_i * geom.a_ib * decay_loop
    direct = (geom.R_mib_i / geom.r_mi) * math.exp(-(geom.r_mi - geom.a_i) * s)
    via_other = (geom.a_ib / geom.r_mib) * math.exp(
        -(geom.r_mib - geom.a_ib + geom.R_mib_i - geom.a_i) * s
    )
    return (geom.a_i * geom.R_mi_ib / denom) * (direct - via_other)


def channel_taps(
    geom: TwoFarGeometry,
    D: float,
    mu: float,
    Tb: float,
    L: int,
    ctrl: SeriesControl = DEFAULT_SERIES,
    pair: tuple | None = None,
) -> ChannelTaps:
    """Slot the hitting probability into L per-lag arrival probabilities.

    ``taps[k] = p((k+1) Tb, mu) - p(k Tb, mu)``.  Differences are clamped at
    zero against sub-tolerance wiggle of the truncated series, and the
    cumulative curve is rebuilt from the taps so the normalization invariant
    holds exactly.
    """
    if L < 1:
        raise ValueError("L must be at least 1")
    if Tb <= 0:
        raise ValueError("Tb must be positive")
    p_vals = [p_two_far_deg(k * Tb, geom, D, mu, ctrl) for k in range(L + 1)]
    taps = np.empty(L)
    p_cum = np.empty(L + 1)
    p_cum[0] = 0.0
    for k in range(L):
        taps[k] = max(p_vals[k + 1] - p_vals[k], 0.0)
        p_cum[k + 1] = p_cum[k] + taps[k]
    return ChannelTaps(taps=taps, p_cum=p_cum, pair=pair)
