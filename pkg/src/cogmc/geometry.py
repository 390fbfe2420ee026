"""Physical parameters, node geometry and derived quantities.

Units are fixed throughout the package: lengths in micrometers, times in
seconds, diffusion coefficients in um^2/s, degradation rates in 1/s.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

LINKS = ("P", "S")

#: Default near-field factor: a transmitter closer than ``factor * a`` to a
#: receiver, or receivers closer than ``factor * max(a)`` to each other, put
#: the series approximation outside its validated regime.
DEFAULT_VALIDITY_FACTOR = 3.0


def _as_vec3(v, name: str) -> np.ndarray:
    arr = np.asarray(v, dtype=float)
    if arr.shape != (3,):
        raise ValueError(f"{name} must be a 3-vector, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} must be finite")
    return arr


@dataclass(frozen=True)
class MediumParams:
    """Propagation medium: diffusion coefficient, degradation rate, slot length.

    Attributes
    ----------
    D : float
        Diffusion coefficient of the information molecules, um^2/s.
    mu : float
        First-order degradation rate constant, 1/s.  ``mu = 0`` means the
        molecules never degrade.
    Tb : float
        Slot (bit) duration, s.
    """

    D: float
    mu: float
    Tb: float

    def __post_init__(self):
        if not self.D > 0:
            raise ValueError(f"D must be positive, got {self.D}")
        if self.mu < 0:
            raise ValueError(f"mu must be nonnegative, got {self.mu}")
        if not self.Tb > 0:
            raise ValueError(f"Tb must be positive, got {self.Tb}")

    def half_life(self) -> float:
        """Degradation half-life ln(2)/mu; infinite when mu = 0."""
        if self.mu == 0:
            return math.inf
        return math.log(2.0) / self.mu


@dataclass(frozen=True)
class Topology:
    """Positions of the two point transmitters and two spherical receivers.

    A radius of exactly zero marks a degenerate (absent) receiver; it absorbs
    nothing and is used for single-sphere reference checks.
    """

    x_P: np.ndarray
    x_S: np.ndarray
    y_P: np.ndarray
    y_S: np.ndarray
    a_P: float
    a_S: float

    def __post_init__(self):
        object.__setattr__(self, "x_P", _as_vec3(self.x_P, "x_P"))
        object.__setattr__(self, "x_S", _as_vec3(self.x_S, "x_S"))
        object.__setattr__(self, "y_P", _as_vec3(self.y_P, "y_P"))
        object.__setattr__(self, "y_S", _as_vec3(self.y_S, "y_S"))
        if self.a_P < 0 or self.a_S < 0:
            raise ValueError("receiver radii must be nonnegative")
        sep = float(np.linalg.norm(self.y_P - self.y_S))
        if sep <= self.a_P + self.a_S:
            raise ValueError(
                f"receivers overlap: |y_P - y_S| = {sep:.6g} <= a_P + a_S = "
                f"{self.a_P + self.a_S:.6g}"
            )
        for m in LINKS:
            for i in LINKS:
                d = float(np.linalg.norm(self.tx(m) - self.rx(i)))
                if d <= self.radius(i):
                    raise ValueError(
                        f"transmitter {m} lies inside receiver {i} "
                        f"(distance {d:.6g} <= radius {self.radius(i):.6g})"
                    )

    def tx(self, m: str) -> np.ndarray:
        if m == "P":
            return self.x_P
        if m == "S":
            return self.x_S
        raise KeyError(f"unknown link id {m!r}")

    def rx(self, i: str) -> np.ndarray:
        if i == "P":
            return self.y_P
        if i == "S":
            return self.y_S
        raise KeyError(f"unknown link id {i!r}")

    def radius(self, i: str) -> float:
        if i == "P":
            return self.a_P
        if i == "S":
            return self.a_S
        raise KeyError(f"unknown link id {i!r}")

    def separation(self) -> float:
        return float(np.linalg.norm(self.y_P - self.y_S))


@dataclass(frozen=True)
class TwoFarGeometry:
    """Derived distances and angle for one (transmitter, target receiver) pair.

    The target receiver has radius ``a_i``; the competing receiver has radius
    ``a_ib``.  ``R_mi_ib`` is the distance from the point of the target sphere
    nearest the transmitter to the competing sphere's center, and ``R_mib_i``
    the symmetric quantity.  ``phi`` is the angle subtended at the transmitter
    by the two receiver centers.
    """

    r_mi: float
    r_mib: float
    R_mi_ib: float
    R_mib_i: float
    phi: float
    a_i: float
    a_ib: float

    def __post_init__(self):
        if self.r_mi <= self.a_i:
            raise ValueError("transmitter must lie outside the target receiver")
        if self.r_mib <= self.a_ib and self.a_ib > 0:
            raise ValueError("transmitter must lie outside the competing receiver")
        if self.a_i < 0 or self.a_ib < 0:
            raise ValueError("radii must be nonnegative")
        if self.R_mi_ib < 0 or self.R_mib_i < 0:
            raise ValueError("surface-to-center distances must be nonnegative")

    @property
    def gamma(self) -> float:
        """Geometric ratio of the two-sphere series; < 1 for valid topologies."""
        if self.a_i == 0 or self.a_ib == 0:
            return 0.0
        return (self.a_i * self.a_ib) / (self.R_mi_ib * self.R_mib_i)


@dataclass(frozen=True)
class ValidityReport:
    """Soft diagnostics for the far-field approximation regime.

    ``far_field_ok`` is keyed by (transmitter, receiver) pair.  Failing checks
    never block computation; they only flag that the series approximation has
    no empirical accuracy guarantee.
    """

    far_field_ok: dict
    separation_ok: bool
    messages: tuple = field(default_factory=tuple)

    @property
    def ok(self) -> bool:
        return self.separation_ok and all(self.far_field_ok.values())


def derive_geometry(topology: Topology, tx: str, target: str) -> TwoFarGeometry:
    """Distances and angle feeding the two-receiver hitting-probability series.

    ``tx`` is the emitting link and ``target`` the receiver whose hitting
    probability is wanted; the other receiver acts as the competitor.
    """
    other = "S" if target == "P" else "P"
    x = topology.tx(tx)
    y_i = topology.rx(target)
    y_ib = topology.rx(other)
    a_i = topology.radius(target)
    a_ib = topology.radius(other)

    v_i = y_i - x
    v_ib = y_ib - x
    r_mi = float(np.linalg.norm(v_i))
    r_mib = float(np.linalg.norm(v_ib))
    # atan2 of cross/dot is accurate near phi = 0 and phi = pi.
    phi = math.atan2(float(np.linalg.norm(np.cross(v_i, v_ib))), float(np.dot(v_i, v_ib)))

    e_i = x + v_i * ((r_mi - a_i) / r_mi)
    e_ib = x + v_ib * ((r_mib - a_ib) / r_mib) if r_mib > 0 else x
    R_mi_ib = float(np.linalg.norm(y_ib - e_i))
    R_mib_i = float(np.linalg.norm(y_i - e_ib))

    return TwoFarGeometry(
        r_mi=r_mi,
        r_mib=r_mib,
        R_mi_ib=R_mi_ib,
        R_mib_i=R_mib_i,
        phi=phi,
        a_i=a_i,
        a_ib=a_ib,
    )


def validate_topology(topology: Topology, factor: float = DEFAULT_VALIDITY_FACTOR) -> ValidityReport:
    """Check the far-field conditions under which the series error is negligible.

    Warnings only: the approximation degrades gracefully, so nothing here
    raises.  ``factor`` defaults to 3, the empirically validated margin.
    """
    far_field_ok = {}
    messages = []
    for m in LINKS:
        for i in LINKS:
            r = float(np.linalg.norm(topology.tx(m) - topology.rx(i)))
            ok = r >= factor * topology.radius(i)
            far_field_ok[(m, i)] = ok
            if not ok:
                messages.append(
                    f"transmitter {m} is at r = {r:.4g} um from receiver {i} "
                    f"(< {factor:g} * a_{i} = {factor * topology.radius(i):.4g} um); "
                    "far-field approximation may be inaccurate"
                )
    sep = topology.separation()
    sep_needed = factor * max(topology.a_P, topology.a_S)
    separation_ok = sep >= sep_needed
    if not separation_ok:
        messages.append(
            f"receiver separation {sep:.4g} um < {factor:g} * max radius = "
            f"{sep_needed:.4g} um; mutual-influence approximation may be inaccurate"
        )
    return ValidityReport(
        far_field_ok=far_field_ok,
        separation_ok=separation_ok,
        messages=tuple(messages),
    )
