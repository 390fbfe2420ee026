import math

import numpy as np
import pytest

from cogmc import MediumParams, Topology, derive_geometry, validate_topology

from conftest import sample_topology


def test_medium_params_half_life():
    assert MediumParams(D=100.0, mu=0.0, Tb=1.0).half_life() == math.inf
    m = MediumParams(D=100.0, mu=math.log(2.0) / 3.0, Tb=1.0)
    assert m.half_life() == pytest.approx(3.0)


@pytest.mark.parametrize(
    "kwargs",
    [
        {"D": 0.0, "mu": 0.0, "Tb": 1.0},
        {"D": 100.0, "mu": -0.1, "Tb": 1.0},
        {"D": 100.0, "mu": 0.0, "Tb": 0.0},
    ],
)
def test_medium_params_rejects_bad_values(kwargs):
    with pytest.raises(ValueError):
        MediumParams(**kwargs)


def _line_topology(y_P, y_S, a_P=1.0, a_S=1.0):
    return Topology(
        x_P=[0.0, 0.0, 0.0],
        x_S=[0.0, 0.0, 0.0],
        y_P=y_P,
        y_S=y_S,
        a_P=a_P,
        a_S=a_S,
    )


def test_collinear_same_side():
    topo = _line_topology([20.0, 0.0, 0.0], [40.0, 0.0, 0.0])
    g = derive_geometry(topo, "P", "P")
    assert g.phi == pytest.approx(0.0, abs=1e-15)
    assert g.r_mi == pytest.approx(20.0)
    assert g.r_mib == pytest.approx(40.0)
    # cos(phi) = 1 collapses the law of cosines to |r_mib - (r_mi - a_i)|
    assert g.R_mi_ib == pytest.approx(21.0)


def test_collinear_opposite_sides():
    topo = _line_topology([20.0, 0.0, 0.0], [-40.0, 0.0, 0.0])
    g = derive_geometry(topo, "P", "P")
    assert g.phi == pytest.approx(math.pi)
    assert g.R_mi_ib == pytest.approx(59.0)


def test_reference_configuration_distances(fig3_topo):
    g_p = derive_geometry(fig3_topo, "P", "P")
    g_s = derive_geometry(fig3_topo, "P", "S")
    assert g_p.r_mi == pytest.approx(math.sqrt(1300.0))
    assert g_s.r_mi == pytest.approx(math.sqrt(725.0))
    # law-of-cosines consistency for both derived surface-to-center distances
    for g in (g_p, g_s):
        lhs = g.R_mi_ib**2
        rhs = (
            (g.r_mi - g.a_i) ** 2
            + g.r_mib**2
            - 2.0 * (g.r_mi - g.a_i) * g.r_mib * math.cos(g.phi)
        )
        assert lhs == pytest.approx(rhs, rel=1e-12)
        lhs = g.R_mib_i**2
        rhs = (
            (g.r_mib - g.a_ib) ** 2
            + g.r_mi**2
            - 2.0 * (g.r_mib - g.a_ib) * g.r_mi * math.cos(g.phi)
        )
        assert lhs == pytest.approx(rhs, rel=1e-12)


def test_topology_rejects_overlapping_receivers():
    with pytest.raises(ValueError, match="overlap"):
        _line_topology([20.0, 0.0, 0.0], [22.0, 0.0, 0.0], a_P=1.5, a_S=1.5)


def test_topology_rejects_embedded_transmitter():
    with pytest.raises(ValueError, match="inside"):
        Topology(
            x_P=[20.0, 0.0, 0.0],
            x_S=[0.0, 0.0, 0.0],
            y_P=[20.0, 0.5, 0.0],
            y_S=[-20.0, 0.0, 0.0],
            a_P=1.0,
            a_S=1.0,
        )


def test_topology_rejects_bad_vectors():
    with pytest.raises(ValueError):
        _line_topology([20.0, 0.0], [40.0, 0.0, 0.0])


def test_validity_separation_threshold():
    # separation 4 * a_P: fine at the default factor
    ok = _line_topology([20.0, 0.0, 0.0], [20.0, 12.0, 0.0], a_P=3.0, a_S=2.0)
    assert validate_topology(ok).separation_ok
    # separation 2 * max(a): flagged
    near = _line_topology([20.0, 0.0, 0.0], [20.0, 6.5, 0.0], a_P=3.0, a_S=2.0)
    report = validate_topology(near)
    assert not report.separation_ok
    assert any("separation" in m for m in report.messages)


def test_validity_far_field_threshold():
    topo = Topology(
        x_P=[0.0, 0.0, 0.0],
        x_S=[14.0, 0.0, 0.0],
        y_P=[20.0, 0.0, 0.0],
        y_S=[-20.0, 0.0, 0.0],
        a_P=3.0,
        a_S=3.0,
    )
    # x_S sits at r = 6 = 2 * a_P from the primary receiver
    report = validate_topology(topo)
    assert report.far_field_ok[("P", "P")]
    assert not report.far_field_ok[("S", "P")]
    assert not report.ok


def test_validity_is_deterministic_and_never_raises():
    near = _line_topology([8.0, 0.0, 0.0], [-8.0, 0.0, 0.0], a_P=3.0, a_S=3.0)
    r1 = validate_topology(near)
    r2 = validate_topology(near)
    assert r1 == r2


def test_random_topologies_gamma_below_one_and_relabel_symmetry():
    rng = np.random.default_rng(20260809)
    for _ in range(1000):
        topo = sample_topology(rng)
        tx = rng.choice(["P", "S"])
        g_p = derive_geometry(topo, tx, "P")
        g_s = derive_geometry(topo, tx, "S")
        assert 0.0 <= g_p.gamma < 1.0
        # swapping the target relabels the paired fields exactly
        assert g_p.r_mi == g_s.r_mib
        assert g_p.r_mib == g_s.r_mi
        assert g_p.R_mi_ib == g_s.R_mib_i
        assert g_p.R_mib_i == g_s.R_mi_ib
        assert g_p.a_i == g_s.a_ib
        assert g_p.phi == g_s.phi


def test_phi_round_trip_through_law_of_cosines():
    rng = np.random.default_rng(77)
    for _ in range(200):
        topo = sample_topology(rng)
        g = derive_geometry(topo, "P", "P")
        cos_phi = (
            (g.r_mi - g.a_i) ** 2 + g.r_mib**2 - g.R_mi_ib**2
        ) / (2.0 * (g.r_mi - g.a_i) * g.r_mib)
        phi_rec = math.acos(min(1.0, max(-1.0, cos_phi)))
        assert phi_rec == pytest.approx(g.phi, rel=1e-12, abs=1e-12)


def test_degenerate_zero_radius_competitor():
    topo = _line_topology([20.0, 0.0, 0.0], [40.0, 0.0, 0.0], a_P=1.0, a_S=0.0)
    g = derive_geometry(topo, "P", "P")
    assert g.a_ib == 0.0
    assert g.gamma == 0.0
