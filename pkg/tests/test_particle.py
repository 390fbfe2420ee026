import dataclasses

import numpy as np
import pytest

from cogmc import (
    MediumParams,
    SimConfig,
    Topology,
    channel_taps,
    derive_geometry,
    p_single,
    simulate_first_hit_histogram,
    simulate_two_far,
)

from conftest import fig3_topology


def _single_sphere_topology(a=3.0, r=10.0):
    return Topology(
        x_P=[0.0, 0.0, 0.0],
        x_S=[0.0, 0.0, 0.0],
        y_P=[r, 0.0, 0.0],
        y_S=[-50.0, 0.0, 0.0],
        a_P=a,
        a_S=0.0,
    )


def test_sim_config_validation():
    with pytest.raises(ValueError):
        SimConfig(dt=0.0, n_particles=10, t_max=1.0, seed=1)
    with pytest.raises(ValueError):
        SimConfig(dt=1e-3, n_particles=0, t_max=1.0, seed=1)
    with pytest.raises(ValueError):
        SimConfig(dt=1e-3, n_particles=10, t_max=1e-4, seed=1)


def test_seed_determinism(fig3_topo, fig3_medium):
    cfg = SimConfig(dt=2e-3, n_particles=4000, t_max=0.3, seed=99, n_time_bins=6)
    r1 = simulate_two_far(fig3_topo, "P", fig3_medium, cfg)
    r2 = simulate_two_far(fig3_topo, "P", fig3_medium, cfg)
    assert np.array_equal(r1.hits_P, r2.hits_P)
    assert np.array_equal(r1.hits_S, r2.hits_S)
    assert (r1.degraded, r1.alive) == (r2.degraded, r2.alive)


def test_worker_count_does_not_change_results(fig3_topo, fig3_medium, monkeypatch):
    # more particles than one batch so the pool actually splits work
    cfg = SimConfig(dt=5e-3, n_particles=30_000, t_max=0.2, seed=7, n_time_bins=4)
    monkeypatch.setenv("COGMC_THREADS", "1")
    serial = simulate_two_far(fig3_topo, "P", fig3_medium, cfg)
    monkeypatch.setenv("COGMC_THREADS", "2")
    parallel = simulate_two_far(fig3_topo, "P", fig3_medium, cfg)
    assert np.array_equal(serial.hits_P, parallel.hits_P)
    assert np.array_equal(serial.hits_S, parallel.hits_S)
    assert (serial.degraded, serial.alive) == (parallel.degraded, parallel.alive)


def test_instant_degradation_removes_everything(fig3_topo):
    medium = MediumParams(D=100.0, mu=1e9, Tb=1.0)
    cfg = SimConfig(dt=1e-3, n_particles=2000, t_max=0.05, seed=3, n_time_bins=2)
    res = simulate_two_far(fig3_topo, "P", medium, cfg)
    assert res.degraded == 2000
    assert res.hits_P[-1] == 0 and res.hits_S[-1] == 0 and res.alive == 0


def test_accounting_identity_with_degradation(fig3_topo):
    medium = MediumParams(D=100.0, mu=2.0, Tb=1.0)
    cfg = SimConfig(dt=1e-3, n_particles=5000, t_max=0.5, seed=12, n_time_bins=5)
    res = simulate_two_far(fig3_topo, "P", medium, cfg)
    # partition enforced by the result type; spot-check the numbers are live
    assert res.degraded > 0
    assert res.hits_P[-1] + res.hits_S[-1] + res.degraded + res.alive == 5000
    assert np.all(np.diff(res.hits_P) >= 0)
    assert np.all(np.diff(res.hits_S) >= 0)


def test_single_sphere_matches_closed_form():
    topo = _single_sphere_topology()
    medium = MediumParams(D=100.0, mu=0.0, Tb=1.0)
    cfg = SimConfig(dt=1e-4, n_particles=20_000, t_max=0.5, seed=31, n_time_bins=5)
    res = simulate_two_far(topo, "P", medium, cfg)
    cdf = res.cdf("P")
    ci = res.ci_halfwidth("P")
    for j, t in enumerate(res.times):
        expected = p_single(float(t), 3.0, 10.0, 100.0)
        # 3 binomial sigma plus the step-discretization allowance
        tol = 3.0 / 1.96 * ci[j] + 0.005
        assert abs(cdf[j] - expected) <= tol
    assert res.hits_S[-1] == 0


def test_absorption_bias_shrinks_with_dt():
    # position-check absorption under-counts; refining dt must close the gap
    topo = _single_sphere_topology()
    medium = MediumParams(D=100.0, mu=0.0, Tb=1.0)
    estimates = []
    for dt in (8e-3, 2e-3, 5e-4):
        cfg = SimConfig(dt=dt, n_particles=20_000, t_max=0.5, seed=47, n_time_bins=1)
        res = simulate_two_far(topo, "P", medium, cfg)
        estimates.append(res.cdf("P")[-1])
    assert estimates[0] < estimates[1] < estimates[2]
    expected = p_single(0.5, 3.0, 10.0, 100.0)
    assert all(e <= expected for e in estimates)


def test_first_hit_histogram_single_slot_matches_cdf(fig3_topo, fig3_medium):
    cfg = SimConfig(dt=2e-3, n_particles=5000, t_max=1.0, seed=5, n_time_bins=1)
    res = simulate_two_far(fig3_topo, "P", fig3_medium, cfg)
    h_p, h_s = simulate_first_hit_histogram(fig3_topo, "P", fig3_medium, cfg, Tb=1.0, L=1)
    assert h_p[0] == res.cdf("P")[-1]
    assert h_s[0] == res.cdf("S")[-1]


def test_first_hit_histogram_requires_horizon(fig3_topo, fig3_medium):
    cfg = SimConfig(dt=1e-3, n_particles=100, t_max=1.0, seed=5)
    with pytest.raises(ValueError):
        simulate_first_hit_histogram(fig3_topo, "P", fig3_medium, cfg, Tb=1.0, L=2)


def test_first_hit_histogram_matches_channel_taps():
    # compact geometry so slot taps are large relative to noise
    topo = Topology(
        x_P=[0.0, 0.0, 0.0],
        x_S=[0.0, 0.0, 0.0],
        y_P=[15.0, 0.0, 0.0],
        y_S=[0.0, 18.0, 0.0],
        a_P=5.0,
        a_S=4.0,
    )
    medium = MediumParams(D=100.0, mu=0.0, Tb=1.0)
    L, Tb = 3, 1.0
    n = 20_000
    cfg = SimConfig(dt=5e-4, n_particles=n, t_max=L * Tb, seed=8, n_time_bins=L)
    h_p, h_s = simulate_first_hit_histogram(topo, "P", medium, cfg, Tb=Tb, L=L)
    g_p = derive_geometry(topo, "P", "P")
    g_s = derive_geometry(topo, "P", "S")
    taps_p = channel_taps(g_p, 100.0, 0.0, Tb, L)
    taps_s = channel_taps(g_s, 100.0, 0.0, Tb, L)
    for emp, ana in ((h_p, taps_p), (h_s, taps_s)):
        assert emp.sum() == pytest.approx(float(ana.p_cum[-1]), abs=0.02)
        for k in range(L):
            sigma = np.sqrt(max(ana.taps[k] * (1 - ana.taps[k]), 1e-12) / n)
            assert abs(emp[k] - ana.taps[k]) <= 3.0 * sigma + 0.005
