import math

import numpy as np
import pytest

from collreg import (
    IntegratorConfig,
    MassParams,
    ParameterError,
    RingConfig,
    StepFailure,
    fd_jacobian,
    integrate,
    step_implicit_midpoint,
    step_rk4,
    symplectic_defect,
)
from collreg.integrators import (
    write_events_json,
    write_physical_csv,
    write_regularized_csv,
)
from collreg.regularized import (
    gamma_reduced,
    make_reduced_rhs,
    make_regularized_rhs,
    gamma,
    project_to_level,
    reduced_level_momentum,
    time_scale,
)


def oscillator(y):
    return (y[1], -y[0])


def test_zero_step_is_identity():
    y = np.array([1.0, 0.5])
    assert np.array_equal(step_implicit_midpoint(oscillator, y, 0.0), y)


def test_midpoint_conserves_quadratic_invariant():
    # the midpoint rule preserves quadratic first integrals exactly, so the
    # oscillator radius stays at 1 up to solver tolerance
    cfg = IntegratorConfig(step=0.1, newton_tol=1e-15)
    y = np.array([1.0, 0.0])
    for _ in range(500):
        y = step_implicit_midpoint(oscillator, y, 0.1, cfg)
    assert abs(y[0] ** 2 + y[1] ** 2 - 1.0) < 1e-13


def test_midpoint_second_order_richardson():
    ring = RingConfig.for_count(2)
    rhs = make_reduced_rhs(-1.0, 4.0 * ring.radius)
    y0 = (0.9, reduced_level_momentum(0.9, -1.0, 1e-3, 4.0 * ring.radius))
    cfg = lambda s: IntegratorConfig(step=s, newton_tol=1e-15)
    ref = integrate(rhs, y0, 1.0, cfg(1e-5), event_index=None).states[-1]
    e1 = np.max(np.abs(integrate(rhs, y0, 1.0, cfg(4e-3), event_index=None).states[-1] - ref))
    e2 = np.max(np.abs(integrate(rhs, y0, 1.0, cfg(2e-3), event_index=None).states[-1] - ref))
    assert 3.5 < e1 / e2 < 4.5


def test_midpoint_step_failure_carries_residual():
    cfg = IntegratorConfig(step=10.0, newton_tol=1e-16, newton_max_iter=2)
    stiff = lambda y: (math.sin(100.0 * y[0]) * 50.0, -50.0 * y[0])
    with pytest.raises(StepFailure) as err:
        step_implicit_midpoint(stiff, np.array([1.0, 0.0]), 10.0, cfg)
    assert math.isfinite(err.value.residual) and err.value.residual > 0.0


def test_midpoint_newton_fallback_handles_moderately_large_steps():
    # a step too large for the fixed-point contraction still converges via
    # the damped Newton path
    cfg = IntegratorConfig(step=1.9, newton_tol=1e-13, newton_max_iter=50)
    y = step_implicit_midpoint(oscillator, np.array([1.0, 0.0]), 1.9, cfg)
    # implicit midpoint of the rotation field is the Cayley rotation map
    th = 1.9
    expect = np.array([1.0 - th * th / 4.0, -th]) / (1.0 + th * th / 4.0)
    assert np.max(np.abs(y - expect)) < 1e-12


def test_rk4_accuracy_on_oscillator():
    y = np.array([1.0, 0.0])
    n, dt = 1000, 2.0 * math.pi / 1000
    for _ in range(n):
        y = step_rk4(oscillator, y, dt)
    assert np.max(np.abs(y - [1.0, 0.0])) < 1e-9


def test_one_step_map_is_symplectic():
    ring = RingConfig.for_count(2)
    rhs = make_reduced_rhs(-1.0, 4.0 * ring.radius)
    cfg = IntegratorConfig(step=1e-3, newton_tol=1e-15)
    rng = np.random.default_rng(109)
    for _ in range(50):
        s0 = rng.uniform(-2, 2, 2)
        jac = fd_jacobian(lambda w: step_implicit_midpoint(rhs, w, 1e-3, cfg), s0, step=1e-6)
        assert symplectic_defect(jac) < 1e-8


def test_zero_span_single_sample():
    rhs = make_reduced_rhs(-1.0, 2.0)
    traj = integrate(rhs, (0.5, 0.1), 0.0, IntegratorConfig(step=1e-3))
    assert len(traj) == 1
    assert traj.tau[0] == 0.0 and traj.t[0] == 0.0


def test_span_validation():
    rhs = make_reduced_rhs(-1.0, 2.0)
    with pytest.raises(ParameterError):
        integrate(rhs, (0.5, 0.1), -1.0, IntegratorConfig(step=1e-3))


def test_reduced_conservation_run_and_collision_momentum():
    # h=-1, m=1e-3, N=2: start at the collision state and watch the invariant
    # at every collision passage; the bounded in-between oscillation is the
    # second-order symplectic signature and is reported, not zero
    ring = RingConfig.for_count(2)
    m, h = 1e-3, -1.0
    a = 4.0 * ring.radius
    rhs = make_reduced_rhs(h, a)
    cfg = IntegratorConfig(step=1e-3, newton_tol=1e-14)
    traj = integrate(
        rhs, (0.0, math.sqrt(2.0 * m)), 50.0, cfg,
        time_scale=lambda s: 0.5 * s[0] * s[0],
        invariant=lambda s: gamma_reduced(s, h, m, a),
    )
    evs = traj.collision_events()
    assert len(evs) >= 6
    pc = math.sqrt(2.0 * m)
    for e in evs:
        assert abs(gamma_reduced(e.state, h, m, a)) < 1e-8
        assert abs(abs(e.state[1]) - pc) < 1e-6
    assert traj.metadata["invariant_max"] < 1e-5


def test_conservation_drift_from_generic_start():
    # started away from the collision, the invariant read at the passages sits
    # at a constant offset of order dtau^2 (the bounded oscillation sampled at
    # a fixed phase); the drift across passages stays at solver-noise level
    ring = RingConfig.for_count(2)
    m, h = 1e-3, -1.0
    a = 4.0 * ring.radius
    rhs = make_reduced_rhs(h, a)
    y0 = (1.0, reduced_level_momentum(1.0, h, m, a))
    traj = integrate(rhs, y0, 50.0, IntegratorConfig(step=1e-3, newton_tol=1e-14),
                     time_scale=lambda s: 0.5 * s[0] * s[0])
    evs = traj.collision_events()
    assert len(evs) >= 5
    g_at = [gamma_reduced(e.state, h, m, a) for e in evs]
    drift = max(abs(v - g_at[0]) for v in g_at)
    assert drift < 1e-8
    assert abs(g_at[0]) < 1e-5  # the offset itself is the method's O(dtau^2)


def test_event_localization_flatness():
    # P1 is quadratically flat in tau at a crossing (its rate carries a Q1
    # factor), so the interpolated event momentum is far more accurate than
    # the step size suggests
    ring = RingConfig.for_count(2)
    m, h = 1e-3, -1.0
    a = 4.0 * ring.radius
    rhs = make_reduced_rhs(h, a)
    traj = integrate(rhs, (0.0, math.sqrt(2.0 * m)), 16.0,
                     IntegratorConfig(step=1e-3, newton_tol=1e-14),
                     time_scale=lambda s: 0.5 * s[0] * s[0])
    e = traj.collision_events()[0]
    assert abs(e.state[0]) < 1e-12
    assert abs(abs(e.state[1]) - math.sqrt(2.0 * m)) < 1e-9


def test_monotone_clocks():
    ring = RingConfig.for_count(2)
    rhs = make_reduced_rhs(-1.0, 4.0 * ring.radius)
    traj = integrate(rhs, (0.0, math.sqrt(2e-3)), 20.0,
                     IntegratorConfig(step=1e-3),
                     time_scale=lambda s: 0.5 * s[0] * s[0])
    assert np.all(np.diff(traj.tau) > 0.0)
    assert np.all(np.diff(traj.t) >= 0.0)
    # t really does slow to a crawl near the collision passages
    k = np.argmin(np.abs(traj.states[:, 0]))
    k = min(max(k, 1), len(traj) - 2)
    assert traj.t[k + 1] - traj.t[k - 1] < 1e-5


def test_reversibility_roundtrip():
    ring = RingConfig.for_count(2)
    params = MassParams(m=1e-3, epsilon=0.25)
    cfg = IntegratorConfig(step=1e-3, newton_tol=1e-15)
    # reduced, through a collision passage
    rhs2 = make_reduced_rhs(-1.0, 4.0 * ring.radius)
    y0 = (0.0, math.sqrt(2e-3))
    fwd = integrate(rhs2, y0, 10.0, cfg, event_index=None).states[-1]
    back = integrate(rhs2, (fwd[0], -fwd[1]), 10.0, cfg, event_index=None).states[-1]
    assert abs(back[0] - y0[0]) < 1e-8 and abs(-back[1] - y0[1]) < 1e-8
    # full system
    ring3 = RingConfig.for_count(3)
    rhs4 = make_regularized_rhs(-1.0, params, ring3)
    z0 = project_to_level([0.9, 0.1, 1.0, -0.2], -1.0, params, ring3)
    fwd = integrate(rhs4, z0, 3.0, cfg, event_index=None).states[-1]
    back = integrate(rhs4, [fwd[0], fwd[1], -fwd[2], -fwd[3]], 3.0, cfg,
                     event_index=None).states[-1]
    assert np.max(np.abs(back * np.array([1, 1, -1, -1]) - z0)) < 1e-8


def test_nan_abort_carries_partial_trajectory():
    calls = {"n": 0}

    def souring(y):
        calls["n"] += 1
        if calls["n"] > 40:
            return (float("nan"), 0.0)
        return (y[1], -y[0])

    with pytest.raises(StepFailure) as err:
        integrate(souring, (1.0, 0.0), 1.0, IntegratorConfig(step=1e-2))
    assert err.value.trajectory is not None
    assert len(err.value.trajectory) >= 1


def test_integrate_rk4_path_matches_midpoint():
    ring = RingConfig.for_count(2)
    rhs = make_reduced_rhs(-1.0, 4.0 * ring.radius)
    y0 = (0.8, reduced_level_momentum(0.8, -1.0, 1e-3, 4.0 * ring.radius))
    ts = lambda s: 0.5 * s[0] * s[0]
    tr_r = integrate(rhs, y0, 2.0, IntegratorConfig(method="rk4", step=1e-3), time_scale=ts)
    tr_m = integrate(rhs, y0, 2.0, IntegratorConfig(step=1e-4, newton_tol=1e-15),
                     time_scale=ts)
    assert np.max(np.abs(tr_r.states[-1] - tr_m.states[-1])) < 1e-7
    assert abs(tr_r.t[-1] - tr_m.t[-1]) < 1e-6


def test_rk_adaptive_matches_midpoint():
    ring = RingConfig.for_count(2)
    rhs = make_reduced_rhs(-1.0, 4.0 * ring.radius)
    y0 = (0.8, reduced_level_momentum(0.8, -1.0, 1e-3, 4.0 * ring.radius))
    ts = lambda s: 0.5 * s[0] * s[0]
    tr_a = integrate(rhs, y0, 2.0, IntegratorConfig(method="rk_adaptive", step=1e-2,
                                                    adaptive_tol=1e-12), time_scale=ts)
    tr_m = integrate(rhs, y0, 2.0, IntegratorConfig(step=1e-4, newton_tol=1e-15),
                     time_scale=ts)
    assert np.max(np.abs(tr_a.states[-1] - tr_m.states[-1])) < 1e-6
    assert abs(tr_a.t[-1] - tr_m.t[-1]) < 1e-6


def test_csv_formats_and_determinism(tmp_path):
    ring = RingConfig.for_count(2)
    params = MassParams(m=1e-3, epsilon=0.0)
    h = -1.0
    a = 4.0 * ring.radius
    rhs = make_reduced_rhs(h, a)
    traj = integrate(rhs, (0.0, math.sqrt(2e-3)), 1.0,
                     IntegratorConfig(step=1e-3),
                     time_scale=lambda s: 0.5 * s[0] * s[0])
    gam = lambda s: gamma_reduced(s, h, 1e-3, a)
    p1 = tmp_path / "a.csv"
    p2 = tmp_path / "b.csv"
    write_regularized_csv(traj, p1, gam)
    write_regularized_csv(traj, p2, gam)
    b1 = p1.read_bytes()
    assert b1 == p2.read_bytes()
    assert b1.startswith(b"tau,t,Q1,Q2,P1,P2,gamma\n")
    assert b"\r" not in b1
    # reduced trajectories embed into the regularized schema with Q2 = P2 = 0
    line = b1.splitlines()[2].split(b",")
    assert line[3] == b"0" and line[5] == b"0"

    ev = tmp_path / "ev.json"
    write_events_json(traj, ev)
    assert ev.read_bytes() == b"[]\n" or b"collision" in ev.read_bytes()

    # physical schema
    from collreg import integrate_physical_oracle
    from collreg.analysis import momentum_profile
    p0 = momentum_profile(1.0, 0.25, params.m, ring.radius)
    tr = integrate_physical_oracle([1.0, -1.0, p0, -p0], 10.0, IntegratorConfig(),
                                   params, ring)
    pp = tmp_path / "phys.csv"
    write_physical_csv(tr, pp, params, ring)
    assert pp.read_bytes().startswith(b"t,q1,q2,p1,p2,H\n")


def test_invalid_method_rejected():
    with pytest.raises(ParameterError):
        IntegratorConfig(method="leapfrog")
    with pytest.raises(ParameterError):
        IntegratorConfig(step=0.0)
