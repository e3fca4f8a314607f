"""Machine-checkable invariant suite behind `collreg verify`.

Each check returns a record {name, passed, measured, tolerance, detail} and
the runner aggregates them into a JSON report.  The checks mirror the
library's mathematical contracts: symplecticity defects, chart identities,
conservation along flows, dual-route agreements (quadrature vs flow,
derived fields vs finite-difference gradients vs the chain rule), and the
one-dimensional validation case.

Checks are sized to finish in a few seconds each; the pytest acceptance
suite runs the same oracles at full scale.
"""

from __future__ import annotations

import math

import numpy as np

from . import analysis, config, integrators, physical, regularized, symplectic
from .config import MassParams, RingConfig

SEED = 20240917


def _record(name, measured, tolerance, passed=None, detail=None):
    if passed is None:
        passed = bool(measured < tolerance)
    rec = {"name": name, "passed": bool(passed), "measured": float(measured),
           "tolerance": float(tolerance)}
    if detail:
        rec["detail"] = detail
    return rec


def check_relative_map_symplectic():
    rng = np.random.default_rng(SEED)
    worst = 0.0
    for mu in rng.uniform(1e-6, 0.5, 100):
        worst = max(worst, symplectic.symplectic_defect(symplectic.build_relative_map(mu)))
    return _record("symplectic.relative_map", worst, 1e-12)


def check_euler_roundtrip():
    rng = np.random.default_rng(SEED + 1)
    worst = 0.0
    for _ in range(100):
        q = rng.uniform(1e-3, 10.0)
        p = rng.uniform(-5.0, 5.0)
        Q, P = symplectic.euler_inverse(q, p)
        q2, p2 = symplectic.euler_forward(Q, P)
        worst = max(worst, abs(q2 - q) / max(abs(q), 1.0), abs(p2 - p) / max(abs(p), 1.0))
    return _record("symplectic.euler_roundtrip", worst, 1e-14)


def check_chart_jacobian_defect():
    rng = np.random.default_rng(SEED + 2)
    worst = 0.0
    for eps in (0.0, 0.25, 0.5, 0.9):
        params = MassParams(m=1e-3, epsilon=eps)
        for _ in range(25):
            z = np.array([
                rng.uniform(0.1, 3.0) * rng.choice([-1.0, 1.0]),
                rng.uniform(-2.0, 2.0),
                rng.uniform(-2.0, 2.0),
                rng.uniform(-2.0, 2.0),
            ])
            jac = symplectic.fd_jacobian(lambda w: regularized.chart_to_physical(w, params), z)
            worst = max(worst, symplectic.symplectic_defect(jac))
    return _record("symplectic.chart_jacobian", worst, 1e-6)


def check_ring_radius():
    worst = abs(config.ring_radius(2) - 0.5)
    worst = max(worst, abs(config.ring_radius(3) - 3.0 ** -0.5))
    for N in range(2, 41):
        r = config.ring_radius(N)
        nu = N // 2
        if N % 2 == 1:
            target = sum(1.0 / math.sin(math.pi * g / N) for g in range(1, nu + 1))
        else:
            target = 0.5 + sum(1.0 / math.sin(math.pi * g / N) for g in range(1, nu))
        worst = max(worst, abs(2.0 * N * r**3 - target))
    worst = max(worst, abs(config.ring_radius(3) - config.bp_radius(3)))
    return _record("config.ring_radius", worst, 1e-12)


def check_mass_roundtrip():
    # same-order masses: the (m, epsilon) parameterization presumes it, and
    # reconstructing m2 = m(1 - epsilon) necessarily cancels as m2/m1 -> 0
    rng = np.random.default_rng(SEED + 3)
    worst = 0.0
    for _ in range(200):
        m1 = rng.uniform(1e-8, 1.0)
        m2 = rng.uniform(0.1, 1.0) * m1
        p = config.rescale_masses(m1, m2)
        worst = max(worst, abs(p.m1 - m1) / m1, abs(p.m2 - m2) / m2)
    return _record("config.mass_roundtrip", worst, 1e-15)


def check_positions_center():
    rng = np.random.default_rng(SEED + 4)
    worst = 0.0
    for N in range(2, 10):
        ring = RingConfig.for_count(N)
        for phase in rng.uniform(0.0, 2.0 * math.pi, 5):
            pos = config.primary_positions_3d(ring, phase)
            worst = max(worst, float(np.max(np.abs(pos.sum(axis=0)))))
    return _record("config.positions_center", worst, 1e-13)


def check_axis_invariance():
    rng = np.random.default_rng(SEED + 5)
    worst = 0.0
    for N in range(2, 10):
        ring = RingConfig.for_count(N)
        for z in rng.uniform(-5.0, 5.0, 50):
            for phase in rng.uniform(0.0, 2.0 * math.pi, 10):
                a = physical.infinitesimal_accel_3d(z, ring, phase)
                worst = max(worst, abs(a[0]), abs(a[1]))
    return _record("physical.axis_invariance", worst, 1e-13)


def check_field_gradient():
    rng = np.random.default_rng(SEED + 6)
    params = MassParams(m=1e-3, epsilon=0.2)
    ring = RingConfig.for_count(3)
    omega = symplectic.canonical_form(4)
    worst = 0.0
    for _ in range(100):
        q2 = rng.uniform(-2.0, 1.0)
        q1 = q2 + rng.uniform(0.3, 3.0)
        y = np.array([q1, q2, rng.uniform(-2, 2), rng.uniform(-2, 2)])
        s = 1e-6
        grad = np.zeros(4)
        for k in range(4):
            e = np.zeros(4)
            e[k] = s
            grad[k] = (physical.hamiltonian(y + e, params, ring)
                       - physical.hamiltonian(y - e, params, ring)) / (2 * s)
        worst = max(worst, float(np.max(np.abs(
            omega @ grad - physical.physical_field(y, params, ring)))))
    return _record("physical.field_gradient", worst, 1e-7)


def check_general_equivalence():
    rng = np.random.default_rng(SEED + 7)
    worst = 0.0
    for N in (2, 3, 5, 8):
        ring = RingConfig.for_count(N)
        gen = config.GeneralSymmetricConfig.from_ring(ring)
        params = MassParams(m=1e-3, epsilon=0.3)
        for _ in range(25):
            q2 = rng.uniform(-2.0, 1.0)
            q1 = q2 + rng.uniform(0.3, 3.0)
            y = np.array([q1, q2, rng.uniform(-2, 2), rng.uniform(-2, 2)])
            d = physical.axis_field_general(y, params, gen, t=rng.uniform(0, 10)) \
                - physical.physical_field(y, params, ring)
            worst = max(worst, float(np.max(np.abs(d))))
    return _record("physical.general_equivalence", worst, 1e-13)


def check_energy_conservation():
    params = MassParams(m=1e-3, epsilon=0.0)
    ring = RingConfig.for_count(2)
    q0 = 1.0
    p0 = analysis.momentum_profile(q0, 0.25, params.m, ring.radius)
    cfg = integrators.IntegratorConfig(method="rk_adaptive", adaptive_tol=1e-12)
    traj = integrators.integrate_physical_oracle(
        [q0, -q0, p0, -p0], 1e6, cfg, params, ring, stop_at_q=1e3)
    return _record("physical.energy_conservation", traj.metadata["energy_drift"], 1e-9)


def check_defining_identity():
    rng = np.random.default_rng(SEED + 8)
    worst = 0.0
    for eps in (0.0, 0.25, 0.5, 0.9):
        params = MassParams(m=1e-3, epsilon=eps)
        for N in (2, 3, 4, 8):
            ring = RingConfig.for_count(N)
            for _ in range(63):
                z = np.array([
                    rng.uniform(0.3, 2.5) * rng.choice([-1.0, 1.0]),
                    rng.uniform(-2.0, 2.0),
                    rng.uniform(-2.0, 2.0),
                    rng.uniform(-2.0, 2.0),
                ])
                h = rng.uniform(-2.0, 1.0)
                g = regularized.time_scale(z, params)
                lhs = regularized.gamma(z, h, params, ring)
                rhs = g * (physical.hamiltonian(
                    regularized.chart_to_physical(z, params), params, ring) - h)
                worst = max(worst, abs(lhs - rhs) / max(1.0, abs(lhs)))
    return _record("regularized.defining_identity", worst, 1e-12)


def check_zero_set():
    rng = np.random.default_rng(SEED + 9)
    params = MassParams(m=1e-3, epsilon=0.25)
    ring = RingConfig.for_count(3)
    worst = 0.0
    n = 0
    while n < 100:
        z = np.array([
            rng.uniform(0.3, 2.0) * rng.choice([-1.0, 1.0]),
            rng.uniform(-1.0, 1.0),
            rng.uniform(-1.0, 1.0),
            rng.uniform(-1.0, 1.0),
        ])
        h = rng.uniform(-2.0, 0.5)
        try:
            zs = regularized.project_to_level(z, h, params, ring)
        except Exception:
            continue
        n += 1
        worst = max(worst, abs(physical.hamiltonian(
            regularized.chart_to_physical(zs, params), params, ring) - h))
    return _record("regularized.zero_set", worst, 1e-10)


def check_chart_roundtrip():
    rng = np.random.default_rng(SEED + 10)
    worst = 0.0
    for eps in (0.0, 0.3, 0.7):
        params = MassParams(m=1e-3, epsilon=eps)
        for _ in range(34):
            q2 = rng.uniform(-2.0, 1.0)
            q1 = q2 + rng.uniform(1e-3, 4.0)
            y = np.array([q1, q2, rng.uniform(-3, 3), rng.uniform(-3, 3)])
            back = regularized.chart_to_physical(
                regularized.chart_to_regularized(y, params), params)
            worst = max(worst, float(np.max(np.abs(back - y))) / max(1.0, float(np.max(np.abs(y)))))
    return _record("regularized.chart_roundtrip", worst, 1e-13)


def check_collision_regularity():
    params = MassParams(m=1e-3, epsilon=0.3)
    ring = RingConfig.for_count(3)
    h = -1.0
    qs = np.linspace(-0.05, 0.05, 41)
    worst = 0.0
    for Q2, P1, P2 in ((0.3, 0.05, -0.2), (-0.1, -0.03, 0.4)):
        vals = np.array([
            [regularized.gamma((Q1, Q2, P1, P2), h, params, ring),
             *regularized.regularized_field((Q1, Q2, P1, P2), h, params, ring)]
            for Q1 in qs
        ])
        if not np.all(np.isfinite(vals)):
            return _record("regularized.collision_regularity", math.inf, 1e-8)
        # interior points against the cubic through their four outer neighbours
        for j in range(vals.shape[1]):
            for k in range(2, len(qs) - 2):
                xs = np.array([qs[k - 2], qs[k - 1], qs[k + 1], qs[k + 2]])
                ys = np.array([vals[k - 2, j], vals[k - 1, j], vals[k + 1, j], vals[k + 2, j]])
                pred = np.polyval(np.polyfit(xs, ys, 3), qs[k])
                worst = max(worst, abs(pred - vals[k, j]))
    return _record("regularized.collision_regularity", worst, 1e-8)


def check_collision_momentum():
    rng = np.random.default_rng(SEED + 11)
    worst = 0.0
    for eps in (0.0, 0.3, 0.6):
        params = MassParams(m=1e-3, epsilon=eps)
        ring = RingConfig.for_count(4)
        pc = regularized.collision_momentum(params)
        for _ in range(30):
            z = (0.0, rng.uniform(-2, 2), pc * rng.choice([-1.0, 1.0]), rng.uniform(-2, 2))
            worst = max(worst, abs(regularized.gamma(z, rng.uniform(-2, 1), params, ring)))
    return _record("regularized.collision_momentum", worst, 1e-14)


def check_invariant_plane_field():
    rng = np.random.default_rng(SEED + 12)
    params = MassParams(m=1e-3, epsilon=0.0)
    ring = RingConfig.for_count(3)
    worst = 0.0
    for _ in range(50):
        z = (rng.uniform(-3, 3), 0.0, rng.uniform(-3, 3), 0.0)
        f = regularized.regularized_field(z, rng.uniform(-2, 1), params, ring)
        worst = max(worst, abs(f[1]), abs(f[3]))
    return _record("regularized.invariant_plane_field", worst, 0.0, passed=worst == 0.0,
                   detail="Q2' and P2' vanish identically on the symmetric plane")


def check_reflection_symmetry():
    rng = np.random.default_rng(SEED + 13)
    params = MassParams(m=1e-3, epsilon=0.4)
    ring = RingConfig.for_count(5)
    worst = 0.0
    for _ in range(50):
        z = rng.uniform(-2, 2, 4)
        zr = np.array([z[0], z[1], -z[2], -z[3]])
        h = rng.uniform(-2, 1)
        f = regularized.regularized_field(z, h, params, ring)
        fr = regularized.regularized_field(zr, h, params, ring)
        worst = max(worst, float(np.max(np.abs(fr - f * np.array([-1.0, -1.0, 1.0, 1.0])))))
    return _record("regularized.reflection_symmetry", worst, 0.0, passed=worst == 0.0,
                   detail="momentum flip reverses the flow exactly")


def check_regularized_field_gradient():
    rng = np.random.default_rng(SEED + 14)
    params = MassParams(m=1e-3, epsilon=0.35)
    ring = RingConfig.for_count(3)
    omega = symplectic.canonical_form(4)
    h = -0.7
    worst = 0.0
    for _ in range(100):
        z = rng.uniform(-2, 2, 4)
        s = 1e-6
        grad = np.zeros(4)
        for k in range(4):
            e = np.zeros(4)
            e[k] = s
            grad[k] = (regularized.gamma(z + e, h, params, ring)
                       - regularized.gamma(z - e, h, params, ring)) / (2 * s)
        worst = max(worst, float(np.max(np.abs(
            omega @ grad - regularized.regularized_field(z, h, params, ring)))))
    return _record("regularized.field_gradient", worst, 1e-7)


def check_reduced_restriction():
    rng = np.random.default_rng(SEED + 15)
    params = MassParams(m=1e-3, epsilon=0.0)
    worst = 0.0
    for N in (2, 3, 8):
        ring = RingConfig.for_count(N)
        a = 4.0 * ring.radius
        for _ in range(40):
            Q1, P1 = rng.uniform(-3, 3, 2)
            h = rng.uniform(-2, 1)
            f4 = regularized.regularized_field((Q1, 0.0, P1, 0.0), h, params, ring)
            f2 = regularized.reduced_field((Q1, P1), h, a)
            g4 = regularized.gamma((Q1, 0.0, P1, 0.0), h, params, ring)
            g2 = regularized.gamma_reduced((Q1, P1), h, params.m, a)
            worst = max(worst, abs(f4[0] - f2[0]), abs(f4[2] - f2[1]), abs(g4 - g2))
    return _record("regularized.reduced_restriction", worst, 1e-13)


def check_reduced_chain_rule(field_fn=None):
    """Decisive sign arbitration: the reduced field, pushed through the chart
    q = Q1^2/4, p = P1/Q1, dt = (Q1^2/2) dtau on the level set, must reproduce
    the physical force of the symmetric problem."""
    rng = np.random.default_rng(SEED + 16)
    params = MassParams(m=1e-3, epsilon=0.0)
    ring = RingConfig.for_count(3)
    a = 4.0 * ring.radius
    r = ring.radius
    m = params.m
    h = -1.0
    if field_fn is None:
        field_fn = lambda s: regularized.reduced_field(s, h, a)
    worst = 0.0
    for _ in range(60):
        Q1 = rng.uniform(0.2, 2.4)
        try:
            P1 = regularized.reduced_level_momentum(Q1, h, m, a) * rng.choice([-1.0, 1.0])
        except Exception:
            continue
        dQ1, dP1 = field_fn((Q1, P1))
        g = 0.5 * Q1 * Q1
        q = 0.25 * Q1 * Q1
        pdot_chain = (dP1 / Q1 - P1 * dQ1 / (Q1 * Q1)) / g
        pdot_phys = -q / (q * q + r * r) ** 1.5 - m / (4.0 * q * q)
        worst = max(worst, abs(pdot_chain - pdot_phys))
    return _record("regularized.reduced_chain_rule", worst, 1e-10)


def check_step_symplectic():
    rng = np.random.default_rng(SEED + 17)
    ring = RingConfig.for_count(2)
    rhs = regularized.make_reduced_rhs(-1.0, 4.0 * ring.radius)
    cfg = integrators.IntegratorConfig(step=1e-3, newton_tol=1e-15)
    worst = 0.0
    for _ in range(50):
        s0 = rng.uniform(-2, 2, 2)
        jac = symplectic.fd_jacobian(
            lambda w: integrators.step_implicit_midpoint(rhs, w, 1e-3, cfg), s0, step=1e-6)
        worst = max(worst, symplectic.symplectic_defect(jac))
    return _record("integrators.step_symplectic", worst, 1e-8)


def check_reversibility():
    ring = RingConfig.for_count(2)
    params = MassParams(m=1e-3, epsilon=0.25)
    cfg = integrators.IntegratorConfig(step=1e-3, newton_tol=1e-15)
    worst = 0.0
    # reduced system
    rhs2 = regularized.make_reduced_rhs(-1.0, 4.0 * ring.radius)
    y = (0.7, regularized.reduced_level_momentum(0.7, -1.0, params.m, 4.0 * ring.radius))
    fwd = integrators.integrate(rhs2, y, 2.0, cfg, event_index=None).states[-1]
    back = integrators.integrate(rhs2, (fwd[0], -fwd[1]), 2.0, cfg, event_index=None).states[-1]
    worst = max(worst, abs(back[0] - y[0]), abs(back[1] + y[1]))
    # full system
    rhs4 = regularized.make_regularized_rhs(-1.0, params, RingConfig.for_count(3))
    z = regularized.project_to_level((0.9, 0.1, 1.0, -0.2), -1.0, params, RingConfig.for_count(3))
    fwd = integrators.integrate(rhs4, z, 2.0, cfg, event_index=None).states[-1]
    zr = np.array([fwd[0], fwd[1], -fwd[2], -fwd[3]])
    back = integrators.integrate(rhs4, zr, 2.0, cfg, event_index=None).states[-1]
    worst = max(worst, float(np.max(np.abs(back * np.array([1, 1, -1, -1]) - z))))
    return _record("integrators.reversibility", worst, 1e-8)


def check_gamma_conservation():
    """Secular drift of the conserved quantity, read at matched phase points
    (the collision passages); the pointwise bounded oscillation of a
    second-order symplectic method is reported separately."""
    ring = RingConfig.for_count(2)
    m, h = 1e-3, -1.0
    a = 4.0 * ring.radius
    rhs = regularized.make_reduced_rhs(h, a)
    cfg = integrators.IntegratorConfig(step=1e-3, newton_tol=1e-14)
    g = lambda s: 0.5 * s[0] * s[0]
    traj = integrators.integrate(
        rhs, (0.0, math.sqrt(2.0 * m)), 40.0, cfg,
        time_scale=g, invariant=lambda s: regularized.gamma_reduced(s, h, m, a))
    evs = traj.collision_events()
    if len(evs) < 3:
        return _record("integrators.gamma_conservation", math.inf, 1e-8,
                       detail="too few collision passages")
    g_at = [regularized.gamma_reduced(e.state, h, m, a) for e in evs]
    drift = max(abs(v - g_at[0]) for v in g_at)
    osc = traj.metadata["invariant_max"]
    return _record("integrators.gamma_conservation", drift, 1e-8,
                   detail=f"bounded oscillation {osc:.3e} over {len(evs)} passages")


def check_monotone_clocks():
    ring = RingConfig.for_count(2)
    rhs = regularized.make_reduced_rhs(-1.0, 4.0 * ring.radius)
    cfg = integrators.IntegratorConfig(step=1e-3)
    g = lambda s: 0.5 * s[0] * s[0]
    traj = integrators.integrate(rhs, (0.0, math.sqrt(2e-3)), 20.0, cfg, time_scale=g)
    dt = np.diff(traj.t)
    dtau = np.diff(traj.tau)
    ok = bool(np.all(dt >= 0.0) and np.all(dtau > 0.0))
    return _record("integrators.monotone_clocks", 0.0 if ok else 1.0, 0.5, passed=ok)


def check_turning_monotone():
    ring = RingConfig.for_count(2)
    hs = np.arange(-2.0, -0.05, 0.1)
    qs = [analysis.turning_point(h, 1e-3, ring.radius) for h in hs]
    ok = all(qs[i] < qs[i + 1] for i in range(len(qs) - 1))
    return _record("analysis.turning_monotone", 0.0 if ok else 1.0, 0.5, passed=ok)


def check_period_agreement():
    r = config.ring_radius(3)
    tq = analysis.period(-1.0, 1e-3, r, method="quadrature")
    tf = analysis.period(-1.0, 1e-3, r, method="flow", step=5e-4)
    rel = abs(tq - tf) / tq
    return _record("analysis.period_agreement", rel, 1e-5)


def check_first_integral():
    ring = RingConfig.for_count(3)
    m, h = 1e-3, -1.0
    a = 4.0 * ring.radius
    rhs = regularized.make_reduced_rhs(h, a)
    cfg = integrators.IntegratorConfig(step=2e-5, newton_tol=1e-15)
    y0 = (1.0, regularized.reduced_level_momentum(1.0, h, m, a))
    traj = integrators.integrate(rhs, y0, 1.0, cfg, event_index=None, record_every=10)
    worst = 0.0
    for Q1, P1 in traj.states:
        if Q1 <= 0.3 or P1 <= 0.05:
            continue
        q = 0.25 * Q1 * Q1
        worst = max(worst, abs(P1 / Q1 - analysis.momentum_profile(q, h, m, ring.radius)))
    return _record("analysis.first_integral", worst, 1e-9)


def check_classify():
    ok = (analysis.classify(-0.5).kind == "Periodic"
          and analysis.classify(0.0).kind == "Parabolic"
          and analysis.classify(0.1).kind == "Hyperbolic"
          and analysis.classify(5e-13).kind == "Parabolic")
    ok = ok and abs(analysis.escape_speed(0.25) - 0.5) == 0.0 and analysis.escape_speed(0.0) == 0.0
    return _record("analysis.classify", 0.0 if ok else 1.0, 0.5, passed=ok)


def check_level_set():
    a = 4.0 * config.ring_radius(3)
    pts = analysis.level_set_sample(-1.0, 1e-3, a, (-4.0, 4.0), (-3.0, 3.0), 161)
    if len(pts) == 0:
        return _record("analysis.level_set", math.inf, 1e-10, detail="empty level set")
    resid = max(abs(regularized.gamma_reduced(p, -1.0, 1e-3, a)) for p in pts)
    as_set = {(x, y) for x, y in pts}
    sym = all((-x, y) in as_set and (x, -y) in as_set and (-x, -y) in as_set for x, y in as_set)
    return _record("analysis.level_set", resid, 1e-10, passed=bool(resid < 1e-10 and sym),
                   detail=f"{len(pts)} points, mirror-symmetric: {sym}")


def check_kepler1d():
    rep = analysis.kepler1d_validation(-0.5, 1.0)
    passed = (rep["energy_relation_residual"] < 1e-9
              and rep["collision_speed_max_dev"] < 1e-8
              and abs(rep["omega_sq_measured"] / rep["omega_sq_expected"] - 1.0) < 1e-6
              and rep["fft_peak_ratio"] > 1e3
              and abs(rep["x_turning_measured"] - rep["x_turning_expected"]) < 1e-5)
    return _record("analysis.kepler1d", rep["energy_relation_residual"], 1e-9, passed=passed,
                   detail=f"speed dev {rep['collision_speed_max_dev']:.2e}, "
                          f"omega_sq ratio {rep['omega_sq_measured'] / rep['omega_sq_expected']:.9f}, "
                          f"fft ratio {rep['fft_peak_ratio']:.1e}")


CHECKS = [
    ("symplectic.relative_map", check_relative_map_symplectic),
    ("symplectic.euler_roundtrip", check_euler_roundtrip),
    ("symplectic.chart_jacobian", check_chart_jacobian_defect),
    ("config.ring_radius", check_ring_radius),
    ("config.mass_roundtrip", check_mass_roundtrip),
    ("config.positions_center", check_positions_center),
    ("physical.axis_invariance", check_axis_invariance),
    ("physical.field_gradient", check_field_gradient),
    ("physical.general_equivalence", check_general_equivalence),
    ("physical.energy_conservation", check_energy_conservation),
    ("regularized.defining_identity", check_defining_identity),
    ("regularized.zero_set", check_zero_set),
    ("regularized.chart_roundtrip", check_chart_roundtrip),
    ("regularized.collision_regularity", check_collision_regularity),
    ("regularized.collision_momentum", check_collision_momentum),
    ("regularized.invariant_plane_field", check_invariant_plane_field),
    ("regularized.reflection_symmetry", check_reflection_symmetry),
    ("regularized.field_gradient", check_regularized_field_gradient),
    ("regularized.reduced_restriction", check_reduced_restriction),
    ("regularized.reduced_chain_rule", check_reduced_chain_rule),
    ("integrators.step_symplectic", check_step_symplectic),
    ("integrators.reversibility", check_reversibility),
    ("integrators.gamma_conservation", check_gamma_conservation),
    ("integrators.monotone_clocks", check_monotone_clocks),
    ("analysis.turning_monotone", check_turning_monotone),
    ("analysis.period_agreement", check_period_agreement),
    ("analysis.first_integral", check_first_integral),
    ("analysis.classify", check_classify),
    ("analysis.level_set", check_level_set),
    ("analysis.kepler1d", check_kepler1d),
]


def run_checks(name_filter: str | None = None) -> dict:
    """Run the (optionally filtered) suite; returns the JSON-ready report."""
    results = [fn() for name, fn in CHECKS if name_filter is None or name_filter in name]
    return {
        "schema": 1,
        "all_passed": all(r["passed"] for r in results),
        "checks": results,
    }
