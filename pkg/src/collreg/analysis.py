"""Orbit classification, turning points, periods, level sets, and the
one-dimensional gravitational validation case.

Everything here concerns the symmetric problem (eps = 0, both bodies mirror
images through the ring plane), whose single degree of freedom makes each
quantity computable two independent ways: by quadrature in the physical chart
and by following the regularized flow through collisions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import AccuracyError, DomainError, ParameterError
from .integrators import IntegratorConfig, integrate
from .regularized import gamma_reduced, make_reduced_rhs

__all__ = [
    "OrbitClass",
    "classify",
    "escape_speed",
    "momentum_radicand",
    "momentum_profile",
    "turning_point",
    "period",
    "period_report",
    "level_set_sample",
    "kepler1d_validation",
]


@dataclass(frozen=True)
class OrbitClass:
    kind: str  # "Periodic" | "Parabolic" | "Hyperbolic"
    h: float


def classify(h: float, tol: float = 1e-12) -> OrbitClass:
    """Sign of the energy decides the fate of the symmetric problem:
    bounded collision-bounce motion, parabolic escape, or hyperbolic escape.

    The tolerance band around h = 0 exists because exact parabolicity is
    measure zero; it only relabels that boundary.
    """
    if tol < 0.0:
        raise ParameterError(f"tolerance must be nonnegative, got {tol}")
    if h < -tol:
        kind = "Periodic"
    elif h > tol:
        kind = "Hyperbolic"
    else:
        kind = "Parabolic"
    return OrbitClass(kind=kind, h=h)


def escape_speed(h: float) -> float:
    """Terminal speed sqrt(h) of an unbounded symmetric orbit."""
    if h < 0.0:
        raise DomainError(f"bounded motion (h={h} < 0) has no escape speed")
    return math.sqrt(h)


def momentum_radicand(q: float, h: float, m: float, r: float) -> float:
    """p^2 along the symmetric orbit of energy h at separation coordinate q > 0."""
    return h + 2.0 / math.sqrt(q * q + r * r) + m / (2.0 * q)


def momentum_profile(q: float, h: float, m: float, r: float) -> float:
    """Positive branch of the first integral: p(q) = sqrt(h + 2/sqrt(q^2+r^2) + m/(2q))."""
    if not q > 0.0:
        raise DomainError(f"profile needs q > 0, got {q}")
    rad = momentum_radicand(q, h, m, r)
    if rad < 0.0:
        raise DomainError(f"q={q} lies beyond the turning point (p^2 = {rad} < 0)")
    return math.sqrt(rad)


def turning_point(h: float, m: float, r: float) -> float:
    """Unique q > 0 where the radicand vanishes, for h < 0.

    The radicand is strictly decreasing in q, so a bracketed Brent solve is
    enough; monotone increasing in h.
    """
    from scipy.optimize import brentq

    if h >= 0.0:
        raise DomainError(f"turning point exists only for h < 0, got h={h}")
    lo = 1e-300 if m > 0.0 else 1e-12
    if m == 0.0 and momentum_radicand(lo, h, m, r) <= 0.0:
        raise DomainError(f"no admissible region at h={h} with m=0 and r={r}")
    hi = 1.0
    while momentum_radicand(hi, h, m, r) > 0.0:
        hi *= 2.0
        if hi > 1e12:
            raise DomainError(f"radicand does not change sign below q=1e12 at h={h}")
    return brentq(lambda q: momentum_radicand(q, h, m, r), lo, hi, xtol=1e-14, rtol=8.9e-16)


@lru_cache(maxsize=16)
def _gauss_nodes(n: int):
    from scipy.special import roots_legendre

    return roots_legendre(n)


def _period_quadrature(h: float, m: float, r: float, nodes: int) -> float:
    """T = 2 * integral_0^qmax dq / p(q) after q = qmax sin^2(theta).

    The substitution clusters Gauss-Legendre nodes quadratically at both ends,
    which tames the 1/sqrt(q) start (for m > 0), the sqrt(qmax - q) top, and
    the O(sqrt(m)) boundary layer where the mutual term hands over to the ring
    term.  Raises AccuracyError when doubling the nodes moves the answer.
    """
    qmax = turning_point(h, m, r)
    x, w = _gauss_nodes(nodes)

    def total(xs, ws):
        acc = 0.0
        for xv, wv in zip(xs, ws):
            th = 0.25 * math.pi * (xv + 1.0)
            s, c = math.sin(th), math.cos(th)
            q = qmax * s * s
            p = math.sqrt(momentum_radicand(q, h, m, r))
            acc += wv * 0.25 * math.pi * 2.0 * qmax * s * c / p
        return 2.0 * acc

    value = total(x, w)
    x2, w2 = _gauss_nodes(2 * nodes)
    check = total(x2, w2)
    if abs(check - value) > 1e-8 * max(1.0, abs(value)):
        raise AccuracyError(
            f"period quadrature not converged at {nodes} nodes "
            f"(refinement moved it by {abs(check - value):.3e})",
            estimate=check,
        )
    return check


def _period_flow(h: float, m: float, a: float, step: float):
    """Follow the reduced regularized flow from one collision to the next.

    Returns (T, tau_half): the physical time between consecutive collisions
    (one full bounce of the separation, which is the physical period) and the
    fictitious time between them (half of the closed double-cover loop).
    """
    rhs = make_reduced_rhs(h, a)
    cfg = IntegratorConfig(method="implicit_midpoint", step=step)
    y0 = (0.0, math.sqrt(2.0 * m))
    g = lambda s: 0.5 * s[0] * s[0]
    span = 50.0
    for _ in range(6):
        traj = integrate(rhs, y0, span, cfg, time_scale=g)
        if traj.collision_events():
            ev = traj.collision_events()[0]
            return ev.t, ev.tau
        span *= 4.0
    raise AccuracyError(f"no collision return found within tau span {span} at h={h}")


def period(h: float, m: float, r: float, method: str = "quadrature",
           nodes: int = 128, step: float = 2e-4) -> float:
    """Physical-time period of the symmetric collision orbit at energy h < 0.

    quadrature: 2 * integral of dq/p with the endpoint-taming substitution.
    flow: fictitious-time integration of the regularized system from collision
    to collision, reading the physical period off the dual clock.
    """
    if h >= 0.0:
        raise DomainError(f"periodic orbits require h < 0, got h={h}")
    if method == "quadrature":
        return _period_quadrature(h, m, r, nodes)
    if method == "flow":
        if not m > 0.0:
            raise DomainError("the flow method starts at a collision and needs m > 0")
        T, _ = _period_flow(h, m, 4.0 * r, step)
        return T
    raise ParameterError(f"unknown period method {method!r}")


def period_report(h: float, m: float, N: int, nodes: int = 128, step: float = 2e-4) -> dict:
    """Both period computations plus the fictitious-time period of the full
    closed orbit (two collision passages in the double cover)."""
    from .config import ring_radius

    r = ring_radius(N)
    T_flow, tau_half = _period_flow(h, m, 4.0 * r, step)
    return {
        "h": h,
        "m": m,
        "N": N,
        "T_quadrature": _period_quadrature(h, m, r, nodes),
        "T_flow": T_flow,
        "tau_period": 2.0 * tau_half,
    }


def _mirror_linspace(lo: float, hi: float, n: int) -> np.ndarray:
    """linspace that is bitwise symmetric under negation when lo == -hi.

    Plain linspace accumulates rounding asymmetrically; building the negative
    half by negating the positive half keeps mirrored grid lines (and hence
    mirrored scan brackets) exact.  Symmetric ranges get an odd point count.
    """
    if lo != -hi:
        return np.linspace(lo, hi, n)
    half = np.linspace(0.0, hi, n // 2 + 1)
    return np.concatenate([-half[:0:-1], half])


def level_set_sample(
    h: float,
    m: float,
    a: float,
    q1_range: tuple = (-4.0, 4.0),
    p1_range: tuple = (-3.0, 3.0),
    resolution: int = 201,
) -> np.ndarray:
    """Points on the reduced level curve gamma_reduced = 0 inside a grid window.

    Each grid line is scanned for sign changes and every bracket is polished
    by bisection; bisection (rather than an open method) keeps mirrored
    brackets bitwise mirrored, so the output inherits the exact evenness of
    the curve in both Q1 and P1.  Every returned point satisfies
    |gamma_reduced| < 1e-10.  An empty intersection returns an empty array.
    """
    if resolution < 2:
        raise ParameterError(f"resolution must be at least 2, got {resolution}")

    def g(Q1, P1):
        return gamma_reduced((Q1, P1), h, m, a)

    q_grid = _mirror_linspace(q1_range[0], q1_range[1], resolution)
    p_grid = _mirror_linspace(p1_range[0], p1_range[1], resolution)
    pts = []

    def polish(f, lo, hi, flo):
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            if mid == lo or mid == hi:
                break
            fm = f(mid)
            if fm == 0.0:
                return mid
            if (fm > 0.0) == (flo > 0.0):
                lo = mid
                flo = fm
            else:
                hi = mid
        return 0.5 * (lo + hi)

    for P1 in p_grid:  # scan along Q1
        vals = [g(Q1, P1) for Q1 in q_grid]
        for k in range(resolution - 1):
            if vals[k] * vals[k + 1] < 0.0:
                root = polish(lambda Q: g(Q, P1), q_grid[k], q_grid[k + 1], vals[k])
                if abs(g(root, P1)) < 1e-10:
                    pts.append((root, P1))
    for Q1 in q_grid:  # scan along P1
        vals = [g(Q1, P1) for P1 in p_grid]
        for k in range(resolution - 1):
            if vals[k] * vals[k + 1] < 0.0:
                root = polish(lambda P: g(Q1, P), p_grid[k], p_grid[k + 1], vals[k])
                if abs(g(Q1, root)) < 1e-10:
                    pts.append((Q1, root))
    if not pts:
        return np.empty((0, 2))
    out = np.array(sorted(pts))
    return out


def kepler1d_validation(h: float, mu_grav: float, step: float = 5e-4,
                        n_periods: int = 8) -> dict:
    """Validation on the one-dimensional two-body collision problem.

    The square-root chart x = u^2/2, y = v/u with dt = u^2 dtau turns the
    energy-h motion under H = y^2/2 - mu/x into the regular quadratic system
    generated by G = v^2/2 - h u^2 - 2 mu, i.e. a harmonic oscillation of
    u with omega^2 = 2|h| when h < 0, whose zero set is the energy relation

        mu = v^2/4 - (h/2) u^2.

    The report carries the measured residual of that relation along an
    integrated orbit, the collision-transit speed against |v| = 2 sqrt(mu),
    the turning point of x against mu/|h|, the measured oscillation frequency,
    and an FFT purity ratio of u(tau).
    """
    if h >= 0.0:
        raise DomainError(f"validation case is the bounded one, needs h < 0, got {h}")
    if not mu_grav > 0.0:
        raise ParameterError(f"gravitational parameter must be positive, got {mu_grav}")

    two_h = 2.0 * h

    def rhs(yv):
        u, v = yv
        return (v, two_h * u)

    omega_sq = -two_h
    period_tau = 2.0 * math.pi / math.sqrt(omega_sq)
    span = n_periods * period_tau
    v0 = 2.0 * math.sqrt(mu_grav)
    cfg = IntegratorConfig(method="implicit_midpoint", step=step)
    g = lambda s: s[0] * s[0]
    traj = integrate(rhs, (0.0, v0), span, cfg, time_scale=g)

    us = traj.states[:, 0]
    vs = traj.states[:, 1]
    residual = np.max(np.abs(0.25 * vs**2 - 0.5 * h * us**2 - mu_grav))

    speeds = [abs(e.state[1]) for e in traj.collision_events()]
    speed_dev = max(abs(s - v0) for s in speeds) if speeds else float("nan")

    x_meas = 0.5 * float(np.max(us)) ** 2
    x_expect = mu_grav / abs(h)

    crossings = [e.tau for e in traj.collision_events()]
    if len(crossings) >= 2:
        gaps = np.diff(crossings)
        omega_meas_sq = (math.pi / float(np.mean(gaps))) ** 2
    else:
        omega_meas_sq = float("nan")

    from scipy.signal.windows import blackmanharris

    window = blackmanharris(len(us))
    spec = np.abs(np.fft.rfft(us * window))
    spec[0] = 0.0
    peak = int(np.argmax(spec))
    lobe = 5  # main-lobe half width of the 4-term window, in bins
    side = np.concatenate([spec[: max(peak - lobe, 0)], spec[peak + lobe + 1:]])
    ratio = float(spec[peak] / np.max(side)) if side.size and np.max(side) > 0 else float("inf")

    return {
        "h": h,
        "mu_grav": mu_grav,
        "energy_relation_residual": float(residual),
        "collision_count": len(speeds),
        "collision_speed_expected": v0,
        "collision_speed_max_dev": float(speed_dev),
        "x_turning_measured": x_meas,
        "x_turning_expected": x_expect,
        "omega_sq_measured": omega_meas_sq,
        "omega_sq_expected": omega_sq,
        "fft_peak_ratio": ratio,
    }
