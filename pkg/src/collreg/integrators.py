"""Structure-preserving and oracle time stepping, dual clocks, event logging.

The production path for regularized systems is the implicit midpoint rule:
it is symplectic for arbitrary smooth Hamiltonians, which matters here because
the regularized Hamiltonian couples P2^2 with Q1^2 and is not separable.
Physical time is accumulated alongside fictitious time with the same
second-order midpoint quadrature of dt/dtau.

A conventional adaptive Runge-Kutta pair (through scipy) integrates the
physical chart as an equivalence oracle; it is valid only away from
collisions and aborts at a configurable proximity guard, which is precisely
the failure mode the regularized chart removes.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .config import MassParams, RingConfig
from .errors import CollisionError, ParameterError, StepFailure
from .physical import hamiltonian, make_physical_rhs

__all__ = [
    "IntegratorConfig",
    "Event",
    "Trajectory",
    "step_implicit_midpoint",
    "step_rk4",
    "integrate",
    "integrate_physical_oracle",
    "write_regularized_csv",
    "write_physical_csv",
    "write_events_json",
]

METHODS = ("implicit_midpoint", "rk4", "rk_adaptive")
EVENT_KINDS = ("collision", "chart_switch", "escape_threshold")


@dataclass(frozen=True)
class IntegratorConfig:
    method: str = "implicit_midpoint"
    step: float = 1e-3
    newton_tol: float = 1e-13
    newton_max_iter: int = 50
    adaptive_tol: float = 1e-12

    def __post_init__(self):
        if self.method not in METHODS:
            raise ParameterError(f"unknown method {self.method!r}; choose from {METHODS}")
        if not self.step > 0.0:
            raise ParameterError(f"step must be positive, got {self.step}")
        if not (self.newton_tol > 0.0 and self.adaptive_tol > 0.0):
            raise ParameterError("tolerances must be positive")


@dataclass(frozen=True)
class Event:
    """A localized happening along a trajectory.

    index is the position of the last recorded sample at or before the event;
    tau, t and state are sub-step interpolated at the event itself.
    """

    index: int
    kind: str
    tau: float
    t: float
    state: tuple
    detail: Optional[str] = None


@dataclass
class Trajectory:
    """Ordered samples of one run with both clocks and its event log.

    tau is strictly increasing; t is nondecreasing (the physical clock can
    only freeze, at collisions, never run backwards).
    """

    tau: np.ndarray
    t: np.ndarray
    states: np.ndarray
    events: list = field(default_factory=list)
    metadata: dict = field(default_factory=dict)

    def __len__(self):
        return len(self.tau)

    def collision_events(self):
        return [e for e in self.events if e.kind == "collision"]


def _tuple_state(y) -> tuple:
    return tuple(float(v) for v in np.asarray(y, dtype=float).ravel())


def step_implicit_midpoint(field, y, dstep: float, cfg: IntegratorConfig | None = None):
    """One step of y+ = y + dstep * field((y + y+)/2).

    Fixed-point iteration with an explicit-Euler predictor; after ten stalled
    iterations it switches to a damped Newton solve on the residual (Jacobian
    by central differences).  Raises StepFailure with the last residual if the
    allowed iterations are exhausted.
    """
    if cfg is None:
        cfg = IntegratorConfig(step=abs(dstep) if dstep else 1.0)
    y0 = _tuple_state(y)
    out = _midpoint_kernel(field, y0, dstep, cfg.newton_tol, cfg.newton_max_iter)
    return np.array(out)


def _midpoint_kernel(field, y, dstep, tol, max_iter):
    """Tuple-in tuple-out midpoint solve (hot path, no numpy in the loop)."""
    if dstep == 0.0:
        return y
    n = len(y)
    f0 = field(y)
    yn = tuple(y[k] + dstep * f0[k] for k in range(n))
    scale = 1.0 + max(abs(v) for v in y)
    for it in range(max_iter):
        fm = field(tuple(0.5 * (y[k] + yn[k]) for k in range(n)))
        cand = tuple(y[k] + dstep * fm[k] for k in range(n))
        delta = max(abs(cand[k] - yn[k]) for k in range(n))
        yn = cand
        if delta != delta:  # NaN contaminated the iteration
            raise StepFailure(
                "non-finite value in the midpoint iteration", residual=float("nan")
            )
        if delta <= tol * scale:
            return yn
        if it >= 9:
            return _midpoint_newton(field, y, yn, dstep, tol, max_iter - it - 1, scale)
    residual = _midpoint_residual(field, y, yn, dstep)
    raise StepFailure(
        f"implicit midpoint failed to converge within {max_iter} iterations",
        residual=residual,
    )


def _midpoint_residual(field, y, yn, dstep):
    n = len(y)
    fm = field(tuple(0.5 * (y[k] + yn[k]) for k in range(n)))
    return max(abs(yn[k] - y[k] - dstep * fm[k]) for k in range(n))


def _midpoint_newton(field, y, yn, dstep, tol, budget, scale):
    """Damped Newton fallback for steps too large for fixed-point contraction."""
    n = len(y)
    yv = np.array(y)
    x = np.array(yn)
    res = _np_residual(field, yv, x, dstep)
    rnorm = float(np.max(np.abs(res)))
    for _ in range(max(budget, 1)):
        mid = 0.5 * (yv + x)
        jac = _np_field_jacobian(field, mid, 1e-7)
        try:
            dx = np.linalg.solve(np.eye(n) - 0.5 * dstep * jac, -res)
        except np.linalg.LinAlgError as exc:
            raise StepFailure("singular Newton system in midpoint solve", residual=rnorm) from exc
        damping = 1.0
        for _ in range(30):
            x_try = x + damping * dx
            res_try = _np_residual(field, yv, x_try, dstep)
            rt = float(np.max(np.abs(res_try)))
            if rt < rnorm or rt <= tol * scale:
                x, res, rnorm = x_try, res_try, rt
                break
            damping *= 0.5
        else:
            raise StepFailure("midpoint Newton damping underflow", residual=rnorm)
        if rnorm <= tol * scale:
            return tuple(x)
    raise StepFailure(
        "implicit midpoint Newton fallback exhausted its iteration budget",
        residual=rnorm,
    )


def _np_residual(field, y, x, dstep):
    f = np.array(field(tuple(0.5 * (y + x))))
    return x - y - dstep * f


def _np_field_jacobian(field, x, h):
    n = len(x)
    jac = np.empty((n, n))
    for k in range(n):
        e = np.zeros(n)
        e[k] = h
        fp = np.array(field(tuple(x + e)))
        fm = np.array(field(tuple(x - e)))
        jac[:, k] = (fp - fm) / (2.0 * h)
    return jac


def step_rk4(field, y, dstep: float):
    """One classical fourth-order Runge-Kutta step (not symplectic)."""
    y = _tuple_state(y)
    n = len(y)
    k1 = field(y)
    k2 = field(tuple(y[i] + 0.5 * dstep * k1[i] for i in range(n)))
    k3 = field(tuple(y[i] + 0.5 * dstep * k2[i] for i in range(n)))
    k4 = field(tuple(y[i] + dstep * k3[i] for i in range(n)))
    return np.array(
        [y[i] + dstep / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]) for i in range(n)]
    )


def _hermite_eval(s, y0, y1, d0, d1):
    """Cubic Hermite on [0, 1] with endpoint values/derivatives (d scaled by dtau)."""
    h00 = (1.0 + 2.0 * s) * (1.0 - s) ** 2
    h10 = s * (1.0 - s) ** 2
    h01 = s * s * (3.0 - 2.0 * s)
    h11 = s * s * (s - 1.0)
    return h00 * y0 + h10 * d0 + h01 * y1 + h11 * d1


def _locate_crossing(y_prev, y_next, f_prev, f_next, dstep, comp):
    """Sub-step root of component `comp` via linear guess plus bisection on the
    cubic Hermite interpolant; returns the fractional position s in [0, 1]."""
    a, b = 0.0, 1.0
    ya = y_prev[comp]
    yb = y_next[comp]
    s = ya / (ya - yb)  # linear interpolation seed
    d0 = dstep * f_prev[comp]
    d1 = dstep * f_next[comp]
    lo, hi = (a, b)
    flo = ya
    for _ in range(80):
        val = _hermite_eval(s, ya, yb, d0, d1)
        if val == 0.0:
            break
        if (val > 0.0) == (flo > 0.0):
            lo = s
        else:
            hi = s
        s_new = 0.5 * (lo + hi)
        if abs(s_new - s) < 1e-15:
            s = s_new
            break
        s = s_new
    return min(max(s, 0.0), 1.0)


def integrate(
    field,
    y0,
    span: float,
    cfg: IntegratorConfig,
    *,
    time_scale: Optional[Callable] = None,
    event_index: Optional[int] = 0,
    event_kind: str = "collision",
    invariant: Optional[Callable] = None,
    record_every: int = 1,
) -> Trajectory:
    """March a state field over a tau interval of the given length.

    time_scale(state) provides dt/dtau for the dual clock (identity clock when
    omitted).  Sign changes of state[event_index] are logged as events with
    sub-step localization; pass event_index=None to disable detection.
    invariant(state), when given, is evaluated on every recorded sample and
    its max abs value is stored as metadata["invariant_max"].

    Raises StepFailure carrying the partial trajectory if a step cannot be
    completed or the state stops being finite.
    """
    y = _tuple_state(y0)
    n = len(y)
    if span < 0.0:
        raise ParameterError(f"span must be nonnegative, got {span}")
    n_steps = max(int(round(span / cfg.step)), 0) if span > 0.0 else 0
    if span > 0.0 and n_steps == 0:
        n_steps = 1
    dstep = span / n_steps if n_steps else 0.0

    taus = [0.0]
    ts = [0.0]
    states = [y]
    events: list[Event] = []
    inv_max = abs(float(invariant(y))) if invariant is not None else None

    if cfg.method == "rk_adaptive":
        return _integrate_adaptive(
            field, y, span, cfg, time_scale, event_index, event_kind, invariant, record_every
        )

    t = 0.0
    for i in range(1, n_steps + 1):
        y_prev = y
        t_prev = t
        try:
            if cfg.method == "implicit_midpoint":
                y = _midpoint_kernel(field, y, dstep, cfg.newton_tol, cfg.newton_max_iter)
            else:  # rk4
                y = tuple(step_rk4(field, y, dstep))
        except StepFailure as exc:
            exc.trajectory = _bundle(taus, ts, states, events, cfg, span, inv_max)
            raise
        if not all(math.isfinite(v) for v in y):
            raise StepFailure(
                f"state became non-finite at step {i} (tau={i * dstep})",
                residual=float("nan"),
                trajectory=_bundle(taus, ts, states, events, cfg, span, inv_max),
            )
        if time_scale is not None:
            g_mid = time_scale(tuple(0.5 * (y_prev[k] + y[k]) for k in range(n)))
            t += dstep * g_mid
        else:
            t = i * dstep

        if event_index is not None and y_prev[event_index] * y[event_index] < 0.0:
            f_prev = field(y_prev)
            f_next = field(y)
            s = _locate_crossing(y_prev, y, f_prev, f_next, dstep, event_index)
            e_state = tuple(
                _hermite_eval(s, y_prev[k], y[k], dstep * f_prev[k], dstep * f_next[k])
                for k in range(n)
            )
            tau_e = (i - 1 + s) * dstep
            if time_scale is not None:
                # trapezoidal dt over the sub-step; second order like the clock itself
                g0 = time_scale(y_prev)
                ge = time_scale(e_state)
                t_e = t_prev + s * dstep * 0.5 * (g0 + ge)
            else:
                t_e = tau_e
            events.append(
                Event(index=len(states) - 1, kind=event_kind, tau=tau_e, t=t_e, state=e_state)
            )

        if i % record_every == 0 or i == n_steps:
            taus.append(i * dstep)
            ts.append(t)
            states.append(y)
            if invariant is not None:
                inv_max = max(inv_max, abs(float(invariant(y))))

    return _bundle(taus, ts, states, events, cfg, span, inv_max)


def _bundle(taus, ts, states, events, cfg, span, inv_max) -> Trajectory:
    meta = {"method": cfg.method, "step": cfg.step, "span": span}
    if inv_max is not None:
        meta["invariant_max"] = inv_max
    return Trajectory(
        tau=np.array(taus),
        t=np.array(ts),
        states=np.array(states),
        events=events,
        metadata=meta,
    )


def _integrate_adaptive(
    field, y, span, cfg, time_scale, event_index, event_kind, invariant, record_every
):
    """Adaptive fallback for regular fields: scipy RK with the dual clock as an
    augmented component."""
    from scipy.integrate import solve_ivp

    n = len(y)

    def rhs(_, yv):
        f = field(tuple(yv[:n]))
        g = time_scale(tuple(yv[:n])) if time_scale is not None else 1.0
        return [*f, g]

    ev_fns = []
    if event_index is not None:
        def ev(_, yv):
            return yv[event_index]

        ev.terminal = False
        ev_fns.append(ev)

    grid = np.linspace(0.0, span, max(int(round(span / cfg.step)), 1) + 1)
    sol = solve_ivp(
        rhs,
        (0.0, span),
        [*y, 0.0],
        method="DOP853",
        rtol=cfg.adaptive_tol,
        atol=cfg.adaptive_tol * 1e-2,
        t_eval=grid[::record_every] if record_every > 1 else grid,
        events=ev_fns or None,
        dense_output=True,
    )
    if not sol.success:
        raise StepFailure(f"adaptive integration failed: {sol.message}")
    states = sol.y[:n].T
    ts = sol.y[n]
    events = []
    if event_index is not None and len(sol.t_events[0]):
        for tau_e in sol.t_events[0]:
            if tau_e <= 0.0:
                continue
            full = sol.sol(tau_e)
            idx = int(np.searchsorted(sol.t, tau_e, side="right") - 1)
            events.append(
                Event(
                    index=idx,
                    kind=event_kind,
                    tau=float(tau_e),
                    t=float(full[n]),
                    state=tuple(full[:n]),
                )
            )
    meta = {"method": "rk_adaptive", "step": cfg.step, "span": span}
    if invariant is not None:
        meta["invariant_max"] = float(max(abs(invariant(tuple(s))) for s in states))
    return Trajectory(tau=sol.t, t=ts, states=states, events=events, metadata=meta)


def integrate_physical_oracle(
    y0,
    t_span: float,
    cfg: IntegratorConfig,
    params: MassParams,
    ring: RingConfig,
    *,
    guard: float = 1e-4,
    stop_at_q: Optional[float] = None,
    t_eval: Optional[Sequence[float]] = None,
) -> Trajectory:
    """Reference adaptive integration in the physical chart.

    Terminates with a proximity event when the separation q1 - q2 drops to the
    guard distance (the chart is singular there; near-collision work belongs
    to the regularized chart).  Optionally terminates with an escape event
    when q1 reaches stop_at_q.  Both clocks coincide in this chart.
    """
    from scipy.integrate import solve_ivp

    y0 = _tuple_state(y0)
    if not y0[0] - y0[1] > guard:
        raise CollisionError(
            f"initial separation {y0[0] - y0[1]} is already inside the guard {guard}"
        )
    rhs_fast = make_physical_rhs(params, ring)

    def rhs(_, yv):
        return rhs_fast(tuple(yv))

    def proximity(_, yv):
        return (yv[0] - yv[1]) - guard

    proximity.terminal = True
    proximity.direction = -1.0
    ev_fns = [proximity]

    if stop_at_q is not None:
        def escape(_, yv):
            return yv[0] - stop_at_q

        escape.terminal = True
        escape.direction = 1.0
        ev_fns.append(escape)

    sol = solve_ivp(
        rhs,
        (0.0, t_span),
        y0,
        method="DOP853",
        rtol=cfg.adaptive_tol,
        atol=cfg.adaptive_tol * 1e-2,
        t_eval=t_eval,
        events=ev_fns,
        dense_output=True,
    )
    if sol.status == -1:
        raise StepFailure(f"physical oracle failed: {sol.message}")
    states = sol.y.T
    events = []
    if len(sol.t_events[0]):
        te = float(sol.t_events[0][0])
        events.append(
            Event(
                index=len(sol.t) - 1,
                kind="collision",
                tau=te,
                t=te,
                state=tuple(sol.sol(te)),
                detail="proximity_abort",
            )
        )
    if stop_at_q is not None and len(sol.t_events[1]):
        te = float(sol.t_events[1][0])
        events.append(
            Event(
                index=len(sol.t) - 1,
                kind="escape_threshold",
                tau=te,
                t=te,
                state=tuple(sol.sol(te)),
            )
        )
    traj = Trajectory(
        tau=sol.t.copy(),
        t=sol.t.copy(),
        states=states,
        events=events,
        metadata={"method": "oracle", "adaptive_tol": cfg.adaptive_tol, "guard": guard},
    )
    traj.metadata["dense"] = sol.sol
    traj.metadata["energy_drift"] = float(
        abs(
            hamiltonian(states[-1], params, ring)
            - hamiltonian(states[0], params, ring)
        )
    )
    return traj


_FMT = "%.17g"


def _fmt_row(values) -> str:
    return ",".join(_FMT % v for v in values)


def write_regularized_csv(traj: Trajectory, path, gamma_fn: Callable) -> None:
    """CSV schema: tau,t,Q1,Q2,P1,P2,gamma (reduced runs carry Q2 = P2 = 0).

    17 significant digits, '.' decimal separator, LF line endings: identical
    configs must produce byte-identical files.
    """
    dim = traj.states.shape[1]
    with open(path, "w", newline="\n") as fh:
        fh.write("tau,t,Q1,Q2,P1,P2,gamma\n")
        for k in range(len(traj)):
            s = traj.states[k]
            if dim == 2:
                z = (s[0], 0.0, s[1], 0.0)
            else:
                z = tuple(s)
            fh.write(_fmt_row((traj.tau[k], traj.t[k], *z, gamma_fn(s))) + "\n")


def write_physical_csv(traj: Trajectory, path, params: MassParams, ring: RingConfig) -> None:
    """CSV schema: t,q1,q2,p1,p2,H."""
    with open(path, "w", newline="\n") as fh:
        fh.write("t,q1,q2,p1,p2,H\n")
        for k in range(len(traj)):
            s = traj.states[k]
            fh.write(_fmt_row((traj.t[k], *s, hamiltonian(s, params, ring))) + "\n")


def write_events_json(traj: Trajectory, path) -> None:
    payload = [
        {
            "index": e.index,
            "kind": e.kind,
            "tau": e.tau,
            "t": e.t,
            "state": list(e.state),
            **({"detail": e.detail} if e.detail else {}),
        }
        for e in traj.events
    ]
    with open(path, "w", newline="\n") as fh:
        json.dump(payload, fh, indent=1)
        fh.write("\n")
