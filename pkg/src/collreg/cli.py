"""Command-line surface: verification, simulation, classification, level sets,
and period computation, with reproducible file outputs.

Run configurations are JSON documents (schema 1):

    {
      "schema": 1,
      "problem": "reduced" | "sitnikov" | "kepler1d",
      "N": 2, "m": 1e-3, "epsilon": 0.0, "h": -1.0,
      "initial": {"chart": "regularized" | "physical", "state": [...]},
      "integrator": {"method": "implicit_midpoint", "step": 1e-3},
      "span": 100.0,
      "outputs": {"trajectory": "...", "events": "...", "summary": "..."}
    }

State layouts: reduced [Q1, P1]; sitnikov regularized [Q1, Q2, P1, P2];
sitnikov physical [q1, q2, p1, p2]; kepler1d [u, v] with "mu_grav" replacing
the ring parameters.  Regularized initial states are projected onto the
energy level by solving for |P1| (sign preserved); states with no real
momentum are refused.  Numeric file output uses 17 significant digits and LF
line endings, so a fixed configuration yields byte-identical data files.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import time

import numpy as np

from . import analysis, verify
from .config import MassParams, RingConfig, ring_radius
from .errors import SchemaError, StepFailure
from .integrators import (
    IntegratorConfig,
    integrate,
    integrate_physical_oracle,
    write_events_json,
    write_physical_csv,
    write_regularized_csv,
)
from .physical import hamiltonian
from .regularized import (
    gamma,
    gamma_reduced,
    make_reduced_rhs,
    make_regularized_rhs,
    project_to_level,
    reduced_level_momentum,
    time_scale,
)

PROBLEMS = ("sitnikov", "reduced", "kepler1d")
STATE_DIMS = {"reduced": 2, "sitnikov": 4, "kepler1d": 2}


def _require(cfg: dict, field: str, types) -> object:
    if field not in cfg:
        raise SchemaError(f"missing required field {field!r}", field=field)
    value = cfg[field]
    if not isinstance(value, types):
        raise SchemaError(f"field {field!r} has the wrong type: {value!r}", field=field)
    return value


def load_run_config(path: str) -> dict:
    with open(path) as fh:
        try:
            cfg = json.load(fh)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"config is not valid JSON: {exc}") from exc
    if not isinstance(cfg, dict):
        raise SchemaError("config must be a JSON object")
    if cfg.get("schema") != 1:
        raise SchemaError(f"unsupported schema {cfg.get('schema')!r}", field="schema")
    problem = _require(cfg, "problem", str)
    if problem not in PROBLEMS:
        raise SchemaError(f"unknown problem {problem!r}", field="problem")
    _require(cfg, "span", (int, float))
    initial = _require(cfg, "initial", dict)
    chart = _require(initial, "chart", str)
    if chart not in ("physical", "regularized"):
        raise SchemaError(f"unknown chart {chart!r}", field="initial.chart")
    state = _require(initial, "state", list)
    if problem == "sitnikov":
        want = 4
    else:
        want = 2
        if chart != "regularized":
            raise SchemaError(
                f"problem {problem!r} is integrated in the regularized chart",
                field="initial.chart",
            )
    if len(state) != want or not all(isinstance(v, (int, float)) for v in state):
        raise SchemaError(
            f"initial.state must be {want} numbers for problem {problem!r}",
            field="initial.state",
        )
    if problem == "kepler1d":
        _require(cfg, "mu_grav", (int, float))
        _require(cfg, "h", (int, float))
    else:
        _require(cfg, "N", int)
        _require(cfg, "m", (int, float))
        _require(cfg, "epsilon", (int, float))
        if problem == "reduced" and cfg["epsilon"] != 0:
            raise SchemaError(
                "the reduced problem is the symmetric one; epsilon must be 0",
                field="epsilon",
            )
        if chart == "regularized" or "h" in cfg:
            _require(cfg, "h", (int, float))
    integ = cfg.get("integrator", {})
    if not isinstance(integ, dict):
        raise SchemaError("integrator must be an object", field="integrator")
    try:
        cfg["_integrator"] = IntegratorConfig(
            method=integ.get("method", "implicit_midpoint"),
            step=float(integ.get("step", 1e-3)),
            newton_tol=float(integ.get("newton_tol", 1e-13)),
            newton_max_iter=int(integ.get("newton_max_iter", 50)),
            adaptive_tol=float(integ.get("adaptive_tol", 1e-12)),
        )
    except Exception as exc:
        raise SchemaError(f"bad integrator settings: {exc}", field="integrator") from exc
    outputs = cfg.get("outputs", {})
    if not isinstance(outputs, dict):
        raise SchemaError("outputs must be an object", field="outputs")
    return cfg


def _default_outputs(cfg: dict, config_path: str) -> dict:
    stem = os.path.splitext(config_path)[0]
    out = dict(cfg.get("outputs", {}))
    out.setdefault("trajectory", stem + "_trajectory.csv")
    out.setdefault("events", stem + "_events.json")
    out.setdefault("summary", stem + "_summary.json")
    return out


def run_simulation(cfg: dict, outputs: dict) -> dict:
    """Execute one validated run configuration; returns the summary dict."""
    icfg: IntegratorConfig = cfg["_integrator"]
    problem = cfg["problem"]
    span = float(cfg["span"])
    state = [float(v) for v in cfg["initial"]["state"]]
    t0 = time.perf_counter()

    if problem == "kepler1d":
        h = float(cfg["h"])
        mu_grav = float(cfg["mu_grav"])
        two_h = 2.0 * h
        rhs = lambda yv: (yv[1], two_h * yv[0])
        gam = lambda s: 0.25 * s[1] ** 2 - 0.5 * h * s[0] ** 2 - mu_grav
        # project v onto the energy relation, keeping its sign
        vsq = 4.0 * (mu_grav + 0.5 * h * state[0] ** 2)
        if vsq < 0.0:
            raise SchemaError("initial u is beyond the turning point of this level",
                              field="initial.state")
        v = math.copysign(math.sqrt(vsq), state[1]) if state[1] != 0.0 else math.sqrt(vsq)
        traj = integrate(rhs, (state[0], v), span, icfg,
                         time_scale=lambda s: s[0] * s[0], invariant=gam)
        write_regularized_csv(traj, outputs["trajectory"], gam)
        final_check = abs(gam(traj.states[-1]))
    elif problem == "reduced":
        N, m, h = int(cfg["N"]), float(cfg["m"]), float(cfg["h"])
        a = 4.0 * ring_radius(N)
        rhs = make_reduced_rhs(h, a)
        gam = lambda s: gamma_reduced(s, h, m, a)
        mag = reduced_level_momentum(state[0], h, m, a)
        p1 = math.copysign(mag, state[1]) if state[1] != 0.0 else mag
        traj = integrate(rhs, (state[0], p1), span, icfg,
                         time_scale=lambda s: 0.5 * s[0] * s[0], invariant=gam)
        write_regularized_csv(traj, outputs["trajectory"], gam)
        final_check = abs(gam(traj.states[-1]))
    else:  # sitnikov
        N, m, e = int(cfg["N"]), float(cfg["m"]), float(cfg["epsilon"])
        params = MassParams(m=m, epsilon=e)
        ring = RingConfig.for_count(N)
        if cfg["initial"]["chart"] == "regularized":
            h = float(cfg["h"])
            z0 = project_to_level(state, h, params, ring)
            rhs = make_regularized_rhs(h, params, ring)
            gam = lambda z: gamma(z, h, params, ring)
            traj = integrate(rhs, z0, span, icfg,
                             time_scale=lambda z: time_scale(z, params), invariant=gam)
            write_regularized_csv(traj, outputs["trajectory"], gam)
            final_check = abs(gam(traj.states[-1]))
        else:
            h = float(cfg["h"]) if "h" in cfg else hamiltonian(state, params, ring)
            traj = integrate_physical_oracle(
                state, span, icfg, params, ring,
                guard=float(cfg.get("guard", 1e-4)),
                stop_at_q=cfg.get("stop_at_q"),
            )
            traj.metadata.pop("dense", None)
            write_physical_csv(traj, outputs["trajectory"], params, ring)
            final_check = abs(hamiltonian(traj.states[-1], params, ring) - h)

    traj.metadata.update(
        {k: cfg[k] for k in ("problem", "N", "m", "epsilon", "h", "mu_grav") if k in cfg}
    )
    write_events_json(traj, outputs["events"])
    wall = time.perf_counter() - t0
    summary = {
        "schema": 1,
        "problem": problem,
        "samples": len(traj),
        "collisions": len(traj.collision_events()),
        "events": [{"kind": ev.kind, "tau": ev.tau, "t": ev.t} for ev in traj.events],
        "final_invariant_error": final_check,
        "max_invariant_error": traj.metadata.get("invariant_max"),
        "tau_end": float(traj.tau[-1]),
        "t_end": float(traj.t[-1]),
        "final_state": [float(v) for v in traj.states[-1]],
        "wall_time_s": wall,
    }
    if problem == "sitnikov" and cfg["initial"]["chart"] == "physical":
        summary["terminal_speed"] = float(traj.states[-1][2])
        summary["energy_drift"] = traj.metadata.get("energy_drift")
        summary["initial_energy_mismatch"] = abs(
            hamiltonian(traj.states[0], params, ring) - h
        )
    with open(outputs["summary"], "w", newline="\n") as fh:
        json.dump(summary, fh, indent=1)
        fh.write("\n")
    return summary


def _sweep_worker(args):
    cfg, outputs = args
    return run_simulation(cfg, outputs)


def cmd_simulate(args) -> int:
    cfg = load_run_config(args.config)
    if args.sweep:
        sweep = cfg.get("sweep")
        if not isinstance(sweep, list) or not sweep:
            raise SchemaError("--sweep requires a nonempty 'sweep' list", field="sweep")
        jobs = []
        stem = os.path.splitext(args.config)[0]
        for k, override in enumerate(sweep):
            if not isinstance(override, dict):
                raise SchemaError("sweep entries must be objects", field=f"sweep[{k}]")
            merged = {key: val for key, val in cfg.items()
                      if key not in ("sweep", "_integrator", "outputs")}
            merged.update(override)
            tagged = dict(merged)
            tagged["schema"] = 1
            # re-validate the merged document through a round trip
            tmp = f"{stem}_sweep{k:03d}.json"
            with open(tmp, "w") as fh:
                json.dump(tagged, fh)
            merged_cfg = load_run_config(tmp)
            outs = {
                "trajectory": f"{stem}_sweep{k:03d}_trajectory.csv",
                "events": f"{stem}_sweep{k:03d}_events.json",
                "summary": f"{stem}_sweep{k:03d}_summary.json",
            }
            outs.update(override.get("outputs", {}))
            jobs.append((merged_cfg, outs))
        workers = int(os.environ.get("COLLREG_THREADS", "0")) or min(len(jobs), os.cpu_count() or 1)
        # the stepping loops are pure Python, so real parallelism needs processes
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=workers) as pool:
            for summary in pool.map(_sweep_worker, jobs):
                print(f"sweep run done: collisions={summary['collisions']} "
                      f"t_end={summary['t_end']:.6g}")
        return 0
    outputs = _default_outputs(cfg, args.config)
    try:
        summary = run_simulation(cfg, outputs)
    except StepFailure as exc:
        if exc.trajectory is not None:
            write_events_json(exc.trajectory, _default_outputs(cfg, args.config)["events"])
        print(f"integration failed: {exc} (residual {exc.residual:.3e})", file=sys.stderr)
        return 3
    print(json.dumps(summary, indent=1))
    return 0


def cmd_verify(args) -> int:
    report = verify.run_checks(args.filter)
    if args.output:
        with open(args.output, "w", newline="\n") as fh:
            json.dump(report, fh, indent=1)
            fh.write("\n")
    print(json.dumps(report, indent=1))
    if not report["all_passed"]:
        failures = [c for c in report["checks"] if not c["passed"]]
        for c in failures[:10]:
            print(
                f"FAILED {c['name']}: measured {c['measured']:.3e} "
                f"vs tolerance {c['tolerance']:.3e} {c.get('detail', '')}",
                file=sys.stderr,
            )
        return 1
    return 0


def cmd_classify(args) -> int:
    oc = analysis.classify(args.h, args.tol)
    print(oc.kind)
    return 0


def cmd_levelset(args) -> int:
    a = 4.0 * ring_radius(args.N)
    pts = analysis.level_set_sample(
        args.h, args.m, a,
        (-args.qmax, args.qmax), (-args.pmax, args.pmax), args.resolution,
    )
    with open(args.output, "w", newline="\n") as fh:
        fh.write("Q1,P1\n")
        for Q1, P1 in pts:
            fh.write("%.17g,%.17g\n" % (Q1, P1))
    print(f"{len(pts)} points -> {args.output}")
    return 0


def cmd_period(args) -> int:
    report = analysis.period_report(args.h, args.m, args.N,
                                    nodes=args.nodes, step=args.step)
    text = json.dumps(report, indent=1)
    if args.output:
        with open(args.output, "w", newline="\n") as fh:
            fh.write(text + "\n")
    print(text)
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="collreg",
        description="Collision-regularized dynamics of two secondaries on the "
                    "axis of a rotating N-gon of primaries.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="run the invariant suite, JSON report, exit 0 iff all pass")
    p.add_argument("--filter", default=None, help="substring filter on check names")
    p.add_argument("--output", default=None, help="also write the report to this path")
    p.set_defaults(fn=cmd_verify)

    p = sub.add_parser("simulate", help="run a configuration file")
    p.add_argument("config", help="path to a run-configuration JSON document")
    p.add_argument("--sweep", action="store_true",
                   help="fan out the config's 'sweep' overrides as independent runs "
                        "(COLLREG_THREADS limits parallelism)")
    p.set_defaults(fn=cmd_simulate)

    p = sub.add_parser("classify", help="orbit class from the energy")
    p.add_argument("--h", type=float, required=True)
    p.add_argument("--tol", type=float, default=1e-12,
                   help="half width of the band labeled Parabolic (default 1e-12)")
    p.set_defaults(fn=cmd_classify)

    p = sub.add_parser("levelset", help="sample the reduced level curve into a CSV")
    p.add_argument("--h", type=float, required=True)
    p.add_argument("--m", type=float, required=True)
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--qmax", type=float, default=4.0)
    p.add_argument("--pmax", type=float, default=3.0)
    p.add_argument("--resolution", type=int, default=201)
    p.add_argument("--output", default="levelset.csv")
    p.set_defaults(fn=cmd_levelset)

    p = sub.add_parser("period", help="period of the symmetric collision orbit, both methods")
    p.add_argument("--h", type=float, required=True)
    p.add_argument("--m", type=float, required=True)
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--nodes", type=int, default=128)
    p.add_argument("--step", type=float, default=2e-4)
    p.add_argument("--output", default=None)
    p.set_defaults(fn=cmd_period)

    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except SchemaError as exc:
        where = f" (field {exc.field})" if exc.field else ""
        print(f"configuration error{where}: {exc}", file=sys.stderr)
        return 2
    except (ValueError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
