"""Batch driver: config-driven solve / verify / sweep / figure-data tasks.

Config files are INI-style key-value sections.  Solve and verify emit
line-delimited JSON records (floats serialized via their shortest
round-trip representation); sweep and figure emit CSV tables.
"""

import argparse
import configparser
import csv
import json
import sys

import numpy as np

from . import oracle
from .errors import ConfigError, CurvQESError
from .families import GaugeParams, potential_eval
from .oracle import fd_eigensolve, ode_residual
from .oscillator import SpaceConfig
from .states import solve_states, wavefunction_eval

TOLERANCE_PROFILES = {
    "default": {"residual": 1e-8, "fd": 1e-3, "richardson": False},
    "strict": {"residual": 1e-9, "fd": 1e-4, "richardson": True},
}


def _get(cfg, section, key, cast=str, default=None, required=False):
    if not cfg.has_option(section, key):
        if required:
            raise ConfigError(f"{section}.{key}", "missing required field")
        return default
    raw = cfg.get(section, key)
    try:
        return cast(raw)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{section}.{key}", f"cannot parse {raw!r}: {exc}") from exc


def _parse_floats(raw):
    return tuple(float(x) for x in raw.replace(",", " ").split())


def load_space(cfg):
    lam = _get(cfg, "space", "lambda", float, required=True)
    d = _get(cfg, "space", "d", int, default=1)
    l = _get(cfg, "space", "l", int, default=None)
    if l is None:
        l = _get(cfg, "space", "p", int, default=0)
    try:
        return SpaceConfig(lam, d, l)
    except ValueError as exc:
        raise ConfigError("space", str(exc)) from exc


def load_gauge(cfg):
    family = _get(cfg, "potential", "family", int, required=True)
    b = _get(cfg, "potential", "b", _parse_floats, required=True)
    a = _get(cfg, "potential", "a", float, required=True)
    m = _get(cfg, "potential", "m", int, default=len(b))
    if m != len(b):
        raise ConfigError("potential.m", f"m={m} does not match {len(b)} b values")
    try:
        return GaugeParams(family, a, b)
    except CurvQESError as exc:
        raise ConfigError("potential.m", str(exc)) from exc
    except ValueError as exc:
        raise ConfigError("potential", str(exc)) from exc


def state_record(state, residual=None):
    sp = state.spec
    rec = {
        "family": sp.gauge.family,
        "m": sp.gauge.m,
        "lambda": sp.space.lam,
        "d": sp.space.d,
        "l": sp.space.l,
        "a": sp.gauge.a,
        "b": list(sp.gauge.b),
        "n": sp.n,
        "A": sp.coupling_A,
        "B": list(sp.B),
        "epsilon": state.epsilon,
        "roots": [[complex(z).real, complex(z).imag] for z in state.roots.roots],
        "energy": state.energy,
        "nodes": state.nodes,
        "normalizable": state.normalizable,
        "reason": state.reason,
    }
    if residual is not None:
        rec["residual"] = residual
    return rec


def run_solve(cfg, grid=None):
    space = load_space(cfg)
    gauge = load_gauge(cfg)
    n = _get(cfg, "potential", "n", int, default=0)
    states = solve_states(space, gauge, n)
    records = []
    for st in states:
        records.append(state_record(st, residual=ode_residual(st, grid)))
    return records


def run_verify(cfg, profile="default", grid=None):
    """Solve, then gate every state on the residual oracle and (optionally)
    on agreement with the finite-difference spectrum."""
    tol = TOLERANCE_PROFILES[profile]
    records = run_solve(cfg, grid=grid)
    space = load_space(cfg)
    gauge = load_gauge(cfg)
    n = _get(cfg, "potential", "n", int, default=0)
    check_fd = _get(cfg, "verify", "fd", lambda s: s.lower() == "true", default=False)
    failures = 0
    if check_fd:
        states = solve_states(space, gauge, n)
    for idx, rec in enumerate(records):
        ok = rec["residual"] < tol["residual"]
        if check_fd and rec["normalizable"] and rec["nodes"] <= 1:
            st = states[idx]
            vals = fd_eigensolve(
                lambda r: potential_eval(st.spec, r),
                space,
                k=6,
                richardson=tol["richardson"],
            )
            fd_ok = np.min(np.abs(vals - st.energy) / (1 + abs(st.energy))) < tol["fd"]
            rec["fd_match"] = bool(fd_ok)
            ok = ok and fd_ok
        rec["verified"] = bool(ok)
        failures += 0 if ok else 1
    return records, failures


def run_sweep(cfg, grid=None):
    """Sweep one gauge parameter; one CSV row per (value, state)."""
    param = _get(cfg, "sweep", "parameter", str, required=True)
    raw = _get(cfg, "sweep", "values", str, required=True)
    values = sorted(float(x) for x in raw.replace(",", " ").split())
    space = load_space(cfg)
    gauge = load_gauge(cfg)
    n = _get(cfg, "potential", "n", int, default=0)
    rows = []
    for val in values:
        if param == "a":
            g = GaugeParams(gauge.family, val, gauge.b)
        elif param.startswith("b"):
            j = int(param[1:]) - 1
            if not 0 <= j < gauge.m:
                raise ConfigError("sweep.parameter", f"no such gauge parameter {param}")
            b = list(gauge.b)
            b[j] = val
            g = GaugeParams(gauge.family, gauge.a, tuple(b))
        else:
            raise ConfigError("sweep.parameter", f"unknown parameter {param}")
        try:
            for st in solve_states(space, g, n):
                rows.append(
                    [val, st.energy, st.spec.coupling_A, st.nodes, int(st.normalizable)]
                )
        except CurvQESError:
            rows.append([val, float("nan"), float("nan"), -1, 0])
    header = [param, "energy", "A", "nodes", "normalizable"]
    return header, rows


def _parse_variants(raw):
    """'1:1.0|2:1.0,1.0' -> [(m, b-tuple), ...]"""
    out = []
    for chunk in raw.split("|"):
        mstr, bstr = chunk.split(":")
        out.append((int(mstr), _parse_floats(bstr)))
    return out


def run_figure(cfg):
    """Tabulate V(x) and the ground-state psi(x) for a list of d=1 variants."""
    space = load_space(cfg)
    if space.d != 1:
        raise ConfigError("space.d", "figure task needs a one-dimensional config")
    family = _get(cfg, "potential", "family", int, required=True)
    a = _get(cfg, "potential", "a", float, required=True)
    n = _get(cfg, "potential", "n", int, default=0)
    variants = _get(cfg, "figure", "variants", _parse_variants, required=True)
    x_max = _get(cfg, "figure", "x_max", float, default=None)
    points = _get(cfg, "figure", "points", int, default=401)
    normalize_origin = _get(
        cfg, "figure", "psi0", lambda s: s.lower() == "true", default=False
    )
    if x_max is None:
        x_max = 2.0 if space.lam > 0 else space.r_max * 0.999
    x = np.linspace(-x_max, x_max, points)
    header = ["x"]
    cols = [x]
    for m, b in variants:
        gauge = GaugeParams(family, a, b)
        states = solve_states(space, gauge, n)
        st = states[0]
        v = potential_eval(st.spec, x)
        psi = wavefunction_eval(st, np.where(x == 0.0, 1e-12, x))
        if normalize_origin and space.l == 0:
            psi = psi / wavefunction_eval(st, np.asarray([1e-12]))[0]
        else:
            psi = psi / np.max(np.abs(psi))
        header += [f"V_m{m}", f"psi_m{m}"]
        cols += [v, psi]
    rows = [list(row) for row in zip(*cols)]
    return header, rows


def _write_records(records, out):
    for rec in records:
        out.write(json.dumps(rec) + "\n")


def _write_csv(header, rows, out):
    writer = csv.writer(out)
    writer.writerow(header)
    for row in rows:
        writer.writerow([repr(float(v)) if isinstance(v, float) else v for v in row])


def main(argv=None):
    parser = argparse.ArgumentParser(prog="curvqes", description=__doc__)
    parser.add_argument("--task", choices=["solve", "verify", "sweep", "figure"])
    parser.add_argument("--config", required=True)
    parser.add_argument("--out", default="-")
    parser.add_argument("--grid-points", type=int, default=None)
    parser.add_argument(
        "--tolerance-profile", choices=["default", "strict"], default="default"
    )
    parser.add_argument("--emit-complex-roots", action="store_true")
    args = parser.parse_args(argv)

    cfg = configparser.ConfigParser(inline_comment_prefixes=(";", "#"))
    if not cfg.read(args.config):
        print(f"error: cannot read config {args.config}", file=sys.stderr)
        return 2
    task = args.task or _get(cfg, "run", "task", str, default="solve")
    grid = oracle.GridSpec(points=args.grid_points) if args.grid_points else None

    out = sys.stdout if args.out == "-" else open(args.out, "w")
    status = 0
    try:
        if task == "solve":
            records = run_solve(cfg, grid=grid)
            if args.emit_complex_roots:
                records = _with_complex(cfg, records)
            _write_records(records, out)
        elif task == "verify":
            records, failures = run_verify(cfg, profile=args.tolerance_profile, grid=grid)
            _write_records(records, out)
            status = 1 if failures else 0
        elif task == "sweep":
            header, rows = run_sweep(cfg, grid=grid)
            _write_csv(header, rows, out)
        elif task == "figure":
            header, rows = run_figure(cfg)
            _write_csv(header, rows, out)
        else:
            print(f"error: unknown task {task!r}", file=sys.stderr)
            status = 2
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        status = 2
    except CurvQESError as exc:
        print(f"error: {exc}", file=sys.stderr)
        status = 1
    finally:
        if out is not sys.stdout:
            out.close()
    return status


def _with_complex(cfg, records):
    """Append records for complex root configurations (not assembled into
    physical states, reported for completeness)."""
    from .families import make_spec, to_bethe_problem
    from .fba import solve_roots

    space = load_space(cfg)
    gauge = load_gauge(cfg)
    n = _get(cfg, "potential", "n", int, default=0)
    spec = make_spec(space, gauge, n)
    configs = solve_roots(to_bethe_problem(spec), include_complex=True)
    for roots in configs:
        if not roots.is_real:
            records.append(
                {
                    "complex_configuration": [
                        [complex(z).real, complex(z).imag] for z in roots.roots
                    ]
                }
            )
    return records


if __name__ == "__main__":
    sys.exit(main())
