"""Command-line interface: every capability behind reproducible file outputs.

Each subcommand writes a CSV, a JSON mirror carrying the same values, and
a run manifest echoing the full parameter set.  Numbers are serialised
with 17 significant digits, LF newlines and no locale formatting, so a
rerun of a deterministic command is byte-identical.

Exit codes: 0 success, 2 parameter/validation problem (the message names
the offending flag), 3 more-than-four-roots abort.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .analysis import Pin, census_case, census_check
from .asymptotics import limit_model, limit_roots, no_incentive_limit
from .bifurcation import build_diagram, saddle_nodes
from .dynamics import integrate_scalar
from .equilibria import (
    MoreThanFourRoots,
    RootFinderConfig,
    find_equilibria,
)
from .montecarlo import sample_counts
from .params import GameParameters, ParameterError

__all__ = ["main"]

_PARAM_FLAGS = ("d", "r", "c", "q", "mu", "delta", "a", "b", "omega")


def _fmt(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "1" if v else "0"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return f"{float(v):.17g}"
    return str(v)


def _write_csv(path: Path, header: list[str], rows: list[list]) -> None:
    lines = [",".join(header)]
    lines.extend(",".join(_fmt(v) for v in row) for row in rows)
    path.write_text("\n".join(lines) + "\n", newline="\n")


def _write_json(path: Path, payload) -> None:
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n",
                    newline="\n")


def _write_manifest(path: Path, command: str, parameters: dict, seed,
                    outputs: list[Path]) -> None:
    _write_json(path, {
        "command": command,
        "parameters": parameters,
        "seed": seed,
        "versions": {"pggdyn": __version__},
        "outputs": [str(p) for p in outputs],
    })


def _read_config(path: str) -> dict:
    """key=value lines, or the ``parameters`` block of a run manifest."""
    text = Path(path).read_text()
    if path.endswith(".json"):
        return dict(json.loads(text).get("parameters", {}))
    out = {}
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        key, _, value = line.partition("=")
        out[key.strip()] = value.strip()
    return out


def _merge_config(args: argparse.Namespace) -> None:
    if not getattr(args, "config", None):
        return
    cfg = _read_config(args.config)
    for key, raw in cfg.items():
        attr = key.replace("-", "_")
        if getattr(args, attr, None) is None and hasattr(args, attr):
            setattr(args, attr, raw)


class FlagError(Exception):
    pass


def _need(args, *names: str) -> None:
    missing = [n for n in names if getattr(args, n, None) is None]
    if missing:
        raise FlagError("missing required flag(s): " +
                        ", ".join("--" + n for n in missing))


def _params_from_args(args) -> GameParameters:
    _need(args, *_PARAM_FLAGS)
    try:
        d = int(args.d)
    except (TypeError, ValueError):
        raise FlagError(f"--d must be an integer, got {args.d!r}")
    kw = dict(
        d=d, r=float(args.r), c=float(args.c), q=float(args.q),
        mu=float(args.mu), delta=float(args.delta), a_lev=float(args.a),
        b_lev=float(args.b), omega=float(args.omega),
    )
    # boundary values are legitimate for the special-case census runs
    try:
        return GameParameters(**kw, mode="strict")
    except ParameterError:
        return GameParameters(**kw, mode="census")


def _root_cfg(args) -> RootFinderConfig:
    kw = {}
    if getattr(args, "grid", None) is not None:
        kw["grid_points"] = int(args.grid)
    if getattr(args, "tol", None) is not None:
        kw["tol_residual"] = float(args.tol)
    return RootFinderConfig(**kw)


def _echo_params(params: GameParameters) -> dict:
    return {
        "d": params.d, "r": params.r, "c": params.c, "q": params.q,
        "mu": params.mu, "delta": params.delta, "a": params.a_lev,
        "b": params.b_lev, "omega": params.omega, "mode": params.mode,
    }


def _out_base(args, default: str) -> Path:
    out = getattr(args, "out", None) or default
    base = Path(out)
    if base.suffix in (".csv", ".json"):
        base = base.with_suffix("")
    base.parent.mkdir(parents=True, exist_ok=True)
    return base


def _emit(args, base: Path, header, rows, payload, command, parameters,
          seed=None) -> list[Path]:
    fmt = getattr(args, "format", None) or "csv"
    outputs = []
    if fmt == "csv":
        csv_path = base.with_suffix(".csv")
        _write_csv(csv_path, header, rows)
        outputs.append(csv_path)
    json_path = base.with_suffix(".json")
    _write_json(json_path, payload)
    outputs.append(json_path)
    manifest = base.parent / (base.name + ".manifest.json")
    _write_manifest(manifest, command, parameters, seed, outputs)
    print("\n".join(str(p) for p in outputs + [manifest]))
    return outputs


# --- subcommands --------------------------------------------------------


def _cmd_equilibria(args) -> int:
    params = _params_from_args(args)
    eqs = find_equilibria(params, _root_cfg(args))
    rows = [[r.x, r.stability.value, r.residual, r.slope] for r in eqs]
    payload = {
        "roots": [
            {"x": r.x, "stability": r.stability.value,
             "residual": r.residual, "slope": r.slope}
            for r in eqs
        ],
        "method": eqs.method.value,
    }
    base = _out_base(args, "equilibria")
    _emit(args, base, ["x", "stability", "residual", "slope"], rows, payload,
          "equilibria", _echo_params(params))
    return 0


def _cmd_simulate(args) -> int:
    params = _params_from_args(args)
    x0 = float(args.x0) if args.x0 is not None else 0.5
    t_end = float(args.t_end) if args.t_end is not None else 50.0
    dt = float(args.dt) if args.dt is not None else 1e-3
    traj = integrate_scalar(x0, params, t_end, dt)
    rows = [[t, x] for t, x in zip(traj.times, traj.states)]
    payload = {"t": [float(t) for t in traj.times],
               "x": [float(x) for x in traj.states]}
    parameters = _echo_params(params) | {"x0": x0, "t_end": t_end, "dt": dt}
    base = _out_base(args, "trajectory")
    _emit(args, base, ["t", "x"], rows, payload, "simulate", parameters)
    return 0


def _cmd_bifurcate(args) -> int:
    params = _params_from_args(args)
    grid = int(args.grid) if args.grid is not None else 1024
    window = (float(args.exclusion_window)
              if args.exclusion_window is not None else 1e-6)
    diagram = build_diagram(params, grid=grid, exclusion_window=window)
    rows = [[s.x, s.mu_value, s.side.value, 0] for s in diagram.samples]
    rows += [[x, m, "left" if x < 0.5 else "right", 1]
             for x, m in diagram.critical_points]
    sig = diagram.signature
    payload = {
        "samples": [{"x": s.x, "mu": s.mu_value, "side": s.side.value}
                    for s in diagram.samples],
        "critical_points": [{"x": x, "mu": m} for x, m in diagram.critical_points],
        "signature": {
            "left_criticals": sig.left_criticals,
            "right_criticals": sig.right_criticals,
            "endpoint_signs": list(sig.endpoint_signs),
            "axis_crossings": sig.axis_crossings,
        },
    }
    parameters = _echo_params(params) | {"grid": grid, "exclusion_window": window}
    base = _out_base(args, "bifurcation")
    _emit(args, base, ["x", "mu", "side", "is_critical"], rows, payload,
          "bifurcate", parameters)
    return 0


def _cmd_sample(args) -> int:
    _need(args, "d")
    d = int(args.d)
    iters = int(args.iters) if args.iters is not None else 10000
    seed = int(args.seed) if args.seed is not None else 0
    hist = sample_counts(d, iters, seed)
    rows = [[k, hist.frequency(k)] for k in range(5)]
    payload = {"d": d, "draws": hist.draws, "seed": seed,
               "counts": {str(k): hist.frequency(k) for k in range(5)}}
    base = _out_base(args, "histogram")
    _emit(args, base, ["root_count", "frequency"], rows, payload, "sample",
          {"d": d, "iters": iters}, seed=seed)
    return 0


_CASE_ALIASES = {p.name.lower(): p for p in Pin}


def _parse_case(text: str):
    pins = []
    for token in text.replace(",", "+").split("+"):
        token = token.strip().lower()
        if token not in _CASE_ALIASES:
            raise FlagError(
                f"--case token {token!r} not one of {sorted(_CASE_ALIASES)}")
        pins.append(_CASE_ALIASES[token])
    try:
        return census_case(*pins)
    except (KeyError, ValueError) as exc:
        raise FlagError(f"--case {text!r}: {exc}")


def _cmd_census(args) -> int:
    _need(args, "case")
    case = _parse_case(args.case)
    iters = int(args.iters) if args.iters is not None else 10000
    seed = int(args.seed) if args.seed is not None else 0
    report = census_check(case, iters, seed)
    row = [case.name, report.draws] + \
        [report.observed.get(k, 0) for k in range(5)] + [report.passed]
    payload = {
        "case": case.name,
        "allowed_counts": sorted(case.allowed_counts),
        "draw_count": report.draws,
        "observed": {str(k): report.observed.get(k, 0) for k in range(5)},
        "pass": report.passed,
    }
    base = _out_base(args, "census")
    _emit(args, base,
          ["case", "draw_count", "count0", "count1", "count2", "count3",
           "count4", "pass"],
          [row], payload, "census", {"case": case.name, "iters": iters},
          seed=seed)
    return 0


def _cmd_asymptote(args) -> int:
    params = _params_from_args(args)
    model = limit_model(params)
    rows = [
        ["g1_slope", model.g1_slope],
        ["g1_intercept", model.g1_intercept],
        ["g2_x2", model.g2_coeffs[0]],
        ["g2_x1", model.g2_coeffs[1]],
        ["g2_x0", model.g2_coeffs[2]],
    ]
    payload = {
        "g1_slope": model.g1_slope,
        "g1_intercept": model.g1_intercept,
        "g2_coeffs": list(model.g2_coeffs),
    }
    roots = limit_roots(model)
    payload["limit_roots"] = [
        {"x": r.x, "derivative_magnitude": r.derivative_magnitude} for r in roots
    ]
    for i, r in enumerate(roots):
        rows.append([f"limit_root_{i}", r.x])
        rows.append([f"limit_root_{i}_slope_magnitude", r.derivative_magnitude])
    if params.delta == 0.0 and params.mu > 0.0 and params.q > 0.0:
        lim = no_incentive_limit(params)
        rows.append(["no_incentive_limit", lim])
        payload["no_incentive_limit"] = lim
    base = _out_base(args, "asymptote")
    _emit(args, base, ["quantity", "value"], rows, payload, "asymptote",
          _echo_params(params))
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pggdyn",
        description="replicator-mutator public goods game laboratory",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p: argparse.ArgumentParser, with_params=True) -> None:
        if with_params:
            for flag in _PARAM_FLAGS:
                p.add_argument("--" + flag)
        p.add_argument("--seed")
        p.add_argument("--iters")
        p.add_argument("--grid")
        p.add_argument("--tol")
        p.add_argument("--out")
        p.add_argument("--format", choices=["csv", "json"])
        p.add_argument("--config")

    p_eq = sub.add_parser("equilibria", help="roots of the gain function")
    add_common(p_eq)
    p_eq.set_defaults(func=_cmd_equilibria)

    p_sim = sub.add_parser("simulate", help="integrate the scalar dynamics")
    add_common(p_sim)
    p_sim.add_argument("--x0")
    p_sim.add_argument("--t-end", dest="t_end")
    p_sim.add_argument("--dt")
    p_sim.set_defaults(func=_cmd_simulate)

    p_bif = sub.add_parser("bifurcate", help="bifurcation diagram in mu")
    add_common(p_bif)
    p_bif.add_argument("--exclusion-window", dest="exclusion_window")
    p_bif.set_defaults(func=_cmd_bifurcate)

    p_sam = sub.add_parser("sample", help="random-draw root-count histogram")
    add_common(p_sam)
    p_sam.set_defaults(func=_cmd_sample)

    p_cen = sub.add_parser("census", help="boundary-case root-count census")
    add_common(p_cen)
    p_cen.add_argument("--case")
    p_cen.set_defaults(func=_cmd_census)

    p_asy = sub.add_parser("asymptote", help="large-group limit model")
    add_common(p_asy)
    p_asy.set_defaults(func=_cmd_asymptote)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    _merge_config(args)
    try:
        return args.func(args)
    except (ParameterError, FlagError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except MoreThanFourRoots as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
