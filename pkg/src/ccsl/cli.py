"""Command-line front end: predictions, single bounds, and full scans.

Output is data only (CSV or JSON); plotting stays in external tools. Every
output embeds or accompanies a run manifest; rerunning with the same
arguments reproduces the data rows byte for byte.

Exit codes: 0 success, 2 argument/config errors, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .bounds import ExclusionCurve, default_rc_grid, envelope, scan
from .core import CollapseParams
from .diffusion import DEFAULT_TOL
from .errors import CcslError, ParseError, ValidationError
from .noise import WHITE, NoiseSpec, exponential
from .predict import (cold_atom_diffusion, dns_ccsl, dns_total, heating_rate,
                      normalized_xray_rate, xray_rate)
from .registry import ExperimentDescriptor, list_bundled, load


def _fmt(x: float) -> str:
    return f"{x:.8e}"  # 9 significant digits: round-trip safe, no noise digits


def _parse_noise(token: str) -> NoiseSpec:
    token = token.strip().lower()
    if token in ("white", "inf"):
        return WHITE
    if token.startswith("exp:"):
        return exponential(float(token[4:]))
    raise ValidationError("--noise", f"expected 'white', 'inf' or 'exp:<rad_s>', got {token!r}")


def _parse_rc_grid(spec: str) -> np.ndarray:
    parts = spec.split(":")
    if len(parts) != 3:
        raise ValidationError("--rc-grid", "expected <lo>:<hi>:<n>")
    lo, hi, n = float(parts[0]), float(parts[1]), int(parts[2])
    if not (0 < lo <= hi) or n < 1:
        raise ValidationError("--rc-grid", "need 0 < lo <= hi and n >= 1")
    if n == 1:
        return np.array([lo])
    return np.geomspace(lo, hi, n)


def _resolve_experiments(spec: str) -> list[ExperimentDescriptor]:
    if spec == "all":
        return [load(name) for name in list_bundled()]
    return [load(token.strip()) for token in spec.split(",") if token.strip()]


@dataclass
class RunManifest:
    command: str
    parameters: dict
    experiment_ids: list[str]
    version: str = __version__
    timestamp: str = field(default_factory=lambda: time.strftime(
        "%Y-%m-%dT%H:%M:%SZ", time.gmtime()))
    errors: list = field(default_factory=list)

    def to_json(self) -> str:
        return json.dumps(self.__dict__, sort_keys=True)

    def comment_lines(self) -> list[str]:
        return [f"# manifest: {self.to_json()}"]


# --- predict ----------------------------------------------------------------

def _predict_rows(exp: ExperimentDescriptor, p: CollapseParams, n: NoiseSpec,
                  omega: float | None, tol: float) -> list[tuple[str, str, float, str]]:
    rows = []
    if exp.kind == "optomechanical":
        probe = exp.ceiling.probe
        w = omega if omega is not None else (
            probe[0] if isinstance(probe, tuple) else probe)
        s = dns_ccsl(exp.geometry, p, n, w, tol)
        rows.append((exp.id, "force_psd_ccsl", float(s), "N^2/Hz"))
        osc = exp.oscillator
        if osc is not None and osc.gamma_m is not None:
            rows.append((exp.id, "displacement_dns_total",
                         float(dns_total(osc, exp.geometry, p, n, w, tol)), "m^2/Hz"))
    elif exp.kind == "xray":
        w = omega if omega is not None else exp.ceiling.probe
        rows.append((exp.id, "xray_normalized_rate",
                     float(normalized_xray_rate(p, n, w)), "s^-1 m^-2"))
        rows.append((exp.id, "xray_dgamma_domega",
                     float(xray_rate(p, n, w, tol)), "s^-1/(rad/s)"))
    elif exp.kind == "bulk_heating":
        rows.append((exp.id, "heating_rate",
                     heating_rate(p, n, exp.phonon, tol), "W/kg"))
    elif exp.kind == "cold_atom":
        rows.append((exp.id, "position_variance",
                     cold_atom_diffusion(p, n, exp.coldatom), "m^2"))
    else:
        raise ValidationError("experiment.kind", f"unknown kind {exp.kind!r}")
    return rows


def cmd_predict(args) -> int:
    experiments = _resolve_experiments(args.experiment)
    n = _parse_noise(args.noise)
    p = CollapseParams(lam=args.lam, rc=args.rc)
    manifest = RunManifest("predict", {
        "lambda_s^-1": args.lam, "rc_m": args.rc, "noise": args.noise,
        "omega_rad_s": args.omega, "tol": args.tol, "format": args.format,
    }, [e.id for e in experiments])
    rows = []
    for exp in experiments:
        rows.extend(_predict_rows(exp, p, n, args.omega, args.tol))
    if args.format == "json":
        doc = {"manifest": json.loads(manifest.to_json()),
               "results": [{"experiment": e, "observable": o, "value": v,
                            "unit": u} for e, o, v, u in rows]}
        print(json.dumps(doc, indent=2, sort_keys=True))
    else:
        for line in manifest.comment_lines():
            print(line)
        print("experiment,observable,value,unit")
        for e, o, v, u in rows:
            print(f"{e},{o},{_fmt(v)},{u}")
    return 0


# --- bound ------------------------------------------------------------------

def cmd_bound(args) -> int:
    experiments = _resolve_experiments(args.experiment)
    n = _parse_noise(args.noise)
    rc_values = _parse_rc_grid(args.rc_grid) if args.rc_grid else np.array([args.rc])
    manifest = RunManifest("bound", {
        "rc_m": args.rc, "rc_grid": args.rc_grid, "noise": args.noise,
        "tol": args.tol, "format": args.format,
    }, [e.id for e in experiments])
    omega_c = "inf" if n.is_white else _fmt(n.omega_c)
    rows = []
    for exp in experiments:
        curves = scan([exp], n, rc_values, args.tol,
                      on_error=lambda i, rc, e: manifest.errors.append(
                          {"experiment": i, "rc_m": rc, "error": str(e)}))
        # washed-out rc points are simply absent from the curve
        for rc, lm in curves[0].points:
            rows.append((exp.id, rc, lm))
    if args.format == "json":
        doc = {"manifest": json.loads(manifest.to_json()),
               "results": [{"experiment": e, "rc_m": rc, "lambda_max_s^-1": lm,
                            "omega_c_rad_s": omega_c} for e, rc, lm in rows]}
        print(json.dumps(doc, indent=2, sort_keys=True))
    else:
        for line in manifest.comment_lines():
            print(line)
        print("experiment,rc_m,lambda_max_s^-1,omega_c_rad_s")
        for e, rc, lm in rows:
            print(f"{e},{_fmt(rc)},{_fmt(lm)},{omega_c}")
    if not rows:
        print("error: no bound could be computed (all points washed out or failed)",
              file=sys.stderr)
        return 3
    return 0


# --- scan -------------------------------------------------------------------

def _scan_worker(payload):
    exp, noise_tokens, rc_grid, tol = payload
    curves = {}
    errors = []
    for token in noise_tokens:
        n = _parse_noise(token)
        got = scan([exp], n, rc_grid, tol,
                   on_error=lambda i, rc, e: errors.append(
                       {"experiment": i, "omega_c": token, "rc_m": rc,
                        "error": str(e)}))
        curves[token] = got[0]
    return exp.id, curves, errors


def _write_panel_csv(path: Path, token: str, rc_grid, curves: list[ExclusionCurve],
                     manifest: RunManifest):
    env = envelope(curves) if curves else None
    by_rc = []
    for c in curves:
        by_rc.append(dict(c.points))
    env_map = dict(env.points) if env is not None else {}
    lines = list(manifest.comment_lines())
    lines.append(f"# omega_c_rad_s: {token}")
    header = ["rc_m"] + [f"{c.experiment_id}_lambda_max_s^-1" for c in curves]
    header.append("envelope_lambda_max_s^-1")
    lines.append(",".join(header))
    for rc in rc_grid:
        rc = float(rc)
        cells = [_fmt(rc)]
        for cmap in by_rc:
            cells.append(_fmt(cmap[rc]) if rc in cmap else "")
        cells.append(_fmt(env_map[rc]) if rc in env_map else "")
        lines.append(",".join(cells))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def cmd_scan(args) -> int:
    experiments = _resolve_experiments(args.experiments)
    noise_tokens = [t.strip() for t in args.omega_c.split(",") if t.strip()]
    for t in noise_tokens:
        if t.lower() not in ("inf", "white"):
            try:
                float(t)
            except ValueError:
                raise ValidationError("--omega-c",
                                      f"expected 'inf' or a number, got {t!r}") from None
    rc_grid = _parse_rc_grid(args.rc_grid) if args.rc_grid else default_rc_grid()
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    manifest = RunManifest("scan", {
        "omega_c_list": noise_tokens, "rc_grid": args.rc_grid,
        "experiments": [e.id for e in experiments], "tol": args.tol,
        "jobs": args.jobs,
    }, [e.id for e in experiments])

    # noise tokens are normalized so 'white'/'inf' map to the same spec;
    # duplicates would double every curve, so keep first occurrences only
    tokens = []
    raw_by_token = {}
    for raw in noise_tokens:
        t = "inf" if raw.lower() in ("inf", "white") else f"exp:{raw}"
        if t not in raw_by_token:
            tokens.append(t)
            raw_by_token[t] = raw
    noise_tokens = [raw_by_token[t] for t in tokens]
    payloads = [(exp, tokens, rc_grid, args.tol) for exp in experiments]
    if args.jobs > 1 and len(payloads) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_scan_worker, payloads))
    else:
        results = [_scan_worker(p) for p in payloads]

    # deterministic assembly in submission order regardless of completion
    per_token: dict[str, list[ExclusionCurve]] = {t: [] for t in tokens}
    total_points = 0
    for exp_id, curves, errors in results:
        manifest.errors.extend(errors)
        for t in tokens:
            per_token[t].append(curves[t])
            total_points += len(curves[t].points)

    written = []
    for raw, t in zip(noise_tokens, tokens):
        tag = "inf" if t == "inf" else raw.lower()
        path = out_dir / f"scan_omega_c_{tag}.csv"
        _write_panel_csv(path, t, rc_grid, per_token[t], manifest)
        written.append(str(path))
    (out_dir / "scan_manifest.json").write_text(manifest.to_json() + "\n",
                                                encoding="utf-8")
    for path in written:
        print(path)
    if total_points == 0:
        print("error: every scan point failed", file=sys.stderr)
        return 3
    return 0


# --- entry point --------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="ccsl",
        description="Collapse-model (colored CSL) predictions and exclusion bounds.")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--noise", default="white",
                       help="'white', 'inf', or 'exp:<omega_c rad/s>'")
        p.add_argument("--tol", type=float, default=DEFAULT_TOL,
                       help="relative quadrature tolerance")
        p.add_argument("--format", choices=("csv", "json"), default="csv")

    p = sub.add_parser("predict", help="evaluate observables for an experiment")
    p.add_argument("--experiment", required=True,
                   help="bundled id, config path, comma list, or 'all'")
    p.add_argument("--lambda", dest="lam", type=float, required=True,
                   help="collapse rate, s^-1")
    p.add_argument("--rc", type=float, required=True,
                   help="correlation length, m")
    p.add_argument("--omega", type=float, default=None,
                   help="probe angular frequency, rad/s (defaults to the ceiling probe)")
    common(p)
    p.set_defaults(func=cmd_predict)

    b = sub.add_parser("bound", help="invert a ceiling into lambda_max")
    b.add_argument("--experiment", required=True)
    group = b.add_mutually_exclusive_group(required=True)
    group.add_argument("--rc", type=float, help="single rc, m")
    group.add_argument("--rc-grid", help="<lo>:<hi>:<n> log-spaced grid, m")
    common(b)
    b.set_defaults(func=cmd_bound)

    s = sub.add_parser("scan", help="full exclusion scan, one CSV per cutoff")
    s.add_argument("--experiments", default="all")
    s.add_argument("--omega-c", default="inf,1e15,1e4,1e1",
                   help="comma list of cutoffs in rad/s; 'inf' selects white noise")
    s.add_argument("--rc-grid", default=None, help="<lo>:<hi>:<n>, default 1e-9:1e-3:60")
    s.add_argument("--out-dir", default="scan_out")
    s.add_argument("--jobs", type=int, default=os.cpu_count() or 1,
                   help="worker processes (1 = in-process)")
    s.add_argument("--tol", type=float, default=DEFAULT_TOL)
    s.set_defaults(func=cmd_scan)
    return ap


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as err:
        return int(err.code) if err.code else 0
    try:
        return args.func(args)
    except (ParseError, ValidationError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    except CcslError as err:
        print(f"error: {err}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
