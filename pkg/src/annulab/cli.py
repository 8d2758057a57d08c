"""Command-line front end.

One subcommand per solver/audit; every run writes `<out>/<command>.csv`
(17-significant-digit scientific notation, a `#` config-echo line, then the
header row) and `<out>/<command>_summary.json` (schema-versioned, sorted
keys).  Outputs are byte-identical for identical (config, seed) pairs.
`report` aggregates previously written JSON summaries into one pass/fail
table.

Exit codes: 0 success, 1 validation error, 2 numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
from pathlib import Path

import numpy as np

from . import (
    __version__,
    auditors,
    bases,
    estimates,
    geometry,
    heatkernel,
    numerics,
    perturb,
    radial,
)

SCHEMA_VERSION = "annulab.summary.v1"

__all__ = ["main", "run"]


def _float_list(text: str) -> list[float]:
    return [float(v) for v in text.replace(",", " ").split()]


def _fmt(v):
    if isinstance(v, bool):
        return str(v)
    if isinstance(v, float):
        return format(v, ".17e")
    return v


def _write_csv(path: Path, command: str, config: dict, rows: list[dict]) -> None:
    with open(path, "w", newline="", encoding="ascii") as fh:
        fh.write(f"# annulab {__version__} {command} "
                 f"config={json.dumps(config, sort_keys=True)}\n")
        if not rows:
            return
        keys = sorted({k for row in rows for k in row})
        writer = csv.writer(fh)
        writer.writerow(keys)
        for row in rows:
            writer.writerow([_fmt(row.get(k, "")) for k in keys])


def _write_summary(path: Path, command: str, config: dict, checks: list[dict],
                   results: dict) -> None:
    doc = {
        "schema_version": SCHEMA_VERSION,
        "library_version": __version__,
        "command": command,
        "config": config,
        "checks": checks,
        "results": results,
    }
    with open(path, "w", encoding="ascii") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _check(name: str, status: str, **data) -> dict:
    if status not in ("pass", "fail", "report-only"):
        raise ValueError(f"bad status {status}")
    return {"name": name, "status": status, **data}


def _base_from_args(args) -> bases.BaseDomain:
    if args.base == "full":
        return bases.full_sphere(args.n)
    if args.base == "arc":
        if args.n != 2:
            raise ValueError("arc bases need n = 2")
        return bases.circle_arc(args.theta1)
    if args.base == "orthant":
        return bases.orthant_intersection(args.n, args.k_coords)
    raise ValueError(f"unknown base {args.base!r}")


def _cmd_solve(args, config):
    base = _base_from_args(args)
    data = bases.base_eigendata(base)
    results = radial.solve_radial(args.n, args.a, args.b, data.lambda0,
                                  N=args.grid, k=args.count)
    rows = [{"index": j, "lambda": res.lam} for j, res in enumerate(results)]
    checks = [_check("solve", "report-only", lambda0=data.lambda0,
                     lambda_u=results[0].lam)]
    return rows, checks, {"lambda": results[0].lam, "lambda0_base": data.lambda0}


def _cmd_bounds(args, config):
    report = estimates.annulus_eigenvalue_bounds(args.n, args.a, args.b)
    rows = [{"lambda": report.value, "lower": report.lower, "upper": report.upper,
             "C1": report.extra["C1"], "C2": report.extra["C2"]}]
    checks = [_check("eigenvalue_in_interval", "pass" if report.passed else "fail",
                     value=report.value, lower=report.lower, upper=report.upper)]
    return rows, checks, {"interval": [report.lower, report.upper],
                          "lambda": report.value}


def _cmd_caricature(args, config):
    if args.kind == "thin":
        fn = estimates.thin_annulus_caricature(args.n, args.a, args.b)
    elif args.kind == "wide":
        fn = estimates.wide_annulus_caricature(args.n, args.a, args.b)
    else:
        raise ValueError(f"unknown caricature kind {args.kind!r}")
    radii = _float_list(args.points) if args.points else list(
        np.linspace(args.a, args.b, 17)[1:-1]
    )
    vals = estimates.caricature_eval(fn, np.asarray(radii))
    rows = [{"r": r, "value": float(v)} for r, v in zip(radii, vals)]
    return rows, [_check("caricature_eval", "report-only", kind=args.kind)], {}


def _cmd_hadamard(args, config):
    rows = estimates.hadamard_scan(args.n, _float_list(args.t), N=args.grid)
    checks = []
    if args.n == 3:
        target = 2.0 * math.pi**2
        ok = all(abs(r["t3_dlam"] - target) <= 0.01 * target for r in rows)
        checks.append(_check("exact_sensitivity_n3", "pass" if ok else "fail",
                             target=target))
    else:
        vals = [r["t3_dlam"] for r in rows]
        checks.append(_check("sensitivity_window", "report-only",
                             min=min(vals), max=max(vals)))
    return rows, checks, {"values": [r["t3_dlam"] for r in rows]}


def _thin_spec(eps: float) -> radial.AnnularDomainSpec:
    return radial.AnnularDomainSpec(2, 1.0, 1.0 + eps, bases.full_sphere(2))


def _weight_for(spec, tag: str) -> geometry.WeightFunction:
    if tag == "phi2":
        return geometry.dirichlet_weight(spec)
    if tag == "uniform":
        return geometry.uniform_weight(spec)
    raise ValueError(f"unknown weight {tag!r}")


def _audit_centers(spec, count: int = 4):
    eps = spec.b - spec.a
    mids = [spec.a + eps / 2.0, spec.a + eps / 10.0]
    angles = [2.0 * math.pi * j / count for j in range(count)]
    return [(r, th) for r in mids for th in angles]


def _dyadic_radii(spec, eps):
    diam = max(math.pi, spec.b - spec.a)
    radii = []
    r = diam
    while r >= eps / 2.0:
        radii.append(r)
        r /= 2.0
    return radii[::-1]


def _cmd_vd_audit(args, config):
    spec = _thin_spec(args.eps)
    weight = _weight_for(spec, args.weight)
    radii = _dyadic_radii(spec, args.eps)
    report = auditors.doubling_profile(spec, weight, _audit_centers(spec), radii)
    status = "pass" if report.summary["doubling_max"] < args.bound else "fail"
    checks = [_check("doubling_bounded", status,
                     doubling_max=report.summary["doubling_max"], bound=args.bound)]
    return report.rows, checks, report.summary


def _cmd_pi_audit(args, config):
    spec = _thin_spec(args.eps)
    weight = _weight_for(spec, args.weight)
    radii = _dyadic_radii(spec, args.eps)
    mode = "continuous_grid" if args.mode == "continuous" else "discrete_net"
    report = auditors.poincare_profile(
        spec, weight, _audit_centers(spec, count=2), radii,
        mode=mode, epsilon=args.eps,
    )
    lo, hi = args.window
    ok = lo <= report.summary["poincare_min"] and report.summary["poincare_max"] <= hi
    checks = [_check("poincare_window", "pass" if ok else "fail",
                     lo=lo, hi=hi,
                     poincare_min=report.summary["poincare_min"],
                     poincare_max=report.summary["poincare_max"])]
    return report.rows, checks, report.summary


def _annulus_spectrum_for(eps: float, t_min: float):
    spec = _thin_spec(eps)
    lam1 = (math.pi / eps) ** 2
    m_max = 8
    while m_max**2 * t_min < math.log(1e10) and m_max < 256:
        m_max *= 2
    return spec, radial.assemble_spectrum(spec, M_base=m_max, K_radial=3, N=256)


def _sample_points_annulus(spec, count=5):
    eps = spec.b - spec.a
    radii = spec.a + eps * np.array([0.3, 0.5, 0.7])
    angles = 2.0 * math.pi * np.arange(count) / count
    return np.array([(r, th) for r in radii for th in angles])


def _cmd_heat_kernel(args, config):
    t_grid = _float_list(args.t)
    if args.domain == "box":
        box = heatkernel.Box(tuple(_float_list(args.half_widths)))
        spectrum = heatkernel.box_spectrum(box, args.modes)
        grids = [np.linspace(-a, a, 7)[1:-1] for a in box.half_widths]
        pts = np.stack(np.meshgrid(*grids, indexing="ij"), axis=-1).reshape(-1, box.dim)
    else:
        spec, spectrum = _annulus_spectrum_for(args.eps, min(t_grid))
        pts = _sample_points_annulus(spec)
    audit = heatkernel.equilibration_audit(spectrum, t_grid, pts)
    rel = abs(audit["fitted_rate"] - audit["spectral_gap"]) / audit["spectral_gap"]
    checks = [_check("decay_rate_matches_gap", "pass" if rel <= 0.05 else "fail",
                     fitted=audit["fitted_rate"], gap=audit["spectral_gap"],
                     rel_err=rel)]
    return audit["rows"], checks, {k: v for k, v in audit.items() if k != "rows"}


def _cmd_box_kernel(args, config):
    box = heatkernel.Box(tuple(_float_list(args.half_widths)))
    audit = heatkernel.box_kernel_bounds_check(box, _float_list(args.t))
    ok = audit["deviation_constant"] <= 10.0
    checks = [_check("deviation_envelope", "pass" if ok else "fail",
                     constant=audit["deviation_constant"], bound=10.0)]
    return audit["rows"], checks, {k: v for k, v in audit.items() if k != "rows"}


def _cmd_hke_fit(args, config):
    eps = args.eps
    diam2 = math.pi**2
    t_grid = [eps**2, 4 * eps**2, 0.1 * diam2, diam2]
    spec, spectrum = _annulus_spectrum_for(eps, min(t_grid))
    weight = geometry.dirichlet_weight(spec)
    audit = heatkernel.gaussian_hke_audit(spec, t_grid, weight, spectrum)
    if audit.get("degenerate"):
        checks = [_check("gaussian_fit", "fail", reason="degenerate fit")]
        return audit["rows"], checks, {"degenerate": True}
    finite = all(
        math.isfinite(audit[k]) and audit[k] > 0 for k in ("c_lo", "c_hi", "c2", "c4")
    )
    checks = [_check("gaussian_fit", "pass" if finite else "fail",
                     c_lo=audit["c_lo"], c_hi=audit["c_hi"],
                     c2=audit["c2"], c4=audit["c4"])]
    return audit["rows"], checks, {k: v for k, v in audit.items() if k != "rows"}


def _cmd_sector(args, config):
    betas = _float_list(args.beta)
    report = auditors.sector_counterexample(betas, nodes=args.nodes)
    checks = [_check("ratio_increasing",
                     "pass" if report.summary["ratio_increasing_as_beta_shrinks"] else "fail")]
    for row in report.rows:
        ok = row["doubling_ratio"] >= 0.5 * row["predicted_ratio"]
        checks.append(_check(f"doubling_ratio_beta_{row['beta']:g}",
                             "pass" if ok else "fail",
                             measured=row["doubling_ratio"],
                             predicted=row["predicted_ratio"]))
    return report.rows, checks, report.summary


def _cmd_perturb_box(args, config):
    if args.scenario:
        scenario = perturb.load_scenario(args.scenario)
    else:
        scenario = perturb.PerturbationScenario(
            kind="box", a_widths=(1.0, 1.0), b_widths=(1.05, 1.05),
            notch=0.05, C1=0.2, C2=1.1,
        )
    audit = perturb.box_perturbation_audit(scenario, h=args.h)
    ok = (audit["upper_ratio"] <= args.bound
          and audit["lower_ratio"] >= 1.0 / args.bound
          and audit["eigenvalue_ordering_ok"])
    rows = [{k: v for k, v in audit.items() if isinstance(v, (int, float, bool))}]
    checks = [_check("box_sandwich_ratios", "pass" if ok else "fail",
                     upper=audit["upper_ratio"], lower=audit["lower_ratio"],
                     bound=args.bound)]
    return rows, checks, {k: v for k, v in audit.items() if k != "conditions"}


def _cmd_perturb_annulus(args, config):
    if args.scenario:
        scenario = perturb.load_scenario(args.scenario)
    else:
        eps = args.eps
        scenario = perturb.PerturbationScenario(
            kind="annulus", eps=eps, a_eps=eps**3, b_eps=eps**3,
            rmin_const=1.0 - eps**3 / 2.0,
            rmin_harmonics=((8, eps**3 / 2.0, 0.0),),
            rmax_const=1.0 + eps + eps**3 / 2.0,
            rmax_harmonics=((9, eps**3 / 2.0, 0.7),),
        )
    audit = perturb.annulus_perturbation_audit(scenario, grids=(args.nr, args.ntheta))
    ok = (audit["upper_ratio"] <= args.bound
          and audit["lower_ratio"] >= 1.0 / args.bound
          and audit["core_spread"] <= args.bound
          and audit["eigenvalue_ordering_ok"])
    rows = [{k: v for k, v in audit.items() if isinstance(v, (int, float, bool))}]
    checks = [_check("annulus_sandwich_ratios", "pass" if ok else "fail",
                     upper=audit["upper_ratio"], lower=audit["lower_ratio"],
                     core_spread=audit["core_spread"], bound=args.bound)]
    return rows, checks, audit


def _cmd_report(args, config, out_dir: Path):
    rows = []
    n_pass = n_fail = 0
    for path in sorted(out_dir.glob("*_summary.json")):
        if path.name == "report_summary.json":
            continue
        with open(path, encoding="ascii") as fh:
            doc = json.load(fh)
        for check in doc.get("checks", []):
            rows.append({"source": doc.get("command", path.stem),
                         "check": check["name"], "status": check["status"]})
            if check["status"] == "pass":
                n_pass += 1
            elif check["status"] == "fail":
                n_fail += 1
    checks = [_check("aggregate", "pass" if n_fail == 0 else "fail",
                     n_pass=n_pass, n_fail=n_fail)]
    return rows, checks, {"n_pass": n_pass, "n_fail": n_fail}


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="annulab",
        description="Eigenpairs, heat kernels, and metric-measure audits on annular domains",
    )
    p.add_argument("--out", default=None, help="output directory (default $OUT_DIR or .)")
    p.add_argument("--config", default=None, help="key = value config file overriding defaults")
    p.add_argument("--seed", type=int, default=0, help="seed echoed into outputs")
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("solve", help="radial shell eigenvalues")
    sp.add_argument("--n", type=int, default=3)
    sp.add_argument("--a", type=float, default=1.0)
    sp.add_argument("--b", type=float, default=2.0)
    sp.add_argument("--base", default="full", choices=["full", "arc", "orthant"])
    sp.add_argument("--theta1", type=float, default=math.pi)
    sp.add_argument("--k-coords", type=int, default=1)
    sp.add_argument("--count", type=int, default=1)
    sp.add_argument("--grid", type=int, default=1024)

    sp = sub.add_parser("bounds", help="two-sided annulus eigenvalue bounds")
    sp.add_argument("--n", type=int, default=2)
    sp.add_argument("--a", type=float, default=1.0)
    sp.add_argument("--b", type=float, default=2.0)

    sp = sub.add_parser("caricature", help="evaluate a comparison profile")
    sp.add_argument("--kind", default="thin", choices=["thin", "wide"])
    sp.add_argument("--n", type=int, default=2)
    sp.add_argument("--a", type=float, default=1.0)
    sp.add_argument("--b", type=float, default=1.5)
    sp.add_argument("--points", default="")

    sp = sub.add_parser("hadamard", help="eigenvalue sensitivity scan")
    sp.add_argument("--n", type=int, default=3)
    sp.add_argument("--t", default="0.05,0.1,0.5,1.0")
    sp.add_argument("--grid", type=int, default=1024)

    sp = sub.add_parser("vd-audit", help="volume doubling audit on a thin annulus")
    sp.add_argument("--eps", type=float, default=0.1)
    sp.add_argument("--weight", default="phi2", choices=["phi2", "uniform"])
    sp.add_argument("--bound", type=float, default=64.0)

    sp = sub.add_parser("pi-audit", help="Poincare constant audit on a thin annulus")
    sp.add_argument("--eps", type=float, default=0.1)
    sp.add_argument("--weight", default="phi2", choices=["phi2", "uniform"])
    sp.add_argument("--mode", default="continuous", choices=["continuous", "discrete"])
    sp.add_argument("--window", type=float, nargs=2, default=(0.01, 1.0))

    sp = sub.add_parser("heat-kernel", help="equilibration audit")
    sp.add_argument("--domain", default="box", choices=["box", "annulus"])
    sp.add_argument("--half-widths", default="1.0")
    sp.add_argument("--eps", type=float, default=0.1)
    sp.add_argument("--t", default="0.5,1,2,3,4,5")
    sp.add_argument("--modes", type=int, default=64)

    sp = sub.add_parser("box-kernel", help="box kernel envelope check")
    sp.add_argument("--half-widths", default="1.0")
    sp.add_argument("--t", default="1,2,4,8,16")

    sp = sub.add_parser("hke-fit", help="Gaussian envelope fit on a thin annulus")
    sp.add_argument("--eps", type=float, default=0.1)

    sp = sub.add_parser("sector", help="sector doubling counterexample")
    sp.add_argument("--beta", default="0.2")
    sp.add_argument("--nodes", type=int, default=4096)

    sp = sub.add_parser("perturb-box", help="box sandwich audit")
    sp.add_argument("--scenario", default=None)
    sp.add_argument("--h", type=float, default=1.0 / 128.0)
    sp.add_argument("--bound", type=float, default=10.0)

    sp = sub.add_parser("perturb-annulus", help="shell sandwich audit")
    sp.add_argument("--scenario", default=None)
    sp.add_argument("--eps", type=float, default=0.3)
    sp.add_argument("--nr", type=int, default=48)
    sp.add_argument("--ntheta", type=int, default=384)
    sp.add_argument("--bound", type=float, default=10.0)

    sub.add_parser("report", help="aggregate JSON summaries into a pass/fail table")
    return p


_DISPATCH = {
    "solve": _cmd_solve,
    "bounds": _cmd_bounds,
    "caricature": _cmd_caricature,
    "hadamard": _cmd_hadamard,
    "vd-audit": _cmd_vd_audit,
    "pi-audit": _cmd_pi_audit,
    "heat-kernel": _cmd_heat_kernel,
    "box-kernel": _cmd_box_kernel,
    "hke-fit": _cmd_hke_fit,
    "sector": _cmd_sector,
    "perturb-box": _cmd_perturb_box,
    "perturb-annulus": _cmd_perturb_annulus,
}


def _apply_config_file(args, parser):
    """key = value file entries override parser defaults (flags still win)."""
    if not args.config:
        return args
    overrides = {}
    with open(args.config, encoding="utf-8") as fh:
        for raw in fh:
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            key, val = (s.strip() for s in line.split("=", 1))
            overrides[key.replace("-", "_")] = val
    for key, val in overrides.items():
        if not hasattr(args, key):
            raise ValueError(f"unknown config key {key!r}")
        current = getattr(args, key)
        if isinstance(current, bool):
            setattr(args, key, val.lower() in ("1", "true", "yes"))
        elif isinstance(current, int):
            setattr(args, key, int(val))
        elif isinstance(current, float):
            setattr(args, key, float(val))
        else:
            setattr(args, key, val)
    return args


def run(argv: list[str]) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 1 if exc.code not in (0, None) else 0
    out_dir = Path(args.out or os.environ.get("OUT_DIR", "."))
    try:
        args = _apply_config_file(args, parser)
        config = {
            k: v for k, v in sorted(vars(args).items())
            if k not in ("out", "config") and v is not None
        }
        out_dir.mkdir(parents=True, exist_ok=True)
        if args.command == "report":
            rows, checks, results = _cmd_report(args, config, out_dir)
        else:
            rows, checks, results = _DISPATCH[args.command](args, config)
    except (ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (numerics.NonConvergenceError, heatkernel.InsufficientSpectrumError,
            RuntimeError, ArithmeticError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 2
    stem = args.command.replace("-", "_")
    _write_csv(out_dir / f"{stem}.csv", args.command, config, rows)
    _write_summary(out_dir / f"{stem}_summary.json", args.command, config,
                   checks, _jsonable(results))
    failed = [c for c in checks if c["status"] == "fail"]
    for c in checks:
        print(f"[{c['status']:>11}] {args.command}: {c['name']}")
    return 0 if not failed else 2


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, float) and not math.isfinite(obj):
        return repr(obj)
    if isinstance(obj, estimates.BoundsReport):
        return _jsonable(vars(obj))
    return obj


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
