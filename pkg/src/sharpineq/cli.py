"""Command-line front end: config parsing, suite execution, CSV/JSON artifacts.

Config files are INI (``key = value`` sections); see the repository README
for the grammar.  Identical config and seed produce byte-identical outputs.
"""

from __future__ import annotations

import argparse
import configparser
import hashlib
import io
import json
import math
import sys
import time
from dataclasses import dataclass, field, asdict
from pathlib import Path
from typing import Optional

import numpy as np

from . import flat, hyperbolic as hyp
from .norms import MinkowskiNorm, dual_norm_value, uniformity_constant
from .quadrature import DecayClass, QuadratureSpec, RadialProfile

SUITES = (
    "identities",
    "flat-hpw",
    "flat-hardy",
    "hyperbolic",
    "ko-refute",
    "chpw-bounds",
    "all",
)


class ConfigError(ValueError):
    """Invalid configuration, with a precise message per error."""

    def __init__(self, errors):
        self.errors = list(errors)
        super().__init__("; ".join(self.errors))


@dataclass
class RunConfig:
    suite: str
    n: int = 3
    norm_spec: dict = field(default_factory=lambda: {"family": "euclidean", "dimension": 3})
    triple: Optional[tuple] = None  # (n, p, q)
    lambda_grid: tuple = (0.5, 1.0, 2.0)
    epsilon_grid: tuple = tuple(10.0**-k for k in range(2, 9))
    rho_grid: tuple = (0.01, 0.5, 1.0, 2.0, 3.0)
    alpha_range: tuple = (3.0, 100.0)
    alpha_nodes: int = 4096
    tolerance: float = 1e-9
    seed: int = 0x5EED
    output_dir: str = "out"

    def quadrature_spec(self) -> QuadratureSpec:
        return QuadratureSpec(relative_tolerance=self.tolerance, mc_seed=self.seed)

    def norm(self) -> MinkowskiNorm:
        return build_norm(self.norm_spec)


def build_norm(spec: dict) -> MinkowskiNorm:
    family = spec.get("family", "euclidean")
    n = int(spec.get("dimension", 3))
    if family == "euclidean":
        return MinkowskiNorm(n, "weighted-euclidean", matrix=np.eye(n))
    if family == "weighted-euclidean":
        flat_vals = [float(v) for v in spec["matrix"]]
        A = np.array(flat_vals).reshape(n, n)
        return MinkowskiNorm(n, "weighted-euclidean", matrix=A)
    if family == "lp":
        return MinkowskiNorm(n, "lp", exponent=float(spec["p"]))
    raise ConfigError([f"unknown norm family {family!r}"])


def _floats(text: str) -> tuple:
    return tuple(float(v) for v in text.replace(",", " ").split())


def parse_config(text: str) -> RunConfig:
    """Parse and validate an INI config block; raise ConfigError listing defects."""
    cp = configparser.ConfigParser()
    try:
        cp.read_string(text)
    except configparser.Error as exc:
        raise ConfigError([f"syntax error: {exc}"]) from exc
    errors = []
    run = cp["run"] if cp.has_section("run") else {}
    suite = run.get("suite", "").strip()
    if suite not in SUITES:
        errors.append(f"unknown or missing suite {suite!r}; expected one of {SUITES}")
    cfg = RunConfig(suite=suite or "all")
    if "n" in run:
        cfg.n = int(run["n"])
    if "output_dir" in run:
        cfg.output_dir = run["output_dir"]
    if cp.has_section("norm"):
        sec = cp["norm"]
        spec = {"family": sec.get("family", "euclidean")}
        if "dimension" in sec:
            spec["dimension"] = int(sec["dimension"])
        if "p" in sec:
            spec["p"] = float(sec["p"])
        if "matrix" in sec:
            spec["matrix"] = list(_floats(sec["matrix"]))
        cfg.norm_spec = spec
        try:
            build_norm(spec)
        except ConfigError as exc:
            errors.extend(exc.errors)
        except Exception as exc:
            errors.append(f"bad norm config: {exc}")
    if cp.has_section("triple"):
        sec = cp["triple"]
        try:
            tn, tp, tq = int(sec["n"]), float(sec["p"]), float(sec["q"])
            flat.ExponentTriple(tn, tp, tq)
            cfg.triple = (tn, tp, tq)
        except flat.AdmissibilityError as exc:
            errors.append(f"inadmissible exponent triple: {exc}")
        except (KeyError, ValueError) as exc:
            errors.append(f"bad triple section: {exc}")
    if cp.has_section("grids"):
        sec = cp["grids"]
        try:
            if "lambda" in sec:
                cfg.lambda_grid = _floats(sec["lambda"])
            if "epsilon" in sec:
                cfg.epsilon_grid = _floats(sec["epsilon"])
            if "rho" in sec:
                cfg.rho_grid = _floats(sec["rho"])
            if "alpha" in sec:
                rng = _floats(sec["alpha"])
                if len(rng) != 2 or not (0 < rng[0] < rng[1]):
                    errors.append("grids.alpha must be two increasing positive numbers")
                else:
                    cfg.alpha_range = rng
            if "alpha_nodes" in sec:
                cfg.alpha_nodes = int(sec["alpha_nodes"])
        except ValueError as exc:
            errors.append(f"bad grid value: {exc}")
    if cp.has_section("quadrature"):
        sec = cp["quadrature"]
        if "tolerance" in sec:
            cfg.tolerance = float(sec["tolerance"])
            if cfg.tolerance <= 0:
                errors.append("quadrature.tolerance must be positive")
        if "seed" in sec:
            cfg.seed = int(sec["seed"], 0)
    if cfg.suite in ("identities",) and cfg.triple is None:
        errors.append("suite 'identities' requires a [triple] section")
    for name in ("lambda_grid", "epsilon_grid", "rho_grid"):
        if not getattr(cfg, name):
            errors.append(f"{name} must be non-empty")
    if errors:
        raise ConfigError(errors)
    return cfg


def render_config(cfg: RunConfig) -> str:
    """Inverse of parse_config for generated configs (round-trip safe)."""
    cp = configparser.ConfigParser()
    cp["run"] = {"suite": cfg.suite, "n": str(cfg.n), "output_dir": cfg.output_dir}
    norm = {k: (" ".join(_fmt(v) for v in val) if isinstance(val, list) else str(val))
            for k, val in cfg.norm_spec.items()}
    cp["norm"] = norm
    if cfg.triple is not None:
        cp["triple"] = {"n": str(cfg.triple[0]), "p": _fmt(cfg.triple[1]), "q": _fmt(cfg.triple[2])}
    cp["grids"] = {
        "lambda": " ".join(_fmt(v) for v in cfg.lambda_grid),
        "epsilon": " ".join(_fmt(v) for v in cfg.epsilon_grid),
        "rho": " ".join(_fmt(v) for v in cfg.rho_grid),
        "alpha": " ".join(_fmt(v) for v in cfg.alpha_range),
        "alpha_nodes": str(cfg.alpha_nodes),
    }
    cp["quadrature"] = {"tolerance": _fmt(cfg.tolerance), "seed": str(cfg.seed)}
    buf = io.StringIO()
    cp.write(buf)
    return buf.getvalue()


def _fmt(x: float) -> str:
    """17 significant digits, lowercase scientific; lossless double round-trip."""
    return f"{float(x):.16e}"


@dataclass
class CheckRow:
    suite: str
    name: str
    param: float
    lhs: float
    rhs: float
    ratio: float
    target: float
    slack: float
    err: float
    tolerance: float
    passed: bool


@dataclass
class SuiteResult:
    suite: str
    checks: list
    wall_time: float
    config_hash: str
    seed: int
    series: dict = field(default_factory=dict)  # xy plot data per trace name

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)


def _row(suite, name, param, report, tolerance, predicate=None) -> CheckRow:
    slack = report.slack
    ok = slack >= -tolerance if predicate is None else predicate(report)
    finite = all(
        math.isfinite(v) for v in (report.lhs, report.rhs, report.ratio, report.slack)
    )
    return CheckRow(
        suite=suite,
        name=name,
        param=param,
        lhs=report.lhs,
        rhs=report.rhs,
        ratio=report.ratio,
        target=report.target,
        slack=slack,
        err=report.combined_error,
        tolerance=tolerance,
        passed=bool(ok and finite),
    )


def _scalar_row(suite, name, param, value, target, tolerance) -> CheckRow:
    slack = tolerance - abs(value - target)
    return CheckRow(
        suite=suite,
        name=name,
        param=param,
        lhs=value,
        rhs=target,
        ratio=value / target if target else value,
        target=target,
        slack=abs(value - target),
        err=0.0,
        tolerance=tolerance,
        passed=bool(math.isfinite(value) and abs(value - target) <= tolerance),
    )


def _run_identities(cfg: RunConfig) -> list:
    spec = cfg.quadrature_spec()
    t = flat.ExponentTriple(*cfg.triple)
    rows = []
    for lam, rep in zip(cfg.lambda_grid, flat.check_pqr_identity(t, cfg.lambda_grid, spec)):
        rows.append(
            _row(
                "identities",
                "pqr-identity",
                lam,
                rep,
                1e-6,
                predicate=lambda r: abs(r.ratio - r.target) <= 1e-6,
            )
        )
    for lam, res in zip(cfg.lambda_grid, flat.check_p_ode(t, cfg.lambda_grid, spec)):
        rows.append(_scalar_row("identities", "p-ode-residual", lam, res, 0.0, 1e-5))
    for lam in cfg.lambda_grid:
        gt = flat.gaussian_T(t.n, lam, spec)
        rows.append(
            _scalar_row(
                "identities", "gaussian-T-closed-form", lam,
                gt["closed_form_relative_error"], 0.0, 1e-9,
            )
        )
        rows.append(
            _scalar_row(
                "identities", "gaussian-T-ode", lam,
                gt["ode_relative_residual"], 0.0, 1e-6,
            )
        )
    return rows


def _gaussian_test_function(lam: float) -> flat.TestFunction:
    def u(r):
        return math.exp(-lam * r * r)

    def du(r):
        return -2 * lam * r * u(r)

    return flat.TestFunction.radial(RadialProfile(u, DecayClass.gaussian(lam)), du)


def _run_flat_hpw(cfg: RunConfig) -> list:
    spec = cfg.quadrature_spec()
    norm = cfg.norm()
    rows = []
    for lam in cfg.lambda_grid:
        rep = flat.hpw_report(norm, cfg.n, _gaussian_test_function(lam), spec)
        rows.append(
            _row(
                "flat-hpw",
                "hpw-gaussian-equality",
                lam,
                rep,
                1e-6,
                predicate=lambda r: abs(r.ratio - r.target) <= 1e-6,
            )
        )
        res = flat.gaussian_moment_identity(cfg.n, lam, spec)
        rows.append(_scalar_row("flat-hpw", "moment-identity", lam, res, 0.0, 1e-8))
    return rows


def _run_flat_hardy(cfg: RunConfig) -> tuple[list, dict]:
    spec = cfg.quadrature_spec()
    norm = cfg.norm()
    n = cfg.n
    rows = []

    def u(r):
        return r * math.exp(-r * r)

    def du(r):
        return (1 - 2 * r * r) * math.exp(-r * r)

    tf = flat.TestFunction.radial(RadialProfile(u, DecayClass.gaussian(1.0)), du)
    rows.append(_row("flat-hardy", "hardy-quotient", 0.0, flat.hardy_report(norm, n, tf, 0.0, spec), 0.0))
    sweep = flat.hardy_sharpness_sweep(norm, n, 1.0, 2.0, cfg.epsilon_grid, spec)
    mono = all(
        b <= a + 1e-12 for a, b in zip(sweep["quotients"], sweep["quotients"][1:])
    )
    above = all(q >= sweep["target"] - 1e-10 for q in sweep["quotients"])
    limit_ok = abs(sweep["extrapolated_limit"] - sweep["target"]) <= 0.01
    rows.append(
        CheckRow(
            "flat-hardy", "sharpness-sweep", 0.0,
            sweep["extrapolated_limit"], sweep["target"],
            sweep["extrapolated_limit"] / sweep["target"], sweep["target"],
            sweep["extrapolated_limit"] - sweep["target"], 0.0, 0.01,
            bool(mono and above and limit_ok),
        )
    )
    psi, dpsi = flat.smoothstep_cutoff(0.5, 1.0)
    bump = flat.TestFunction.radial(
        RadialProfile(lambda r: psi(r), DecayClass.compact(1.0), breakpoints=(0.5,)),
        dpsi,
    )
    l_star = 1.0 if norm.family == "weighted-euclidean" else uniformity_constant(norm)
    rows.append(
        _row(
            "flat-hardy", "double-hardy", l_star,
            flat.double_hardy_report(norm, n, bump, 2.0, l_star, spec), 1e-9,
        )
    )
    series = {
        "hardy_quotient_vs_logeps": [
            (math.log(1.0 / e), q) for e, q in zip(sweep["eps"], sweep["quotients"])
        ]
    }
    return rows, series


def _run_hyperbolic(cfg: RunConfig) -> tuple[list, dict]:
    spec = cfg.quadrature_spec()
    n = cfg.n
    rows = []
    lap = hyp.laplace_comparison_check(n, [-1.0, 0.0], cfg.rho_grid)
    rows.append(
        _scalar_row("hyperbolic", "laplace-comparison-equality", -1.0,
                    lap["max_equality_defect"], 0.0, 1e-12)
    )
    vol = hyp.hyp_volume_ratio_check(n, cfg.rho_grid, spec)
    rows.append(
        CheckRow(
            "hyperbolic", "volume-ratio-monotone", 0.0,
            min(vol["ratios"]), vol["omega_n"],
            min(vol["ratios"]) / vol["omega_n"], vol["omega_n"],
            min(vol["ratios"]) - vol["omega_n"], 0.0, 1e-10,
            bool(vol["non_decreasing"] and vol["all_above_omega"]),
        )
    )
    for alpha in (0.25, 1.0, 4.0):
        rep = hyp.modified_hpw_report(n, alpha=alpha, spec=spec)
        rows.append(
            _row(
                "hyperbolic", "modified-hpw-equality", alpha, rep, 1e-6,
                predicate=lambda r: abs(r.ratio - r.target) / r.target <= 1e-6,
            )
        )
    rep = hyp.hpw_hyperbolic_report(hyp.RadialHypFunction.gaussian(1.0), n, spec)
    rows.append(
        _row(
            "hyperbolic", "hpw-strictness", 1.0, rep, 0.0,
            predicate=lambda r: r.slack > 100 * r.combined_error * r.target,
        )
    )
    if n >= 3:
        u = hyp.RadialHypFunction(
            RadialProfile(lambda r: r * math.exp(-r * r), DecayClass.gaussian(1.0)),
            lambda r: (1 - 2 * r * r) * math.exp(-r * r),
        )
        rep1, rep2 = hyp.hardy_hyperbolic_report(u, n, spec)
        rows.append(_row("hyperbolic", "hardy-quantitative", 0.0, rep1, 1e-9))
        rows.append(_row("hyperbolic", "hardy-improved", 0.0, rep2, 1e-9))
    series = {"volume_ratio_vs_rho": list(zip(vol["rho"], vol["ratios"]))}
    return rows, series


def _run_ko_refute(cfg: RunConfig) -> tuple[list, dict]:
    spec = cfg.quadrature_spec()
    scan = hyp.ko_alpha_scan(cfg.n, cfg.alpha_range, cfg.alpha_nodes, spec)
    rows = [
        CheckRow(
            "ko-refute", "no-sign-change", float(cfg.n),
            float(len(scan["brackets"])), 0.0,
            float(len(scan["brackets"])), 0.0,
            -float(len(scan["brackets"])), 0.0, 0.0,
            len(scan["brackets"]) == 0,
        )
    ]
    series = {"phi_vs_alpha": list(zip(scan["alphas"], scan["phi"]))}
    return rows, series


def _run_chpw_bounds(cfg: RunConfig) -> list:
    spec = cfg.quadrature_spec()
    b = hyp.hpw_constant_bounds(cfg.n, spec=spec)
    return [
        CheckRow(
            "chpw-bounds", "upper-above-lower", float(cfg.n),
            b["upper"], b["lower"], b["upper"] / b["lower"], b["lower"],
            b["upper"] - b["lower"], 0.0, 0.0,
            bool(b["upper"] >= b["lower"]),
        )
    ]


def run_suite(cfg: RunConfig, out_dir: Optional[str] = None) -> SuiteResult:
    """Execute the configured suite and write CSV/JSON/summary artifacts."""
    start = time.perf_counter()
    suites = SUITES[:-1] if cfg.suite == "all" else (cfg.suite,)
    checks: list = []
    series: dict = {}
    for s in suites:
        try:
            if s == "identities":
                if cfg.triple is None:
                    raise ConfigError(["suite 'identities' requires a [triple] section"])
                checks.extend(_run_identities(cfg))
            elif s == "flat-hpw":
                checks.extend(_run_flat_hpw(cfg))
            elif s == "flat-hardy":
                rows, ser = _run_flat_hardy(cfg)
                checks.extend(rows)
                series.update(ser)
            elif s == "hyperbolic":
                rows, ser = _run_hyperbolic(cfg)
                checks.extend(rows)
                series.update(ser)
            elif s == "ko-refute":
                rows, ser = _run_ko_refute(cfg)
                checks.extend(rows)
                series.update(ser)
            elif s == "chpw-bounds":
                checks.extend(_run_chpw_bounds(cfg))
        except ConfigError:
            raise
        except Exception as exc:  # record, keep running the rest of the suite
            checks.append(
                CheckRow(s, f"error:{type(exc).__name__}", 0.0, math.nan, math.nan,
                         math.nan, math.nan, math.nan, math.nan, 0.0, False)
            )
    wall = time.perf_counter() - start
    cfg_hash = hashlib.sha256(render_config(cfg).encode()).hexdigest()[:16]
    result = SuiteResult(cfg.suite, checks, wall, cfg_hash, cfg.seed, series)
    target = Path(out_dir or cfg.output_dir)
    target.mkdir(parents=True, exist_ok=True)
    _write_artifacts(result, cfg, target)
    return result


def _write_artifacts(result: SuiteResult, cfg: RunConfig, out: Path) -> None:
    name = result.suite
    header = "suite,name,param,lhs,rhs,ratio,target,slack,err,tolerance,passed"
    lines = [header]
    for c in result.checks:
        lines.append(
            ",".join(
                [
                    c.suite,
                    c.name,
                    _fmt(c.param),
                    _fmt(c.lhs),
                    _fmt(c.rhs),
                    _fmt(c.ratio),
                    _fmt(c.target),
                    _fmt(c.slack),
                    _fmt(c.err),
                    _fmt(c.tolerance),
                    "1" if c.passed else "0",
                ]
            )
        )
    (out / f"{name}.csv").write_text("\n".join(lines) + "\n")
    payload = {
        "suite": result.suite,
        "passed": result.passed,
        "config_hash": result.config_hash,
        "seed": result.seed,
        "checks": [asdict(c) for c in result.checks],
    }
    (out / f"{name}.json").write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    summary = [f"suite: {result.suite}"]
    summary.append(f"config: {result.config_hash}  seed: {result.seed}")
    for c in result.checks:
        summary.append(
            f"[{'PASS' if c.passed else 'FAIL'}] {c.suite}/{c.name} param={c.param:g} "
            f"slack={c.slack:.3e} tolerance={c.tolerance:.3e}"
        )
    summary.append(f"overall: {'PASS' if result.passed else 'FAIL'} ({result.wall_time:.2f}s)")
    (out / "summary.txt").write_text("\n".join(summary) + "\n")
    emit_plot_data(result, out)


def emit_plot_data(result: SuiteResult, out: Path) -> list:
    """Write xy-series CSVs for external plotting; returns the paths written."""
    written = []
    columns = {
        "hardy_quotient_vs_logeps": "log_inv_eps,quotient",
        "phi_vs_alpha": "alpha,phi",
        "volume_ratio_vs_rho": "rho,ratio",
    }
    for trace, xy in result.series.items():
        if not xy:
            print(f"warning: empty series {trace}", file=sys.stderr)
            continue
        path = Path(out) / f"{trace}.csv"
        lines = [columns.get(trace, "x,y")]
        lines += [f"{_fmt(x)},{_fmt(y)}" for x, y in xy]
        path.write_text("\n".join(lines) + "\n")
        written.append(path)
    return written


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(
        prog="sharpineq",
        description="Verify sharp functional inequalities on flat normed space "
        "and the hyperbolic ball.",
    )
    ap.add_argument("--config", type=Path, help="INI config file")
    ap.add_argument("--suite", choices=SUITES, help="override the configured suite")
    ap.add_argument("--out", type=Path, help="output directory")
    ap.add_argument("--seed", type=lambda s: int(s, 0), help="Monte Carlo seed")
    ap.add_argument("--tolerance", type=float, help="quadrature relative tolerance")
    args = ap.parse_args(argv)
    if args.config is not None:
        try:
            cfg = parse_config(args.config.read_text())
        except ConfigError as exc:
            for e in exc.errors:
                print(f"config error: {e}", file=sys.stderr)
            return 2
    else:
        cfg = RunConfig(suite=args.suite or "all")
        if cfg.suite in ("identities", "all"):
            cfg.triple = (3, 3.0, 1.0)
    if args.suite:
        cfg.suite = args.suite
    if args.seed is not None:
        cfg.seed = args.seed
    if args.tolerance is not None:
        if args.tolerance <= 0:
            print("config error: tolerance must be positive", file=sys.stderr)
            return 2
        cfg.tolerance = args.tolerance
    try:
        result = run_suite(cfg, str(args.out) if args.out else None)
    except ConfigError as exc:
        for e in exc.errors:
            print(f"config error: {e}", file=sys.stderr)
        return 2
    out = Path(args.out or cfg.output_dir)
    print((out / "summary.txt").read_text(), end="")
    return 0 if result.passed else 1


if __name__ == "__main__":
    raise SystemExit(main())
