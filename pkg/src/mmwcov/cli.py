"""Command-line runner: association/coverage sweeps, Monte Carlo
simulation, and analytic-vs-simulation validation, all emitting CSV
with a provenance header.

Exit codes: 0 success, 2 configuration error (bad file, bad flag
value, scenario violations), 3 quadrature non-convergence, 4 failed
validation.
"""

from __future__ import annotations

import argparse
import dataclasses
import math
import sys

from . import __version__
from .association import assoc_table
from .coverage import total_coverage
from .model import (LOS, NLOS, STATES, BallSpec, NetworkScenario,
                    ScenarioError, cluster_scale, load_scenario,
                    scenario_digest, validate, with_cluster_scale)
from .montecarlo import estimate
from .quadrature import QuadratureError

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_QUADRATURE = 3
EXIT_VALIDATION = 4


class CliError(Exception):
    """Configuration-level failure; message goes to stderr."""


def _parse_grid(text: str):
    """Grid syntax: 'start:stop:count' (inclusive linspace) or a
    comma-separated list of values."""
    try:
        if ":" in text:
            lo_s, hi_s, n_s = text.split(":")
            lo, hi, n = float(lo_s), float(hi_s), int(n_s)
            if n < 1:
                raise ValueError("count must be >= 1")
            if n == 1:
                return [lo]
            step = (hi - lo) / (n - 1)
            return [lo + i * step for i in range(n)]
        return [float(v) for v in text.split(",") if v.strip() != ""]
    except ValueError as exc:
        raise CliError(f"bad grid {text!r}: {exc}") from exc


_SWEEPABLE = ("cluster", "main_gain_db", "beamwidth_rad")


def _parse_sweep(text: str):
    if "=" not in text:
        raise CliError(f"bad sweep {text!r}: expected param=grid")
    param, grid = text.split("=", 1)
    param = param.strip()
    if param not in _SWEEPABLE and not param.startswith("bias"):
        raise CliError(
            f"unknown sweep parameter {param!r}; expected one of "
            f"{', '.join(_SWEEPABLE)} or bias<j>")
    values = _parse_grid(grid)
    if not values:
        raise CliError(f"bad sweep {text!r}: empty grid")
    if not all(math.isfinite(v) for v in values):
        raise CliError(f"bad sweep {text!r}: non-finite value")
    return param, values


def _apply_sweep(scenario: NetworkScenario, param: str, value: float):
    if param == "cluster":
        return with_cluster_scale(scenario, value)
    if param == "main_gain_db":
        ant = dataclasses.replace(scenario.antenna, main_gain_db=value)
        return dataclasses.replace(scenario, antenna=ant)
    if param == "beamwidth_rad":
        ant = dataclasses.replace(scenario.antenna, beamwidth_rad=value)
        return dataclasses.replace(scenario, antenna=ant)
    if param.startswith("bias"):
        j = int(param[4:])
        if j == 0:
            if scenario.tier0 is None:
                raise CliError("bias0 sweep needs a tier-0 section")
            t0 = dataclasses.replace(scenario.tier0, bias=value)
            return dataclasses.replace(scenario, tier0=t0)
        if not 1 <= j <= scenario.n_tiers:
            raise CliError(f"no tier {j} to sweep bias on")
        tiers = list(scenario.tiers)
        tiers[j - 1] = dataclasses.replace(tiers[j - 1], bias=value)
        return dataclasses.replace(scenario, tiers=tuple(tiers))
    raise CliError(f"unknown sweep parameter {param!r}")


def _load(path: str, ppp_baseline: bool = False) -> NetworkScenario:
    try:
        scenario = load_scenario(path)
    except FileNotFoundError as exc:
        raise CliError(f"scenario file not found: {path}") from exc
    except ScenarioError as exc:
        raise CliError(str(exc)) from exc
    problems = validate(scenario)
    if problems:
        raise CliError("invalid scenario:\n" +
                       "\n".join(f"  {v}" for v in problems))
    if ppp_baseline:
        scenario = dataclasses.replace(scenario, tier0=None)
    return scenario


def _fmt(x) -> str:
    if isinstance(x, float):
        if math.isnan(x):
            return "nan"
        return format(x, ".12g")
    return str(x)


def _write_csv(path: str, meta: list, columns: list, rows: list):
    """CSV with '#'-prefixed provenance lines.  Byte-stable: fixed
    newline, fixed float format, no timestamps."""
    with open(path, "w", newline="\n") as fh:
        for line in meta:
            fh.write(f"# {line}\n")
        fh.write(",".join(columns) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(v) for v in row) + "\n")


def _meta(scenario: NetworkScenario, args, extra=()):
    lines = [f"tool: mmwcov {__version__}",
             f"scenario-sha256: {scenario_digest(scenario)}"]
    if getattr(args, "ppp_baseline", False):
        lines.append("ppp-baseline: true")
    lines.extend(extra)
    return lines


def _corrupt_intercepts(scenario: NetworkScenario, factor: float = 10.0):
    """Scale every LOS intercept; used to prove cmd_validate actually
    detects analytic/simulation divergence."""
    tiers = []
    for t in scenario.tiers:
        b = t.balls
        nb = BallSpec(b.radii, b.los_prob, b.alpha_los, b.alpha_nlos,
                      tuple(k * factor for k in b.kappa_los), b.kappa_nlos)
        tiers.append(dataclasses.replace(t, balls=nb))
    t0 = scenario.tier0
    if t0 is not None:
        t0 = dataclasses.replace(t0, kappa_los=t0.kappa_los * factor)
    return dataclasses.replace(scenario, tiers=tuple(tiers), tier0=t0)


def _assoc_columns(scenario: NetworkScenario):
    js = ([0] if scenario.tier0 is not None else []) + \
        list(range(1, scenario.n_tiers + 1))
    cols = [f"A{j}" for j in js]
    cols += [f"A{j}_{s}" for j in js for s in STATES]
    return js, cols


def cmd_association(args) -> int:
    scenario = _load(args.scenario)
    if args.sweep:
        param, values = _parse_sweep(args.sweep)
    else:
        param, values = "cluster", [cluster_scale(scenario.cluster)]
    js, cols = _assoc_columns(scenario)
    rows = []
    for v in values:
        sc = _apply_sweep(scenario, param, v)
        table = assoc_table(sc, tol=args.tol)
        row = [v]
        row += [table.marginal(j) for j in js]
        row += [table.entries[(j, s)] for j in js for s in STATES]
        row.append(table.normalization_defect)
        rows.append(row)
    _write_csv(args.out, _meta(scenario, args, [f"sweep: {param}"]),
               [param] + cols + ["defect"], rows)
    if args.plot:
        _plot_association(args.out, param, js, rows)
    return EXIT_OK


def cmd_coverage(args) -> int:
    scenario = _load(args.scenario, args.ppp_baseline)
    thresholds = _parse_grid(args.thresholds)
    curve = total_coverage(scenario, thresholds, tol=args.tol,
                           include_snr=args.snr)
    pairs = sorted(curve.contributions)
    cols = ["threshold_db", "coverage"]
    cols += [f"cov{j}_{s}" for j, s in pairs]
    if args.snr:
        cols.append("snr_coverage")
    cols += ["quad_error", "converged"]
    rows = []
    for i, t in enumerate(curve.thresholds_db):
        row = [t, curve.total[i]]
        row += [curve.contributions[p][i] for p in pairs]
        if args.snr:
            row.append(curve.snr_total[i])
        row += [curve.error[i], int(curve.converged[i])]
        rows.append(row)
    _write_csv(args.out, _meta(scenario, args), cols, rows)
    for line in curve.failures:
        print(f"warning: {line}", file=sys.stderr)
    if not curve.converged.any():
        print("error: no threshold converged", file=sys.stderr)
        return EXIT_QUADRATURE
    if args.plot:
        _plot_coverage(args.out, curve, args.snr)
    return EXIT_OK


def cmd_simulate(args) -> int:
    scenario = _load(args.scenario, args.ppp_baseline)
    thresholds = _parse_grid(args.thresholds)
    est = estimate(scenario, thresholds, args.trials, args.seed,
                   workers=args.workers)
    extra = [f"seed: {args.seed}", f"trials: {args.trials}"]
    for (j, s), e in sorted(est.association.items()):
        extra.append(f"association {j} {s}: {_fmt(e.value)} se {_fmt(e.std_error)}")
    extra.append(f"no-service: {_fmt(est.no_service.value)}")
    rows = [[t, c.value, c.std_error, s.value, s.std_error, args.trials]
            for t, c, s in zip(est.thresholds_db, est.coverage,
                               est.snr_coverage)]
    _write_csv(args.out, _meta(scenario, args, extra),
               ["threshold_db", "coverage", "coverage_se",
                "snr_coverage", "snr_coverage_se", "n_trials"], rows)
    return EXIT_OK


def cmd_validate(args) -> int:
    scenario = _load(args.scenario, args.ppp_baseline)
    analytic_side = scenario
    if args.debug_corrupt_kappa:
        analytic_side = _corrupt_intercepts(scenario)
    thresholds = _parse_grid(args.thresholds)
    est = estimate(scenario, thresholds, args.trials, args.seed,
                   workers=args.workers)
    table = assoc_table(analytic_side)
    curve = total_coverage(analytic_side, thresholds)

    lines = []
    failed = []  # (overshoot ratio, name)

    def check(name, diff, allowed):
        ok = diff <= allowed
        lines.append(f"{name}: |diff|={diff:.5f} allowed={allowed:.5f} "
                     f"{'PASS' if ok else 'FAIL'}")
        if not ok:
            failed.append((diff / allowed if allowed > 0 else math.inf, name))

    for key in sorted(table.entries):
        j, s = key
        mc = est.association[key]
        # 3 SE with a tiny absolute floor for exact-zero entries
        allowed = max(3.0 * mc.std_error, 1e-4)
        name = f"association tier {j} {s} (analytic {table.entries[key]:.5f}"\
               f" mc {mc.value:.5f})"
        check(name, abs(table.entries[key] - mc.value), allowed)
    for i, t in enumerate(curve.thresholds_db):
        mc = est.coverage[i]
        allowed = max(args.tol, 3.0 * mc.std_error)
        name = f"coverage T={t:g} dB (analytic {curve.total[i]:.5f}"\
               f" mc {mc.value:.5f})"
        diff = abs(curve.total[i] - mc.value)
        if math.isnan(diff):
            diff = math.inf
        check(name, diff, allowed)

    for line in lines:
        print(line)
    if failed:
        failed.sort(reverse=True)
        print(f"FAILED: {len(failed)} of {len(lines)} comparisons; "
              f"worst offender: {failed[0][1]}")
        return EXIT_VALIDATION
    print(f"PASSED: all {len(lines)} comparisons agree")
    return EXIT_OK


def _plot_association(out_csv, param, js, rows):
    try:
        import matplotlib
        matplotlib.use("Agg")
        import matplotlib.pyplot as plt
    except ImportError as exc:
        raise CliError("plotting requires matplotlib") from exc
    xs = [r[0] for r in rows]
    fig, ax = plt.subplots(figsize=(5.5, 4))
    for idx, j in enumerate(js):
        ax.plot(xs, [r[1 + idx] for r in rows], marker="o", label=f"tier {j}")
    ax.set_xlabel(param)
    ax.set_ylabel("association probability")
    ax.legend()
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(out_csv + ".svg")
    plt.close(fig)


def _plot_coverage(out_csv, curve, with_snr):
    try:
        import matplotlib
        matplotlib.use("Agg")
        import matplotlib.pyplot as plt
    except ImportError as exc:
        raise CliError("plotting requires matplotlib") from exc
    fig, ax = plt.subplots(figsize=(5.5, 4))
    ax.plot(curve.thresholds_db, curve.total, marker="o", label="SINR")
    if with_snr and curve.snr_total is not None:
        ax.plot(curve.thresholds_db, curve.snr_total, marker="s",
                linestyle="--", label="SNR")
    ax.set_xlabel("threshold (dB)")
    ax.set_ylabel("coverage probability")
    ax.legend()
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(out_csv + ".svg")
    plt.close(fig)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mmwcov",
        description="Coverage and association analysis for clustered-user "
                    "multi-tier mmWave networks")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, thresholds=False, mc=False):
        p.add_argument("--scenario", required=True, help="scenario TOML file")
        p.add_argument("--tol", type=float,
                       default=(0.015 if p.prog.endswith("validate") else 1e-5),
                       help="quadrature tolerance (validate: agreement tolerance)")
        if thresholds:
            p.add_argument("--thresholds", default="-10:10:5",
                           help="dB grid: start:stop:count or v1,v2,...")
        if mc:
            p.add_argument("--trials", type=int, default=100000)
            p.add_argument("--seed", type=int, default=1)
            p.add_argument("--workers", type=int, default=1)
            p.add_argument("--ppp-baseline", action="store_true",
                           help="drop tier 0 (unclustered baseline)")

    p = sub.add_parser("association", help="association probability table")
    common(p)
    p.add_argument("--sweep", help="param=grid, e.g. cluster=1:40:14")
    p.add_argument("--out", required=True)
    p.add_argument("--plot", action="store_true")
    p.set_defaults(func=cmd_association)

    p = sub.add_parser("coverage", help="analytic coverage curve")
    common(p, thresholds=True)
    p.add_argument("--snr", action="store_true",
                   help="add the interference-free curve")
    p.add_argument("--ppp-baseline", action="store_true")
    p.add_argument("--out", required=True)
    p.add_argument("--plot", action="store_true")
    p.set_defaults(func=cmd_coverage)

    p = sub.add_parser("simulate", help="Monte Carlo estimate")
    common(p, thresholds=True, mc=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("validate", help="analytic vs Monte Carlo agreement")
    common(p, thresholds=True, mc=True)
    p.add_argument("--debug-corrupt-kappa", action="store_true",
                   help=argparse.SUPPRESS)
    p.set_defaults(func=cmd_validate)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except QuadratureError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_QUADRATURE


if __name__ == "__main__":
    sys.exit(main())
