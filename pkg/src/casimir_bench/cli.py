"""Command-line front end.

Exit codes: 0 success; 1 reference-table mismatch (``table1``); 2 bad
configuration, arguments or corrupted reference data; 3 I/O failure while
writing results.
"""

from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from .config import config_hash, load_scenario
from .design_bench import (
    MAX_GRID_POINTS,
    SWEEP_AXES,
    ConfigError,
    GoldenDataError,
    check_constraints,
    evaluate_scenario,
    load_golden,
    reproduce_table1,
    scenario_ensemble,
    sweep,
)
from .discrimination import MC_MIN_TRIALS, RULES, borderline_scan, deterministic_discrimination, mc_discrimination
from .serialize import RunManifest, csv_text, dumps_json, write_outputs
from .superradiance import pulse_shape

EXIT_OK, EXIT_GOLDEN, EXIT_CONFIG, EXIT_IO = 0, 1, 2, 3

TABLE_FIELDS = ["quantity", "label", "species", "unit", "model", "reference", "rel_error", "tolerance", "derived", "pass"]
HIST_BINS = 200


def _err(msg: str) -> None:
    print(f"error: {msg}", file=sys.stderr)


# axis specs ----------------------------------------------------------------


def _parse_one_axis(item: str) -> tuple[str, str, tuple[float, ...], int]:
    if "=" not in item:
        raise ConfigError("axes", f"expected name=spec, got {item!r}")
    name, spec = (p.strip() for p in item.split("=", 1))
    if name not in SWEEP_AXES:
        raise ConfigError(name, f"unknown sweep parameter; choose from {', '.join(SWEEP_AXES)}")
    try:
        if spec.startswith(("lin:", "log:")):
            kind, lo, hi, n = spec.split(":")
            count = int(float(n))
            if count < 1:
                raise ValueError
            lo_f, hi_f = float(lo), float(hi)
            if kind == "log" and not (lo_f > 0 and hi_f > 0):
                raise ValueError
            return name, kind, (lo_f, hi_f), count
        values = tuple(float(v) for v in spec.split(",") if v.strip())
        if not values:
            raise ValueError
        return name, "list", values, len(values)
    except ValueError:
        raise ConfigError(name, f"bad axis spec {spec!r}; use lin:LO:HI:N, log:LO:HI:N or V1,V2,...") from None


def parse_axes(specs: Sequence[str]) -> list[tuple[str, np.ndarray]]:
    """Parse ``name=lin:lo:hi:n``, ``name=log:lo:hi:n`` or ``name=v1,v2``.

    Several axes may be separated by ``;`` or given as repeated flags. The
    grid size is checked before any grid is allocated.
    """
    items = [part for spec in specs for part in spec.split(";") if part.strip()]
    if not items:
        raise ConfigError("axes", "no axes given")
    parsed = [_parse_one_axis(item) for item in items]
    total = math.prod(p[3] for p in parsed)
    if total > MAX_GRID_POINTS:
        raise ConfigError("axes", f"{total} grid points exceed the limit of {MAX_GRID_POINTS}")
    axes = []
    for name, kind, args, count in parsed:
        if kind == "lin":
            grid = np.linspace(args[0], args[1], count)
        elif kind == "log":
            grid = np.logspace(math.log10(args[0]), math.log10(args[1]), count)
        else:
            grid = np.asarray(args, dtype=float)
        axes.append((name, grid))
    return axes


# commands ------------------------------------------------------------------


def _table1_payload(fmt: str):
    result = reproduce_table1(load_golden())
    records = result.records()
    if fmt == "csv":
        text = csv_text(TABLE_FIELDS, ([r[k] for k in TABLE_FIELDS] for r in records))
    elif fmt == "json":
        text = dumps_json({"entries": records, "all_pass": result.all_passed})
    else:
        text = result.format_text() + "\n"
    return result, text


def cmd_table1(args) -> int:
    try:
        result, text = _table1_payload(args.format)
    except GoldenDataError as exc:
        _err(str(exc))
        return EXIT_CONFIG
    sys.stdout.write(text)
    if args.out:
        ext = {"csv": "csv", "json": "json"}.get(args.format, "txt")
        try:
            write_outputs(args.out, {f"table1.{ext}": text}, RunManifest("table1", None, None))
        except OSError as exc:
            _err(f"cannot write results: {exc}")
            return EXIT_IO
    return EXIT_OK if result.all_passed else EXIT_GOLDEN


def cmd_simulate(args) -> int:
    scenario, config = load_scenario(args.config)
    record = evaluate_scenario(scenario)
    constraints = check_constraints(scenario, record)
    ens = scenario_ensemble(scenario, record)
    seeded = ens.with_seed(ens.n_seed + float(record["n_cas_max"].value))
    span = 3 * float(record["t_d0"].value) or 3 * ens.t_sr
    times = np.linspace(0.0, span, args.points)
    trace = pulse_shape(seeded, times)
    pulse_csv = csv_text(
        ["time_s", "emission_rate_per_s", "power_w", "excited"],
        zip(trace.times, trace.emission_rate, trace.power, trace.excited),
    )
    record_json = record.to_dict()
    record_json["scenario"] = {"species": scenario.species.name, **scenario.params()}
    record_json["pulse"] = {
        "t_peak": trace.t_peak,
        "total_photons": trace.total_photons,
        "peak_power_model": trace.peak_power,
        "truncated": trace.truncated,
    }
    record_json["manifest"] = "manifest.json"
    constraints_json = {**constraints.to_dict(), "manifest": "manifest.json"}
    files = {
        "record.json": dumps_json(record_json),
        "constraints.json": dumps_json(constraints_json),
        "pulse.csv": pulse_csv,
    }
    write_outputs(args.out, files, RunManifest("simulate", config_hash(config), None))
    print(f"wrote {', '.join(files)} and manifest.json to {args.out}")
    print(f"constraints: {'all pass' if constraints.passed else 'some fail'}")
    return EXIT_OK


def cmd_mc(args) -> int:
    if args.trials < MC_MIN_TRIALS:
        raise ConfigError("trials", f"must be >= {MC_MIN_TRIALS}, got {args.trials}")
    scenario, config = load_scenario(args.config)
    record = evaluate_scenario(scenario)
    ens = scenario_ensemble(scenario, record)
    report = mc_discrimination(
        ens,
        float(record["n_cas_max"].value),
        args.trials,
        args.seed,
        window=float(record["window"].value),
        workers=args.workers,
    )
    cas, bg = report.seeded_delays.samples, report.background_delays.samples
    lo, hi = float(min(cas.min(), bg.min())), float(max(cas.max(), bg.max()))
    if hi <= lo:
        hi = lo + 1e-12
    edges = np.linspace(lo, hi, HIST_BINS + 1)
    c_cas, _ = np.histogram(cas, edges)
    c_bg, _ = np.histogram(bg, edges)
    hist = csv_text(
        ["bin_left_s", "bin_right_s", "seeded_count", "background_count"],
        zip(edges[:-1], edges[1:], c_cas, c_bg),
    )
    files = {
        "delay_histogram.csv": hist,
        "discrimination.json": dumps_json({**report.to_dict(), "manifest": "manifest.json"}),
    }
    write_outputs(args.out, files, RunManifest("mc", config_hash(config), args.seed))
    print(f"overlap {report.mc_overlap:.4g}: {'discriminable' if report.discriminable else 'not discriminable'}")
    return EXIT_OK


def cmd_sweep(args) -> int:
    axes = parse_axes(args.axes)
    scenario, config = load_scenario(args.config)
    result = sweep(scenario, axes)
    names = list(result.columns)
    cols = [result.columns[n] for n in names]
    text = csv_text(names, zip(*cols))
    manifest = RunManifest("sweep", config_hash(config), None)
    write_outputs(args.out, {"sweep.csv": text}, manifest)
    print(f"{len(result)} records written to {Path(args.out) / 'sweep.csv'}")
    return EXIT_OK


def cmd_discriminate(args) -> int:
    scenario, config = load_scenario(args.config)
    record = evaluate_scenario(scenario)
    ens = scenario_ensemble(scenario, record)
    n_cas = float(record["n_cas_max"].value)
    report = deterministic_discrimination(ens, n_cas, scenario.timing_error, rule=args.rule)
    lo, hi, n = args.qe_grid
    scan = borderline_scan(ens, scenario.timing_error, np.linspace(lo, hi, int(n)), n0=scenario.n0, rule=args.rule)
    if args.format == "csv":
        text = csv_text(
            ["qe", "n_casimir", "relative_shift", "threshold", "discriminable"],
            zip(scan.qe, scan.n_casimir, scan.relative_shift, scan.threshold, scan.discriminable),
        )
    else:
        text = dumps_json(
            {
                "report": report.to_dict(),
                "scan": {
                    "rule": scan.rule,
                    "timing_error": scan.timing_error,
                    "crossing_qe": scan.crossing,
                    "rows": [
                        {"qe": q, "relative_shift": s, "discriminable": d} for q, s, d in scan.rows()
                    ],
                },
            }
        )
    sys.stdout.write(text)
    if args.out:
        name = "discrimination.csv" if args.format == "csv" else "discrimination.json"
        write_outputs(args.out, {name: text}, RunManifest("discriminate", config_hash(config), None))
    return EXIT_OK


def _qe_grid(text: str) -> tuple[float, float, float]:
    try:
        lo, hi, n = (float(x) for x in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError("expected LO:HI:N") from None
    if n < 2 or lo < 0 or hi <= lo:
        raise argparse.ArgumentTypeError("need 0 <= LO < HI and N >= 2")
    return lo, hi, n


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="casimir-bench",
        description="Dynamical-Casimir photon generation, superradiant detection and background discrimination.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("table1", help="recompute the reference parameter table and compare")
    p.add_argument("--format", choices=["text", "csv", "json"], default="text")
    p.add_argument("--out", help="also write the table and a manifest here")
    p.set_defaults(func=cmd_table1)

    p = sub.add_parser("simulate", help="evaluate one scenario: record, constraints, pulse trace")
    p.add_argument("--config", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--points", type=int, default=1000, help="pulse grid points (default 1000)")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("mc", help="Monte Carlo delay statistics and discrimination")
    p.add_argument("--config", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--trials", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_mc)

    p = sub.add_parser("sweep", help="evaluate a scenario over parameter grids")
    p.add_argument("--config", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--axes", action="append", required=True, help="e.g. 'n_atoms=log:1e5:1e8:31;qe=lin:0:2:9'")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("discriminate", help="deterministic discrimination and Q*eps borderline scan")
    p.add_argument("--config", required=True)
    p.add_argument("--format", choices=["csv", "json"], default="json")
    p.add_argument("--out")
    p.add_argument("--rule", choices=RULES, default="quadrature")
    p.add_argument("--qe-grid", type=_qe_grid, default=(0.0, 2.0, 9), help="LO:HI:N (default 0:2:9)")
    p.set_defaults(func=cmd_discriminate)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        _err(str(exc))
        return EXIT_CONFIG
    except OSError as exc:
        _err(f"I/O failure: {exc}")
        return EXIT_IO
    except (ValueError, ArithmeticError) as exc:
        _err(f"internal error: {exc}")
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
