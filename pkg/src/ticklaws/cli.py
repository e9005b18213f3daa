"""Command-line entry point.

Subcommands: ingest, analyze, fit, table, grw-gen, crosscheck, coastline.
``analyze`` runs the full pipeline per instrument and drops law samples,
fit tables, coastline and cross-check reports plus a manifest into the
output directory.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import consistency, events, fitting, grw, laws, report
from .laws import LawId
from .tickdata import PriceDefinition, TickDataError, ingest_ticks, write_ticks_csv

DEFAULT_COASTLINE_THRESHOLDS = (1e-4, 1e-3, 1e-2, 5e-2)
CROSSCHECK_DISSECT_THRESHOLD = 1e-3


def _parse_spread(text: str):
    if text == "none":
        return 0.0
    if text == "observed":
        return "observed"
    if text.startswith("const:"):
        value = float(text.split(":", 1)[1])
        if value < 0:
            raise argparse.ArgumentTypeError("spread fraction must be non-negative")
        return value
    raise argparse.ArgumentTypeError(f"expected none, const:<frac> or observed, got {text!r}")


def _parse_laws(text: str):
    if text == "all":
        return list(LawId)
    if text == "coastline":
        return []
    ids = []
    for name in text.split(","):
        name = name.strip()
        try:
            ids.append(LawId(name))
        except ValueError:
            valid = ", ".join(l.value for l in LawId)
            raise argparse.ArgumentTypeError(f"unknown law {name!r}; valid: all, coastline, {valid}")
    return ids


def _add_common_input_args(p):
    p.add_argument("--input", action="append", default=[], help="tick CSV path (repeatable)")
    p.add_argument("--instrument", action="append", default=[],
                   help="instrument name per --input (default: file stem)")
    p.add_argument("--grw", action="store_true", help="analyse the Gaussian-random-walk benchmark")
    p.add_argument("--seed", type=int, default=0, help="benchmark RNG seed")
    p.add_argument("--grw-ticks", type=int, default=1_000_000, help="benchmark tick count")
    p.add_argument("--grw-spread", type=float, default=0.0, help="benchmark constant spread fraction")
    p.add_argument("--price-def", choices=["mid", "logmid"], default="mid")
    p.add_argument("--clamp-time", action="store_true",
                   help="clamp non-monotonic timestamps instead of rejecting")


def _load_instruments(args):
    """Yield (name, series, report-or-None) for every requested instrument."""
    price_def = PriceDefinition(args.price_def)
    names = list(args.instrument)
    items = []
    for i, path in enumerate(args.input):
        name = names[i] if i < len(names) else Path(path).stem
        series, rep = ingest_ticks(path, instrument=name, price_def=price_def,
                                   clamp_time=args.clamp_time)
        items.append((name, series, rep))
    if args.grw:
        config = grw.GrwConfig(n_ticks=args.grw_ticks, seed=args.seed, spread=args.grw_spread)
        items.append(("GRW", grw.generate(config), None))
    if not items:
        raise TickDataError("no input: pass --input and/or --grw")
    return items


def _fit_rows(name, all_samples, fit_from):
    rows, fits, failures = [], {}, []
    for law, samples in all_samples.items():
        lo = fit_from
        if lo is None and law is LawId.CUM_TM_COST:
            lo = laws.COST_LAW_FIT_FROM_PCT
        try:
            fit, row = fitting.fit_report(name, law, samples, fit_from=lo)
        except fitting.FitError as exc:
            failures.append(f"{name}/{law.value}: {exc}")
            continue
        fits[law] = fit
        rows.append(row)
    return rows, fits, failures


def _crosschecks(series, fits, tick_threshold):
    checks = []
    if LawId.TIME_OF_MOVE in fits and LawId.MOVE_COUNT in fits:
        checks += consistency.check_count_time(fits[LawId.TIME_OF_MOVE],
                                               fits[LawId.MOVE_COUNT], "x")
    if LawId.TIME_OF_DC in fits and LawId.DC_COUNT in fits:
        checks += consistency.check_count_time(fits[LawId.TIME_OF_DC],
                                               fits[LawId.DC_COUNT], "dc")
    if LawId.TIME_OF_MOVE in fits and LawId.MEAN_RETURN_P1 in fits:
        checks += consistency.check_inverse(fits[LawId.TIME_OF_MOVE],
                                            fits[LawId.MEAN_RETURN_P1])
    if LawId.MEAN_RETURN_P1 in fits and LawId.TICK_COUNT in fits:
        derived = consistency.derive_tick_time_law(fits[LawId.MEAN_RETURN_P1],
                                                   fits[LawId.TICK_COUNT])
        if LawId.TIME_OF_MOVE in fits:
            checks.append(consistency.CrossCheck.build(
                "tick-interval-vs-waiting", derived.C,
                fits[LawId.TIME_OF_MOVE].value_at(tick_threshold * 100.0),
                consistency.SCALE_TOL))
    diss = events.directional_change_dissect(series, CROSSCHECK_DISSECT_THRESHOLD,
                                             tick_threshold)
    checks += consistency.check_dissection(diss)
    return checks


def cmd_analyze(args) -> int:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    selected = _parse_laws(args.laws)
    coastline_only = args.laws == "coastline"
    thresholds = ([float(t) for t in args.thresholds.split(",")]
                  if args.thresholds else list(DEFAULT_COASTLINE_THRESHOLDS))
    failures = []
    instruments = []

    for name, series, ingest_rep in _load_instruments(args):
        instruments.append(name)
        if ingest_rep is not None:
            (out / f"{name}_ingest.json").write_text(ingest_rep.to_json() + "\n")

        want_threshold = coastline_only or any(l in laws.THRESHOLD_LAWS for l in selected)
        want_time = any(l in laws.TIME_LAWS for l in selected)
        all_samples = {}
        threshold_samples = None
        if want_threshold:
            threshold_samples = laws.threshold_law_samples(
                series, tick_threshold=args.tick_threshold, spread=args.spread,
                jobs=args.jobs)
            all_samples.update({l: s for l, s in threshold_samples.items()
                                if coastline_only or l in selected})
        if want_time:
            time_samples = laws.time_law_samples(series)
            all_samples.update({l: s for l, s in time_samples.items() if l in selected})

        if all_samples:
            report.write_samples_csv(out / f"{name}_samples.csv", all_samples)

        if not coastline_only and all_samples:
            rows, fits, fit_failures = _fit_rows(name, all_samples, args.fit_from)
            failures.extend(fit_failures)
            report.write_fit_rows_csv(out / f"{name}_fits.csv", rows)
            try:
                checks = _crosschecks(series, fits, args.tick_threshold)
                report.write_crosscheck_csv(out / f"{name}_crosscheck.csv", checks)
            except (fitting.FitError, events.EventError) as exc:
                failures.append(f"{name}/crosscheck: {exc}")

        if coastline_only or selected:
            try:
                rows = laws.coastline_report(series, thresholds,
                                             tick_threshold=args.tick_threshold,
                                             spread=args.spread,
                                             samples=threshold_samples)
                report.write_coastline_csv(out / f"{name}_coastline.csv", rows)
            except laws.LawError as exc:
                failures.append(f"{name}/coastline: {exc}")

        if args.dump_events is not None:
            diss = events.directional_change_dissect(series, args.dump_events,
                                                     args.tick_threshold)
            report.write_event_dump_csv(out / f"{name}_events.csv", diss)

    config = {
        "instruments": instruments,
        "laws": args.laws,
        "price_def": args.price_def,
        "tick_threshold": args.tick_threshold,
        "spread": str(args.spread),
        "fit_from": args.fit_from,
        "seed": args.seed,
        "prng": grw.PRNG_ALGORITHM if args.grw else None,
        "grw_ticks": args.grw_ticks if args.grw else None,
        "coastline_thresholds": thresholds,
        "threshold_grid_sha256": report.grid_hash(laws.threshold_grid()),
        "time_grid_sha256": report.grid_hash(laws.time_grid()),
    }
    report.write_manifest(out / "manifest.json", config, partial=bool(failures))
    for failure in failures:
        print(f"warning: {failure}", file=sys.stderr)
    return 1 if failures else 0


def cmd_ingest(args) -> int:
    price_def = PriceDefinition(args.price_def)
    for i, path in enumerate(args.input):
        name = args.instrument[i] if i < len(args.instrument) else Path(path).stem
        series, rep = ingest_ticks(path, instrument=name, price_def=price_def,
                                   clamp_time=args.clamp_time)
        if args.report:
            Path(args.report).write_text(rep.to_json() + "\n")
        else:
            print(rep.to_json(), file=sys.stderr)
        if args.out:
            write_ticks_csv(args.out, series)
    return 0


def cmd_fit(args) -> int:
    samples = report.read_samples_csv(args.samples)
    try:
        law = LawId(args.law)
    except ValueError:
        print(f"error: unknown law {args.law!r}", file=sys.stderr)
        return 2
    if law not in samples:
        print(f"error: law {law.value} not present in {args.samples}", file=sys.stderr)
        return 1
    fit_from = args.fit_from
    if fit_from is None and law is LawId.CUM_TM_COST:
        fit_from = laws.COST_LAW_FIT_FROM_PCT
    _, row = fitting.fit_report(args.instrument, law, samples[law], fit_from=fit_from)
    if args.format == "json":
        print(json.dumps(row, sort_keys=True))
    else:
        print(",".join(str(row[k]) for k in report.FIT_COLUMNS))
    return 0


def cmd_table(args) -> int:
    if args.table not in report.TABLE_LAWS:
        print(f"error: unknown table id {args.table!r} (A1..A22)", file=sys.stderr)
        return 1
    law, _ = report.TABLE_LAWS[args.table]
    rows = []
    for path in sorted(Path(args.bundle).glob("*_fits.csv")):
        for row in report.read_fit_rows_csv(path):
            if row["law"] == law.value:
                rows.append(row)
    rows.sort(key=lambda r: r["instrument"])
    print(report.format_table(args.table, rows, fmt=args.format), end="")
    return 0


def cmd_grw_gen(args) -> int:
    config = grw.GrwConfig(n_ticks=args.n_ticks, seed=args.seed, spread=args.spread_frac)
    series = grw.generate(config)
    write_ticks_csv(args.out, series)
    print(json.dumps({"n_ticks": args.n_ticks, "seed": args.seed,
                      "prng": grw.PRNG_ALGORITHM, "out": str(args.out)},
                     sort_keys=True), file=sys.stderr)
    return 0


def cmd_crosscheck(args) -> int:
    failures = 0
    for name, series, _ in _load_instruments(args):
        threshold_samples = laws.threshold_law_samples(
            series, tick_threshold=args.tick_threshold, spread=args.spread, jobs=args.jobs)
        time_samples = laws.time_law_samples(series)
        _, fits, _ = _fit_rows(name, {**threshold_samples, **time_samples}, None)
        checks = _crosschecks(series, fits, args.tick_threshold)
        if args.out:
            report.write_crosscheck_csv(Path(args.out), checks)
        else:
            print("check,lhs,rhs,rel_error,tolerance,pass")
            for c in checks:
                print(f"{c.name},{c.lhs!r},{c.rhs!r},{c.rel_error!r},{c.tolerance!r},{c.passed}")
        failures += sum(not c.passed for c in checks)
    return 0 if failures == 0 else 1


def cmd_coastline(args) -> int:
    thresholds = ([float(t) for t in args.thresholds.split(",")]
                  if args.thresholds else list(DEFAULT_COASTLINE_THRESHOLDS))
    for name, series, _ in _load_instruments(args):
        rows = laws.coastline_report(series, thresholds,
                                     tick_threshold=args.tick_threshold,
                                     spread=args.spread, jobs=args.jobs)
        if args.out:
            report.write_coastline_csv(Path(args.out), rows)
        else:
            print("threshold_pct,annual_pct,daily_pct,measured_annual_pct,"
                  "cost_annual_pct,cost_daily_pct,n_segments")
            for r in rows:
                print(f"{r.threshold_pct!r},{r.annual_pct!r},{r.daily_pct!r},"
                      f"{r.measured_annual_pct!r},{r.cost_annual_pct!r},"
                      f"{r.cost_daily_pct!r},{r.n_segments}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ticklaws",
                                     description="Event-based scaling-law analytics for tick data")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="full pipeline: samples, fits, coastline, cross-checks")
    _add_common_input_args(p)
    p.add_argument("--laws", default="all", help="all, coastline, or comma-separated law names")
    p.add_argument("--tick-threshold", type=float, default=events.DEFAULT_TICK_THRESHOLD)
    p.add_argument("--spread", type=_parse_spread, default=events.DEFAULT_TICK_THRESHOLD,
                   help="none, const:<frac> or observed (cost adjustment)")
    p.add_argument("--fit-from", type=float, default=None,
                   help="restrict fits to abscissae >= this value")
    p.add_argument("--thresholds", default=None, help="coastline thresholds, comma-separated fractions")
    p.add_argument("--dump-events", type=float, default=None,
                   help="also dump per-event records at this threshold")
    p.add_argument("--jobs", type=int, default=1, help="threads for the threshold sweep")
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(fn=cmd_analyze)

    p = sub.add_parser("ingest", help="parse and filter a tick file, emit the ingestion report")
    _add_common_input_args(p)
    p.add_argument("--report", default=None, help="write report JSON here instead of stderr")
    p.add_argument("--out", default=None, help="write the filtered series as tick CSV")
    p.set_defaults(fn=cmd_ingest)

    p = sub.add_parser("fit", help="fit one law from a samples CSV")
    p.add_argument("--samples", required=True)
    p.add_argument("--law", required=True)
    p.add_argument("--instrument", default="unknown")
    p.add_argument("--fit-from", type=float, default=None)
    p.add_argument("--format", choices=["csv", "json"], default="json")
    p.set_defaults(fn=cmd_fit)

    p = sub.add_parser("table", help="format one A1..A22 result table from a bundle")
    p.add_argument("--bundle", required=True, help="analyze output directory")
    p.add_argument("--table", required=True, help="table id, A1..A22")
    p.add_argument("--format", choices=["text", "csv", "json"], default="text")
    p.set_defaults(fn=cmd_table)

    p = sub.add_parser("grw-gen", help="generate the benchmark walk as tick CSV")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--n-ticks", type=int, default=1_000_000)
    p.add_argument("--spread-frac", type=float, default=0.0)
    p.add_argument("--out", required=True)
    p.set_defaults(fn=cmd_grw_gen)

    p = sub.add_parser("crosscheck", help="evaluate the cross-law identities")
    _add_common_input_args(p)
    p.add_argument("--tick-threshold", type=float, default=events.DEFAULT_TICK_THRESHOLD)
    p.add_argument("--spread", type=_parse_spread, default=events.DEFAULT_TICK_THRESHOLD)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out", default=None)
    p.set_defaults(fn=cmd_crosscheck)

    p = sub.add_parser("coastline", help="coastline-length table")
    _add_common_input_args(p)
    p.add_argument("--thresholds", default=None)
    p.add_argument("--tick-threshold", type=float, default=events.DEFAULT_TICK_THRESHOLD)
    p.add_argument("--spread", type=_parse_spread, default=events.DEFAULT_TICK_THRESHOLD)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out", default=None)
    p.set_defaults(fn=cmd_coastline)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except (TickDataError, laws.LawError, fitting.FitError, events.EventError,
            OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
