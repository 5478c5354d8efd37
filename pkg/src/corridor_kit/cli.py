"""Command-line entry point: reproducible runs and analysis over stored results.

Exit codes: 0 success, 1 user error (bad paths, bad flags, invalid model),
2 internal error.  All configuration lives in flags or a manifest file; no
environment variables are consulted.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .analysis import intervals_from_records, report, sensitivity, subsidy
from .fixture import fixture_document
from .network import ValidationError, build_network
from .reduction import reduce_document
from .runner import ResultsStore, RunManifest, run_matrix
from .scenarios import ConfigurationError, enumerate_scenarios, load_categories


class UserError(Exception):
    pass


def _load_model(path: str) -> dict:
    if path == "fixture":
        return fixture_document()
    p = Path(path)
    if not p.exists():
        raise UserError(f"model file not found: {path}")
    try:
        return json.loads(p.read_text())
    except json.JSONDecodeError as exc:
        raise UserError(f"model file is not valid JSON: {exc}") from exc


def _parse_horizons(spec: str) -> list[int]:
    try:
        if ":" in spec:
            start, stop, step = (int(tok) for tok in spec.split(":"))
            return list(range(start, stop + 1, step))
        return [int(tok) for tok in spec.split(",")]
    except ValueError as exc:
        raise UserError(f"cannot parse horizons {spec!r} (want START:STOP:STEP or a comma list)") from exc


def _parse_floats(spec: str) -> list[float]:
    try:
        return [float(tok) for tok in spec.split(",") if tok]
    except ValueError as exc:
        raise UserError(f"cannot parse float list {spec!r}") from exc


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="corridor-kit",
        description="Near-optimal pathway exploration for capacity-expansion energy models.",
    )
    parser.add_argument("--version", action="version", version=f"corridor-kit {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="run the scenario matrix and persist a results store")
    p.add_argument("--model", help="model JSON path, or 'fixture' for the bundled system")
    p.add_argument("--scenarios", help="scenarios JSON path (default: bundled definitions)")
    p.add_argument("--epsilon", default="0.02,0.05,0.10", help="comma list of slack levels")
    p.add_argument("--horizons", default="2030:2050:5", help="START:STOP:STEP or comma list")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--segments", type=int, help="segment model profiles before running")
    p.add_argument("--flows", action="store_true", help="write per-record flow tables")
    p.add_argument("--manifest", help="re-run from a manifest file (other flags ignored)")
    p.add_argument("--out", help="output directory (required unless --manifest)")

    p = sub.add_parser("validate", help="validate a model document and print counts")
    p.add_argument("--model", required=True)

    p = sub.add_parser("reduce", help="segment a model's profiles to fewer snapshots")
    p.add_argument("--model", required=True)
    p.add_argument("--segments", type=int, required=True)
    p.add_argument("--out", required=True)

    p = sub.add_parser("corridor", help="robust corridor tables from a results store")
    p.add_argument("--store", required=True)
    p.add_argument("--epsilon", type=float, default=0.10)
    p.add_argument("--quantiles", default="0.7,0.8,0.9,1.0")
    p.add_argument("--out", help="write corridor.csv here (default: print)")

    p = sub.add_parser("sensitivity", help="setting-level regression over a results store")
    p.add_argument("--store", required=True)
    p.add_argument("--sense", default="optimal", choices=["optimal", "min", "max"])
    p.add_argument("--epsilon", type=float, help="slack level (required for min/max)")
    p.add_argument("--scenarios", help="scenarios JSON path (default: bundled definitions)")
    p.add_argument("--horizons", help="comma list to pool (default: 2040 and later)")

    p = sub.add_parser("subsidy", help="subsidy rate required to reach a production target")
    p.add_argument("--store", required=True)
    p.add_argument("--target-mt", type=float, required=True)
    p.add_argument("--horizon", type=int, default=2040)
    p.add_argument("--out", help="write subsidy.csv here (default: print)")

    p = sub.add_parser("report", help="emit the full CSV bundle from a results store")
    p.add_argument("--store", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--scenarios", help="scenarios JSON path (default: bundled definitions)")
    return parser


def _cmd_run(args) -> int:
    if args.manifest:
        manifest = RunManifest.from_json(Path(args.manifest).read_text())
        out = manifest.out
        model_path, scenarios_path = manifest.model, manifest.scenarios
        epsilons, horizons = list(manifest.epsilons), list(manifest.horizons)
        jobs, segments, flows = manifest.jobs, manifest.segments, manifest.flows
    else:
        if not args.model or not args.out:
            raise UserError("run needs --model and --out (or --manifest)")
        out = args.out
        model_path = args.model
        scenarios_path = args.scenarios or "<bundled>"
        epsilons = _parse_floats(args.epsilon)
        horizons = _parse_horizons(args.horizons)
        jobs, segments, flows = args.jobs, args.segments, args.flows
        manifest = RunManifest(
            model=model_path,
            scenarios=scenarios_path,
            epsilons=tuple(epsilons),
            horizons=tuple(horizons),
            jobs=jobs,
            out=str(out),
            segments=segments,
            flows=flows,
        )
    document = _load_model(model_path)
    if segments:
        document = reduce_document(document, segments)
    categories = load_categories(None if scenarios_path in ("<bundled>", None) else scenarios_path)
    scenarios = enumerate_scenarios(categories)
    records, _ = run_matrix(
        document,
        scenarios,
        epsilons,
        horizons,
        jobs=jobs,
        out_dir=out,
        flows=flows,
        manifest=manifest,
    )
    failed = sum(1 for r in records if r.status != "optimal")
    print(f"{len(records)} records ({failed} failed) over {len(scenarios)} scenarios -> {out}")
    return 0


def _cmd_validate(args) -> int:
    document = _load_model(args.model)
    network = build_network(document)
    print(
        f"model {network.meta.get('name', '?')!r} at horizon {network.horizon}: "
        f"{len(network.carriers)} carriers, {len(network.buses)} buses, "
        f"{len(network.assets)} assets, {network.snapshots.count} snapshots, "
        f"{len(network.limits)} limits"
    )
    return 0


def _cmd_reduce(args) -> int:
    document = _load_model(args.model)
    reduced = reduce_document(document, args.segments)
    Path(args.out).write_text(json.dumps(reduced, indent=1) + "\n")
    print(f"wrote {args.out} with {args.segments} snapshots")
    return 0


def _cmd_corridor(args) -> int:
    store = ResultsStore(args.store)
    records = store.read_records()
    quantiles = _parse_floats(args.quantiles)
    if args.out:
        report(records, args.out, quantiles=quantiles)
        print(f"wrote corridor tables to {args.out}")
        return 0
    from .analysis import corridor as corridor_op, quantile_corridor, tapering_point

    horizons = sorted({r.horizon for r in records})
    for horizon in horizons:
        ivs, excluded = intervals_from_records(records, horizon, args.epsilon)
        if not ivs:
            print(f"{horizon}: no usable scenario intervals (excluded {excluded})")
            continue
        plain = [si.interval for si in ivs]
        full = corridor_op(plain)
        if full is None:
            print(f"{horizon}: empty intersection, tapering point {tapering_point(plain):.3f} Mt", end="")
        else:
            print(f"{horizon}: robust [{full.lo:.3f}, {full.hi:.3f}] Mt", end="")
        for q in quantiles:
            if q >= 1.0:
                continue
            pieces = quantile_corridor(plain, q)
            txt = " u ".join(f"[{p.lo:.3f}, {p.hi:.3f}]" for p in pieces)
            print(f"  q{q:g}: {txt}", end="")
        print(f"  ({len(ivs)} scenarios, {excluded} excluded)")
    return 0


def _cmd_sensitivity(args) -> int:
    store = ResultsStore(args.store)
    records = store.read_records()
    categories = load_categories(args.scenarios)
    horizons = _parse_horizons(args.horizons) if args.horizons else None
    if horizons is None:
        pool = sorted({r.horizon for r in records if r.horizon >= 2040})
        horizons = pool or None
    epsilon = args.epsilon
    if args.sense != "optimal" and epsilon is None:
        raise UserError("min/max sensitivity needs --epsilon")
    res = sensitivity(records, categories, sense=args.sense, epsilon=epsilon, horizons=horizons)
    print(f"sense={args.sense} epsilon={epsilon} n={res.n_points} dropped={res.n_dropped}")
    for name in res.categories:
        print(f"  {name:14s} {res.coefficients[name]:+9.3f} Mt")
    if res.skipped:
        print(f"  (constant categories skipped: {', '.join(res.skipped)})")
    return 0


def _cmd_subsidy(args) -> int:
    store = ResultsStore(args.store)
    records = store.read_records()
    scenarios = sorted({r.scenario_id for r in records})
    eps_values = sorted({r.epsilon for r in records if r.epsilon is not None})
    rows = []
    skipped = 0
    for sid in scenarios:
        opt = [
            r
            for r in records
            if r.scenario_id == sid and r.horizon == args.horizon and r.sense == "optimal"
        ]
        if not opt or opt[0].status != "optimal":
            skipped += 1
            continue
        ladder = [(0.0, opt[0].h2_mt, None)]
        complete = True
        for eps in eps_values:
            hits = [
                r
                for r in records
                if r.scenario_id == sid
                and r.horizon == args.horizon
                and r.sense == "max"
                and r.epsilon == eps
            ]
            if not hits or hits[0].status != "optimal":
                complete = False
                break
            ladder.append((eps, hits[0].h2_mt, hits[0].mu_raw))
        if not complete:
            skipped += 1
            continue
        try:
            est = subsidy(args.target_mt, ladder)
        except ValueError:
            skipped += 1
            continue
        rows.append((sid, est.rate_eur_per_kg, est.volume_eur_per_year))
    if not rows:
        raise UserError("no scenario has a complete maximization ladder at this horizon")
    mean_rate = sum(r[1] for r in rows) / len(rows)
    mean_volume = sum(r[2] for r in rows) / len(rows)
    if args.out:
        import csv as _csv

        with open(args.out, "w", newline="") as fh:
            writer = _csv.writer(fh)
            writer.writerow(["scenario_id", "rate_eur_per_kg", "volume_eur_per_year"])
            for sid, rate, volume in rows:
                writer.writerow([sid, repr(rate), repr(volume)])
            writer.writerow(["MEAN", repr(mean_rate), repr(mean_volume)])
        print(f"wrote {args.out}")
    print(
        f"target {args.target_mt} Mt at {args.horizon}: mean subsidy "
        f"{mean_rate:.3f} EUR/kg, mean volume {mean_volume/1e9:.2f} bn EUR/a "
        f"({len(rows)} scenarios, {skipped} skipped)"
    )
    return 0


def _cmd_report(args) -> int:
    store = ResultsStore(args.store)
    records = store.read_records()
    categories = load_categories(args.scenarios)
    written = report(records, args.out, categories=categories)
    for name, path in sorted(written.items()):
        print(f"{name}: {path}")
    return 0


_COMMANDS = {
    "run": _cmd_run,
    "validate": _cmd_validate,
    "reduce": _cmd_reduce,
    "corridor": _cmd_corridor,
    "sensitivity": _cmd_sensitivity,
    "subsidy": _cmd_subsidy,
    "report": _cmd_report,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return _COMMANDS[args.command](args)
    except (UserError, ValidationError, ConfigurationError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except Exception:
        import traceback

        traceback.print_exc()
        return 2


if __name__ == "__main__":
    sys.exit(main())
