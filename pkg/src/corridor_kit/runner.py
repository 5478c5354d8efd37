"""Scenario-matrix runner: optimal plus extremal pathways for every scenario.

Scenarios are independent and run in a bounded worker pool; a single
collector in the parent process orders and writes all records, so stores are
byte-identical regardless of the worker count.  Failed solves are first-class
records, and a crashed worker poisons only its own scenario.
"""

from __future__ import annotations

import csv
import json
import logging
import traceback
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path

logger = logging.getLogger(__name__)

from . import __version__
from .mga import SlackSpec, run_extremal_pathway
from .pathway import HorizonStep, PathwayRecord, run_optimal_pathway
from .scenarios import Scenario
from .simplex import SolverOptions

RECORD_COLUMNS = ["scenario_id", "horizon", "sense", "epsilon", "status", "cost_eur", "h2_mt", "mu_raw"]


@dataclass(frozen=True)
class RunManifest:
    model: str
    scenarios: str
    epsilons: tuple
    horizons: tuple
    jobs: int
    out: str
    tool_version: str = __version__
    segments: int | None = None
    flows: bool = False
    deterministic: bool = True

    def to_json(self) -> str:
        data = asdict(self)
        data["epsilons"] = list(self.epsilons)
        data["horizons"] = list(self.horizons)
        return json.dumps(data, indent=1, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "RunManifest":
        data = json.loads(text)
        data["epsilons"] = tuple(data["epsilons"])
        data["horizons"] = tuple(data["horizons"])
        data.pop("tool_version", None)
        return cls(**data)


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


class ResultsStore:
    """Directory holding records.csv, the manifest and optional flow tables."""

    def __init__(self, path):
        self.path = Path(path)

    def write_manifest(self, manifest: RunManifest) -> None:
        self.path.mkdir(parents=True, exist_ok=True)
        (self.path / "manifest.json").write_text(manifest.to_json() + "\n")

    def write_records(self, records: list[PathwayRecord]) -> None:
        self.path.mkdir(parents=True, exist_ok=True)
        ordered = sorted(
            records,
            key=lambda r: (r.scenario_id, r.horizon, r.sense, -1.0 if r.epsilon is None else r.epsilon),
        )
        with open(self.path / "records.csv", "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(RECORD_COLUMNS)
            for rec in ordered:
                writer.writerow([_fmt(getattr(rec, col)) for col in RECORD_COLUMNS])

    def write_flows(self, key: str, flow_rows) -> None:
        flows_dir = self.path / "flows"
        flows_dir.mkdir(parents=True, exist_ok=True)
        with open(flows_dir / f"{key}.csv", "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["carrier", "bus", "asset_id", "instance_id", "annual_mwh"])
            for row in flow_rows:
                writer.writerow([_fmt(v) for v in row])

    def read_records(self) -> list[PathwayRecord]:
        out = []
        with open(self.path / "records.csv", newline="") as fh:
            for row in csv.DictReader(fh):
                out.append(
                    PathwayRecord(
                        scenario_id=row["scenario_id"],
                        horizon=int(row["horizon"]),
                        sense=row["sense"],
                        epsilon=float(row["epsilon"]) if row["epsilon"] else None,
                        status=row["status"],
                        cost_eur=float(row["cost_eur"]) if row["cost_eur"] else None,
                        h2_mt=float(row["h2_mt"]) if row["h2_mt"] else None,
                        mu_raw=float(row["mu_raw"]) if row["mu_raw"] else None,
                    )
                )
        return out

    def read_manifest(self) -> RunManifest:
        return RunManifest.from_json((self.path / "manifest.json").read_text())


@dataclass
class ScenarioOutcome:
    scenario_id: str
    records: list = field(default_factory=list)
    flows: dict = field(default_factory=dict)  # key -> flow rows
    error: str | None = None


def _flow_key(record: PathwayRecord) -> str:
    eps = "" if record.epsilon is None else f"{record.epsilon:g}"
    return f"{record.scenario_id}__{record.horizon}__{record.sense}__{eps}"


def run_scenario(
    document: dict,
    scenario: Scenario,
    epsilons,
    horizons,
    flows: bool = False,
    solver_options: SolverOptions | None = None,
    aggregate: bool = True,
) -> ScenarioOutcome:
    """Optimal pathway, then min and max pathways per slack level."""
    outcome = ScenarioOutcome(scenario_id=scenario.id)

    def collect(steps: list[HorizonStep]):
        for step in steps:
            outcome.records.append(step.record)
            if flows and step.dispatch is not None:
                outcome.flows[_flow_key(step.record)] = step.dispatch.flow_rows

    optimal = run_optimal_pathway(
        document, list(horizons), scenario, solver_options=solver_options, aggregate=aggregate
    )
    collect(optimal)
    optimal_records = [s.record for s in optimal]
    covered = [h for h in horizons if any(r.horizon == h and r.status == "optimal" for r in optimal_records)]
    if not covered:
        return outcome
    for epsilon in sorted(epsilons):
        for sense in ("min", "max"):
            steps = run_extremal_pathway(
                document,
                covered,
                scenario,
                SlackSpec(epsilon, sense),
                optimal_records,
                solver_options=solver_options,
                aggregate=aggregate,
            )
            collect(steps)
    _log_nesting_violations(outcome.records, covered)
    return outcome


def _log_nesting_violations(records: list[PathwayRecord], horizons) -> None:
    """Warn when ranges fail to widen with slack beyond the first horizon.

    Guaranteed only at the first horizon (identical entering fleet); later
    horizons follow different lineages per slack level, so a violation there
    is an expected possibility worth surfacing, not an error.
    """
    for horizon in list(horizons)[1:]:
        for sense, widening in (("max", 1.0), ("min", -1.0)):
            series = sorted(
                (
                    (r.epsilon, r.h2_mt)
                    for r in records
                    if r.horizon == horizon and r.sense == sense and r.status == "optimal"
                ),
            )
            for (e1, h1), (e2, h2) in zip(series, series[1:]):
                if widening * (h2 - h1) < -1e-6:
                    logger.warning(
                        "%s range narrowed with slack at %s: h(%.3g)=%.4f vs h(%.3g)=%.4f "
                        "(different lineages; expected possibility)",
                        sense,
                        horizon,
                        e1,
                        h1,
                        e2,
                        h2,
                    )


def _worker(args) -> ScenarioOutcome:
    document, scenario, epsilons, horizons, flows, options, aggregate = args
    try:
        return run_scenario(document, scenario, epsilons, horizons, flows, options, aggregate)
    except Exception:  # crash isolates to this scenario
        return ScenarioOutcome(scenario_id=scenario.id, error=traceback.format_exc())


def run_matrix(
    document: dict,
    scenarios: list[Scenario],
    epsilons,
    horizons,
    jobs: int = 1,
    out_dir=None,
    flows: bool = False,
    solver_options: SolverOptions | None = None,
    aggregate: bool = True,
    manifest: RunManifest | None = None,
) -> tuple[list[PathwayRecord], ResultsStore | None]:
    """Run the whole scenario matrix; records are canonically ordered.

    At most ``len(scenarios) * len(horizons) * (1 + 2 * len(epsilons))``
    records are produced (aborted chains yield fewer); every failure is
    recorded with its status rather than dropped.
    """
    store = None
    if out_dir is not None:
        store = ResultsStore(out_dir)
        if manifest is None:
            manifest = RunManifest(
                model="<in-memory>",
                scenarios="<in-memory>",
                epsilons=tuple(sorted(epsilons)),
                horizons=tuple(horizons),
                jobs=jobs,
                out=str(out_dir),
                flows=flows,
            )
        store.write_manifest(manifest)

    tasks = [
        (document, scenario, tuple(sorted(epsilons)), tuple(horizons), flows, solver_options, aggregate)
        for scenario in sorted(scenarios, key=lambda s: s.id)
    ]
    outcomes: list[ScenarioOutcome]
    if jobs <= 1 or len(tasks) <= 1:
        outcomes = [_worker(task) for task in tasks]
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            outcomes = list(pool.map(_worker, tasks))

    records: list[PathwayRecord] = []
    for outcome in outcomes:
        if outcome.error is not None:
            records.append(
                PathwayRecord(
                    scenario_id=outcome.scenario_id,
                    horizon=min(horizons),
                    sense="optimal",
                    epsilon=None,
                    status="worker_error",
                )
            )
            continue
        records.extend(outcome.records)
    records.sort(
        key=lambda r: (r.scenario_id, r.horizon, r.sense, -1.0 if r.epsilon is None else r.epsilon)
    )
    if store is not None:
        store.write_records(records)
        for outcome in outcomes:
            for key in sorted(outcome.flows):
                store.write_flows(key, outcome.flows[key])
    return records, store
