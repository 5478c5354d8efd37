"""Myopic multi-horizon driver: sequential per-horizon optimizations.

Each planning horizon is optimized without foresight of later ones; unexpired
capacity built at earlier horizons is carried forward with parameters frozen
as built, and assets at the end of their lifetime are phased out.
"""

from __future__ import annotations

from dataclasses import dataclass

from .fleet import Fleet, FleetEntry, fleet_from_document
from .network import Network, build_network
from .reduction import aggregate_build_years, disaggregate
from .scenarios import Scenario, apply_scenario
from .simplex import SolverOptions, solve
from .translate import DispatchResult, extract, translate

BUILD_THRESHOLD_MW = 1e-6  # ignore numerically-zero builds when carrying over


@dataclass(frozen=True)
class PathwayRecord:
    """One optimization outcome within a pathway run."""

    scenario_id: str
    horizon: int
    sense: str  # optimal / min / max
    epsilon: float | None
    status: str
    cost_eur: float | None = None
    h2_mt: float | None = None
    mu_raw: float | None = None  # budget-row dual, MWh of target per EUR

    def __post_init__(self):
        if self.sense == "optimal" and self.epsilon is not None:
            raise ValueError("optimal records carry no epsilon")
        if self.status != "optimal" and (
            self.cost_eur is not None or self.h2_mt is not None or self.mu_raw is not None
        ):
            raise ValueError("failed records carry no value fields")


@dataclass
class HorizonStep:
    record: PathwayRecord
    dispatch: DispatchResult | None
    fleet: Fleet  # the fleet entering this horizon (after phase-out)
    network: Network | None = None


def phase_out(fleet: Fleet, horizon: int) -> Fleet:
    """Keep only entries active at the horizon (built and not yet expired)."""
    return fleet.active(horizon)


def carry_over(
    previous: DispatchResult, previous_fleet: Fleet, network: Network, horizon: int
) -> Fleet:
    """Append capacity built in the previous horizon, then phase out at ``horizon``.

    Parameters of each new entry (bus efficiencies, marginal cost) are frozen
    at build time so later horizons dispatch the vintage exactly as built.
    """
    entries = []
    for asset_id in sorted(previous.built_capacity):
        capacity = previous.built_capacity[asset_id]
        if capacity < 0:
            raise ValueError(f"negative built capacity for {asset_id}: {capacity}")
        if capacity <= BUILD_THRESHOLD_MW:
            continue
        asset = network.asset(asset_id)
        entries.append(
            FleetEntry(
                asset_id=asset_id,
                build_year=previous.horizon,
                capacity_mw=capacity,
                lifetime=asset.lifetime,
                params={
                    "efficiencies": dict(asset.buses),
                    "marginal_cost": asset.marginal_cost,
                },
            )
        )
    return phase_out(previous_fleet.extended(entries), horizon)


def exempt_asset_ids(network: Network, tags=("electrolysis", "carbon-capture")) -> frozenset:
    """Assets whose parameters change over time and must never be aggregated."""
    return frozenset(a.id for a in network.assets for tag in tags if tag in a.tags)


def run_optimal_pathway(
    document: dict,
    horizons: list[int],
    scenario: Scenario,
    initial_fleet: Fleet | None = None,
    solver_options: SolverOptions | None = None,
    aggregate: bool = False,
) -> list[HorizonStep]:
    """Cost-optimal sequence over the horizons with capacity carry-over.

    An infeasible (or otherwise failed) horizon is recorded and aborts the
    chain; earlier steps are retained.
    """
    if list(horizons) != sorted(set(horizons)):
        raise ValueError("horizons must be strictly increasing")
    steps: list[HorizonStep] = []
    fleet = initial_fleet if initial_fleet is not None else fleet_from_document(document)
    prev: HorizonStep | None = None
    for horizon in horizons:
        if prev is not None:
            fleet = carry_over(prev.dispatch, prev.fleet, prev.network, horizon)
        else:
            fleet = phase_out(fleet, horizon)
        network = apply_scenario(build_network(document, horizon), scenario, horizon)
        record, dispatch = _solve_horizon(
            network, fleet, scenario.id, solver_options, aggregate
        )
        step = HorizonStep(record=record, dispatch=dispatch, fleet=fleet, network=network)
        steps.append(step)
        if record.status != "optimal":
            break
        prev = step
    return steps


def _solve_horizon(network, fleet, scenario_id, solver_options, aggregate):
    work_fleet, agg_map = fleet, None
    if aggregate:
        # Expiry may be ignored here: the grouping lives only inside this
        # horizon's solve, on a fleet already phased out for it.
        work_fleet, agg_map = aggregate_build_years(
            fleet, exempt_asset_ids(network), expiry_exact=False
        )
    problem = translate(network, work_fleet)
    solution = solve(problem, solver_options)
    if solution.status != "optimal":
        record = PathwayRecord(
            scenario_id=scenario_id,
            horizon=network.horizon,
            sense="optimal",
            epsilon=None,
            status=solution.status,
        )
        return record, None
    dispatch = extract(problem, solution)
    if agg_map is not None:
        dispatch = disaggregate(dispatch, agg_map)
    record = PathwayRecord(
        scenario_id=scenario_id,
        horizon=network.horizon,
        sense="optimal",
        epsilon=None,
        status="optimal",
        cost_eur=solution.objective,
        h2_mt=dispatch.target_value_mt,
        mu_raw=None,
    )
    return record, dispatch
