"""Near-optimal exploration: extremize a target functional under a cost budget.

Per horizon, the objective is replaced by the target (total electrolysis
hydrogen output) and the original cost enters as one extra "budget" row
``cost . x <= (1 + eps) * c_star``, where ``c_star`` is that horizon's
optimum from the cost-optimal pathway of the same scenario.  Min and max
sequences inherit their fleet from the same-sense solution at the previous
horizon (the lineage rule), while the budget always references the optimal
sequence.

The reported ranges are conservative: the extremum at horizon ``i`` is taken
over solutions reachable from this lineage's predecessor only, whereas the
full near-optimal space at ``i`` allows any near-optimal predecessor, so the
true attainable range can be wider.  Nothing here asserts tightness.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .fleet import Fleet, fleet_from_document
from .lp import LpProblem
from .network import build_network
from .pathway import (
    HorizonStep,
    PathwayRecord,
    carry_over,
    exempt_asset_ids,
    phase_out,
)
from .reduction import aggregate_build_years, disaggregate
from .scenarios import Scenario, apply_scenario
from .simplex import SolverOptions, solve
from .translate import extract, translate

BUDGET_LABEL = "budget"
PIN_LABEL = "target_pin"
TARGET_AUX = "electrolysis_output_mwh"


@dataclass(frozen=True)
class SlackSpec:
    epsilon: float
    sense: str  # "min" or "max"

    def __post_init__(self):
        if self.epsilon < 0:
            raise ValueError("epsilon must be >= 0")
        if self.sense not in ("min", "max"):
            raise ValueError(f"sense must be min or max, not {self.sense!r}")


def add_cost_budget(
    problem: LpProblem,
    cost: np.ndarray,
    c_star: float,
    epsilon: float,
    target: dict[int, float] | None = None,
) -> LpProblem:
    """Attach the cost-budget row and swap the objective for the target.

    ``cost`` is the original objective being budgeted; ``target`` a sparse
    column->coefficient map (defaults to the problem's electrolysis output).
    """
    if c_star is None:
        raise ValueError("c_star missing: run the cost-optimal pathway first")
    if epsilon < 0:
        raise ValueError("epsilon must be >= 0")
    cost = np.asarray(cost, dtype=float)
    if target is None:
        target = problem.aux[TARGET_AUX]
    objective = np.zeros(problem.n)
    for j, coeff in target.items():
        objective[j] = coeff
    coeffs = {int(j): float(cost[j]) for j in np.nonzero(cost)[0]}
    rhs = (1.0 + epsilon) * c_star
    out = problem.with_row(BUDGET_LABEL, coeffs, "le", rhs, objective=objective)
    out.meta["cost_vector"] = cost
    out.meta["budget_rhs"] = rhs
    out.meta["c_star"] = c_star
    out.meta["epsilon"] = epsilon
    return out


def extremize(problem: LpProblem, sense: str, options: SolverOptions | None = None):
    """Min- or maximize the target subject to the budget row.

    Returns ``(solution, mu)`` where ``mu`` is the budget-row dual expressed
    as the marginal change of the extremized target value per unit of budget
    (>= 0 for maximizations, <= 0 for minimizations, 0 when non-binding).
    The solution's objective is reported as the target value itself.
    """
    if BUDGET_LABEL not in problem.row_labels:
        raise ValueError("problem has no budget row; call add_cost_budget first")
    if sense not in ("min", "max"):
        raise ValueError(f"sense must be min or max, not {sense!r}")
    solve_problem = problem
    if sense == "max":
        solve_problem = LpProblem(
            c=-problem.c,
            a_rows=problem.a_rows,
            a_cols=problem.a_cols,
            a_vals=problem.a_vals,
            senses=problem.senses,
            b=problem.b,
            lb=problem.lb,
            ub=problem.ub,
            row_labels=problem.row_labels,
            col_labels=problem.col_labels,
            aux=problem.aux,
            meta=problem.meta,
        )
    solution = solve(solve_problem, options)
    if solution.status != "optimal":
        return solution, None
    row = problem.row_labels.index(BUDGET_LABEL)
    mu = float(solution.y[row])
    if sense == "max":
        # The solver minimized -target: flip value and marginal back.
        solution.objective = -solution.objective
        mu = -mu
    return solution, mu


def _cheapest_representative(budgeted: LpProblem, solution, sense: str, options):
    """Among solutions attaining the extremal target value, pick the cheapest.

    An extremization alone leaves every other dimension free inside the cost
    budget, so a vertex solver may return a solution that wastes the whole
    budget on unused capacity; carried into the next horizon such a fleet can
    make later budgets unreachable.  Re-solving for minimum cost with the
    target pinned at its extremal value is a deterministic tie-break that
    leaves the recorded extremal value untouched.
    """
    h_star = float(budgeted.c @ solution.x)
    slack = 1e-9 * abs(h_star) + 1e-2
    pin_sense = "le" if sense == "min" else "ge"
    bound = h_star + slack if sense == "min" else h_star - slack
    target_coeffs = {int(j): float(budgeted.c[j]) for j in np.nonzero(budgeted.c)[0]}
    cost = budgeted.meta["cost_vector"]
    cleanup = budgeted.with_row(PIN_LABEL, target_coeffs, pin_sense, bound, objective=cost)
    cleanup.meta["cost_vector"] = cost
    refined = solve(cleanup, options)
    if refined.status != "optimal":
        return solution
    return refined


def run_extremal_pathway(
    document: dict,
    horizons: list[int],
    scenario: Scenario,
    slack: SlackSpec,
    optimal_records: list[PathwayRecord],
    initial_fleet: Fleet | None = None,
    solver_options: SolverOptions | None = None,
    aggregate: bool = False,
) -> list[HorizonStep]:
    """Extremal sequence along its own lineage, budgeted by the optimal one.

    ``optimal_records`` must cover every requested horizon with an optimal
    status; a failed extremization is recorded and aborts the chain.
    """
    c_star_of = {
        rec.horizon: rec.cost_eur
        for rec in optimal_records
        if rec.sense == "optimal" and rec.status == "optimal"
    }
    for horizon in horizons:
        if horizon not in c_star_of:
            raise ValueError(f"no optimal-cost record for horizon {horizon}")

    steps: list[HorizonStep] = []
    fleet = initial_fleet if initial_fleet is not None else fleet_from_document(document)
    prev: HorizonStep | None = None
    for horizon in horizons:
        if prev is not None:
            fleet = carry_over(prev.dispatch, prev.fleet, prev.network, horizon)
        else:
            fleet = phase_out(fleet, horizon)
        network = apply_scenario(build_network(document, horizon), scenario, horizon)
        work_fleet, agg_map = fleet, None
        if aggregate:
            work_fleet, agg_map = aggregate_build_years(
                fleet, exempt_asset_ids(network), expiry_exact=False
            )
        problem = translate(network, work_fleet)
        budgeted = add_cost_budget(problem, problem.c, c_star_of[horizon], slack.epsilon)
        solution, mu = extremize(budgeted, slack.sense, solver_options)
        if solution.status != "optimal":
            record = PathwayRecord(
                scenario_id=scenario.id,
                horizon=horizon,
                sense=slack.sense,
                epsilon=slack.epsilon,
                status=solution.status,
            )
            steps.append(HorizonStep(record=record, dispatch=None, fleet=fleet, network=network))
            break
        if horizon != horizons[-1]:
            # The tie-break matters only for the fleet the next horizon inherits.
            solution = _cheapest_representative(budgeted, solution, slack.sense, solver_options)
        dispatch = extract(budgeted, solution)
        if agg_map is not None:
            dispatch = disaggregate(dispatch, agg_map)
        record = PathwayRecord(
            scenario_id=scenario.id,
            horizon=horizon,
            sense=slack.sense,
            epsilon=slack.epsilon,
            status="optimal",
            cost_eur=dispatch.objective,
            h2_mt=dispatch.target_value_mt,
            mu_raw=mu,
        )
        step = HorizonStep(record=record, dispatch=dispatch, fleet=fleet, network=network)
        steps.append(step)
        prev = step
    return steps
