import numpy as np
import pytest

from corridor_kit.fleet import Fleet, FleetEntry
from corridor_kit.lp import LpBuilder
from corridor_kit.mga import SlackSpec, add_cost_budget, extremize, run_extremal_pathway
from corridor_kit.pathway import PathwayRecord, carry_over, phase_out, run_optimal_pathway
from corridor_kit.scenarios import apply_scenario
from corridor_kit.network import build_network
from corridor_kit.translate import translate
from corridor_kit.simplex import solve


def entry(build_year=2025, lifetime=20, capacity=100.0, asset="wind_n1"):
    return FleetEntry(asset_id=asset, build_year=build_year, capacity_mw=capacity, lifetime=lifetime)


def test_phase_out_retains_active():
    fleet = Fleet((entry(2025, 20),))
    assert len(phase_out(fleet, 2040)) == 1


def test_phase_out_removes_expired():
    fleet = Fleet((entry(2025, 20),))
    assert len(phase_out(fleet, 2045)) == 0


def test_phase_out_empty():
    assert len(phase_out(Fleet(), 2040)) == 0


def test_carry_over_appends_builds(doc8, base_scenario):
    net = apply_scenario(build_network(doc8, 2030), base_scenario, 2030)
    prob = translate(net, Fleet())
    sol = solve(prob)
    from corridor_kit.translate import extract

    result = extract(prob, sol)
    fleet = carry_over(result, Fleet(), net, 2035)
    built_ids = {e.asset_id for e in fleet}
    assert built_ids == {a for a, v in result.built_capacity.items() if v > 1e-6}
    for e in fleet:
        assert e.build_year == 2030
        assert e.capacity_mw == pytest.approx(result.built_capacity[e.asset_id])
        assert "efficiencies" in e.params and "marginal_cost" in e.params


def test_carry_over_rejects_negative_builds(doc8, base_scenario):
    net = apply_scenario(build_network(doc8, 2030), base_scenario, 2030)

    class FakeResult:
        horizon = 2030
        built_capacity = {"wind_n1": -5.0}

    with pytest.raises(ValueError):
        carry_over(FakeResult(), Fleet(), net, 2035)


def test_two_builds_same_asset_distinct_entries():
    fleet = Fleet((entry(2030, 25), entry(2035, 25)))
    years = sorted(e.build_year for e in fleet.for_asset("wind_n1"))
    assert years == [2030, 2035]


def test_record_invariants():
    with pytest.raises(ValueError):
        PathwayRecord("s", 2030, "optimal", 0.05, "optimal")
    with pytest.raises(ValueError):
        PathwayRecord("s", 2030, "min", 0.05, "infeasible", cost_eur=1.0)


def test_single_horizon_equals_plain_optimization(doc8, base_scenario):
    steps = run_optimal_pathway(doc8, [2030], base_scenario)
    net = apply_scenario(build_network(doc8, 2030), base_scenario, 2030)
    from corridor_kit.fleet import fleet_from_document

    prob = translate(net, fleet_from_document(doc8).active(2030))
    sol = solve(prob)
    assert steps[0].record.cost_eur == pytest.approx(sol.objective, rel=1e-9)


def test_horizons_must_increase(doc8, base_scenario):
    with pytest.raises(ValueError):
        run_optimal_pathway(doc8, [2040, 2030], base_scenario)


@pytest.fixture(scope="module")
def base_pathway(doc8, base_scenario):
    return run_optimal_pathway(doc8, [2030, 2035, 2040, 2045, 2050], base_scenario)


def test_fixture_pathway_all_optimal(base_pathway):
    assert [s.record.status for s in base_pathway] == ["optimal"] * 5


def test_monotone_commitment(base_pathway):
    for prev, nxt in zip(base_pathway, base_pathway[1:]):
        prev_ids = {(e.asset_id, e.build_year, e.capacity_mw) for e in prev.fleet}
        nxt_ids = {(e.asset_id, e.build_year, e.capacity_mw) for e in nxt.fleet}
        unexpired = {
            key
            for key in prev_ids
            if any(
                e.asset_id == key[0] and e.build_year == key[1] and e.active_at(nxt.record.horizon)
                for e in prev.fleet
            )
        }
        assert unexpired <= nxt_ids


def test_relaxing_global_limit_never_raises_cost(doc8, scenario_index):
    sid_low = "ccs-a_biomass-b_imports-a_electrolyser-b_transport-b_weather-a"
    sid_high = "ccs-c_biomass-b_imports-a_electrolyser-b_transport-b_weather-a"
    low = run_optimal_pathway(doc8, [2040], scenario_index[sid_low])
    high = run_optimal_pathway(doc8, [2040], scenario_index[sid_high])
    # Level (c) relaxes the sequestration cap and cheapens capture capital;
    # the optimum cannot get more expensive.
    assert high[0].record.cost_eur <= low[0].record.cost_eur * (1 + 1e-9)


def test_pathway_records_bit_identical(doc8, base_scenario):
    a = run_optimal_pathway(doc8, [2030, 2035], base_scenario)
    b = run_optimal_pathway(doc8, [2030, 2035], base_scenario)
    for sa, sb in zip(a, b):
        assert sa.record == sb.record


def test_infeasible_horizon_aborts_chain(doc8, base_scenario):
    doc = {**doc8, "limits": [dict(l) for l in doc8["limits"]]}
    for lim in doc["limits"]:
        if lim["kind"] == "net_emission_cap":
            lim["fraction"] = {"2030": -0.5}  # impossible negative cap
    steps = run_optimal_pathway(doc, [2030, 2035], base_scenario)
    assert steps[0].record.status == "infeasible"
    assert len(steps) == 1


# --- budget / extremization mechanics on hand-built LPs ---


def tiny_budget_problem():
    # min x1 + x2 s.t. x1 + x2 >= 1; target h = x1.
    bld = LpBuilder()
    x1 = bld.add_col("x1", cost=1.0)
    x2 = bld.add_col("x2", cost=1.0)
    r = bld.add_row("demand", "ge", 1.0)
    bld.add_entry(r, x1, 1.0)
    bld.add_entry(r, x2, 1.0)
    return bld.build(aux={"electrolysis_output_mwh": {x1: 1.0}})


def test_budget_rhs_values():
    prob = tiny_budget_problem()
    zero = add_cost_budget(prob, prob.c, 100.0, 0.0)
    assert zero.b[-1] == pytest.approx(100.0)
    five = add_cost_budget(prob, prob.c, 100.0, 0.05)
    assert five.b[-1] == pytest.approx(105.0)
    assert zero.row_labels[-1] == "budget"


def test_budget_requires_c_star():
    prob = tiny_budget_problem()
    with pytest.raises(ValueError):
        add_cost_budget(prob, prob.c, None, 0.1)


def test_extremize_two_var_examples():
    prob = tiny_budget_problem()
    budgeted = add_cost_budget(prob, prob.c, 1.0, 0.1)
    sol, mu = extremize(budgeted, "max")
    assert sol.status == "optimal"
    assert sol.objective == pytest.approx(1.1, abs=1e-9)
    assert mu == pytest.approx(1.0, abs=1e-9)  # one extra unit of budget -> one unit of x1

    pinned = add_cost_budget(prob, prob.c, 1.0, 0.0)
    sol0, _ = extremize(pinned, "max")
    assert sol0.objective == pytest.approx(1.0, abs=1e-9)

    low, _ = extremize(budgeted, "min")
    assert low.objective == pytest.approx(0.0, abs=1e-9)


def test_extremize_needs_budget_row():
    with pytest.raises(ValueError):
        extremize(tiny_budget_problem(), "max")


def test_budget_epsilon_nesting_first_horizon(doc8, base_scenario):
    steps = run_optimal_pathway(doc8, [2040], base_scenario)
    recs = [s.record for s in steps]
    maxima, minima = {}, {}
    for eps in (0.05, 0.10):
        up = run_extremal_pathway(doc8, [2040], base_scenario, SlackSpec(eps, "max"), recs)
        dn = run_extremal_pathway(doc8, [2040], base_scenario, SlackSpec(eps, "min"), recs)
        maxima[eps] = up[0].record.h2_mt
        minima[eps] = dn[0].record.h2_mt
    assert maxima[0.10] > maxima[0.05]  # budget binds on the fixture, strictly wider
    assert minima[0.10] <= minima[0.05] + 1e-9


def test_extremal_requires_optimal_records(doc8, base_scenario):
    with pytest.raises(ValueError):
        run_extremal_pathway(doc8, [2030], base_scenario, SlackSpec(0.05, "max"), [])


def test_first_horizon_ordering(doc8, base_scenario):
    steps = run_optimal_pathway(doc8, [2030], base_scenario)
    recs = [s.record for s in steps]
    up = run_extremal_pathway(doc8, [2030], base_scenario, SlackSpec(0.0, "max"), recs)
    dn = run_extremal_pathway(doc8, [2030], base_scenario, SlackSpec(0.0, "min"), recs)
    h_opt = recs[0].h2_mt
    assert dn[0].record.h2_mt <= h_opt + 1e-9
    assert up[0].record.h2_mt >= h_opt - 1e-9
