"""Translate a network plus a fleet into a labelled LP and map solutions back.

Row layout is canonical and deterministic: bus balance rows first, then
per-instance asset rows (capacity limits and storage dynamics), then global
rows, each block sorted by id.  Reproducible orderings keep duals stable
under degeneracy and let repeated runs produce identical problems.

Carbon accounting conventions:

* conversion assets carry their CO2 flows as explicit bus attachments
  (to the atmosphere bus or the temporary-storage bus);
* final-demand combustion is charged automatically: each load consuming a
  carrier with positive ``co2_intensity`` debits the emission row by
  intensity x annual demand (a constant folded into the row's rhs);
* fuel imports are carbon-neutral by definition, so an import of a
  carboniferous carrier credits the emission row by intensity x dispatch.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .fleet import Fleet, FleetEntry
from .lp import LpBuilder, LpProblem
from .network import AssetSpec, Network, twh_to_mt

ELECTROLYSIS_TAG = "electrolysis"
IMPORT_TAG = "import"


class StructuralError(ValueError):
    """The network cannot be translated (missing structure, bad labels)."""


class ConsistencyError(RuntimeError):
    """Solution values do not line up with the problem's labelling."""


@dataclass(frozen=True)
class _Instance:
    iid: str
    asset: AssetSpec
    efficiencies: dict[str, float]
    marginal_cost: float
    capacity_base: float | None  # None = uncapped dispatch
    build_year: int | None  # None for the current horizon's expandable slot


@dataclass
class DispatchResult:
    """Solved dispatch mapped back to domain quantities."""

    horizon: int
    objective: float
    built_capacity: dict[str, float]
    dispatch_mwh: dict[str, np.ndarray]  # metered MWh per instance per snapshot
    store_net_mwh: dict[str, np.ndarray]  # positive = discharge to the bus
    instance_info: dict[str, dict]
    flow_rows: list[tuple]  # (carrier, bus, asset_id, instance_id, annual)
    net_emissions_t: float
    sequestered_t: float
    imports_mwh: dict[str, float]
    hydrogen_mwh: float
    target_value_mt: float = field(init=False)

    def __post_init__(self):
        self.target_value_mt = twh_to_mt(self.hydrogen_mwh / 1e6)

    def dispatch_by_asset(self, asset_id: str) -> np.ndarray:
        total = None
        for iid, info in self.instance_info.items():
            if info["asset_id"] != asset_id:
                continue
            series = self.dispatch_mwh.get(iid, self.store_net_mwh.get(iid))
            if series is None:
                continue
            total = series.copy() if total is None else total + series
        if total is None:
            raise KeyError(asset_id)
        return total


def _instances(network: Network, fleet: Fleet | None) -> list[_Instance]:
    fleet = (fleet or Fleet()).active(network.horizon)
    out: list[_Instance] = []
    for asset in sorted(network.assets, key=lambda a: a.id):
        if asset.kind == "load":
            continue
        out.append(
            _Instance(
                iid=asset.id,
                asset=asset,
                efficiencies=dict(asset.buses),
                marginal_cost=asset.marginal_cost,
                capacity_base=asset.existing_capacity,
                build_year=None,
            )
        )
        grouped: dict[tuple, float] = {}
        for entry in sorted(fleet.for_asset(asset.id), key=lambda e: (e.build_year, e.lifetime)):
            key = (entry.build_year, entry.lifetime, json.dumps(entry.params, sort_keys=True))
            grouped[key] = grouped.get(key, 0.0) + entry.capacity_mw
        for (build_year, lifetime, params_json), capacity in grouped.items():
            params = json.loads(params_json)
            out.append(
                _Instance(
                    iid=f"{asset.id}@{build_year}",
                    asset=asset,
                    efficiencies=params.get("efficiencies", dict(asset.buses)),
                    marginal_cost=params.get("marginal_cost", asset.marginal_cost),
                    capacity_base=capacity,
                    build_year=build_year,
                )
            )
    return out


def _electrolysis_output_coeff(inst: _Instance, network: Network) -> float:
    """Summed positive efficiency towards energy buses (MWh out per metered MWh)."""
    return sum(
        eff
        for bus_id, eff in inst.efficiencies.items()
        if eff > 0 and network.bus_carrier(bus_id).kind == "energy"
    )


def translate(network: Network, fleet: Fleet | None = None) -> LpProblem:
    """Build the standard-form LP for one planning horizon.

    Rows: one nodal balance equality per (bus, snapshot) except the CO2
    atmosphere bus; dispatch and storage-level capacity rows; cyclic storage
    dynamics; one row per global limit.  The objective is annualized capital
    on newly built capacity plus weighted marginal dispatch cost.
    """
    weights = network.snapshots.weights
    n_snap = network.snapshots.count
    if n_snap == 0:
        raise StructuralError("network has no snapshots")

    atmosphere = network.co2_bus("atmosphere")
    emission_limits = [l for l in network.limits if l.kind == "net_emission_cap"]
    if emission_limits and atmosphere is None:
        raise StructuralError("net emission cap requires a CO2 atmosphere bus")
    coupling_limits = [l for l in network.limits if l.kind == "import_coupling"]

    instances = _instances(network, fleet)
    bld = LpBuilder()

    cap_col: dict[str, int] = {}
    for asset in sorted(network.assets, key=lambda a: a.id):
        if asset.kind != "load" and asset.expandable:
            cap_col[asset.id] = bld.add_col(f"cap::{asset.id}", cost=asset.capital_cost)

    disp_col: dict[tuple[str, int], int] = {}
    chg_col: dict[tuple[str, int], int] = {}
    dis_col: dict[tuple[str, int], int] = {}
    lvl_col: dict[tuple[str, int], int] = {}
    for inst in instances:
        if inst.asset.kind == "store":
            for t in range(n_snap):
                chg_col[inst.iid, t] = bld.add_col(f"chg::{inst.iid}::{t}")
            if not inst.asset.one_way:
                for t in range(n_snap):
                    dis_col[inst.iid, t] = bld.add_col(
                        f"dis::{inst.iid}::{t}", cost=inst.marginal_cost * weights[t]
                    )
            for t in range(n_snap):
                lvl_col[inst.iid, t] = bld.add_col(f"lvl::{inst.iid}::{t}")
        else:
            for t in range(n_snap):
                disp_col[inst.iid, t] = bld.add_col(
                    f"disp::{inst.iid}::{t}", cost=inst.marginal_cost * weights[t]
                )

    # Nodal balance rows (atmosphere excluded: it is capped annually, not hourly).
    balance_row: dict[tuple[str, int], int] = {}
    for bus in sorted(network.buses, key=lambda b: b.id):
        if atmosphere is not None and bus.id == atmosphere.id:
            continue
        for t in range(n_snap):
            balance_row[bus.id, t] = bld.add_row(f"bal::{bus.id}::{t}", "eq", 0.0)
    for asset in network.assets:
        if asset.kind != "load":
            continue
        bus_id = next(iter(asset.buses))
        for t in range(n_snap):
            bld.add_to_rhs(balance_row[bus_id, t], float(asset.demand[t]))

    for inst in instances:
        if inst.asset.kind == "store":
            bus_id = next(iter(inst.efficiencies))
            for t in range(n_snap):
                row = balance_row[bus_id, t]
                bld.add_entry(row, chg_col[inst.iid, t], -1.0)
                if not inst.asset.one_way:
                    bld.add_entry(row, dis_col[inst.iid, t], 1.0)
        else:
            for bus_id, eff in sorted(inst.efficiencies.items()):
                if atmosphere is not None and bus_id == atmosphere.id:
                    continue
                for t in range(n_snap):
                    bld.add_entry(balance_row[bus_id, t], disp_col[inst.iid, t], eff)

    # Capacity and storage rows, per instance in canonical order.
    for inst in instances:
        avail = inst.asset.availability
        new_cap = cap_col.get(inst.asset.id) if inst.build_year is None else None
        if inst.asset.kind == "store":
            if inst.capacity_base is not None or new_cap is not None:
                base = inst.capacity_base or 0.0
                for t in range(n_snap):
                    row = bld.add_row(f"lvlcap::{inst.iid}::{t}", "le", base)
                    bld.add_entry(row, lvl_col[inst.iid, t], 1.0)
                    if new_cap is not None:
                        bld.add_entry(row, new_cap, -1.0)
        else:
            if inst.capacity_base is not None or new_cap is not None:
                base = inst.capacity_base or 0.0
                for t in range(n_snap):
                    a_t = 1.0 if avail is None else float(avail[t])
                    row = bld.add_row(f"cap::{inst.iid}::{t}", "le", a_t * base)
                    bld.add_entry(row, disp_col[inst.iid, t], 1.0)
                    if new_cap is not None:
                        bld.add_entry(row, new_cap, -a_t)

    for inst in instances:
        if inst.asset.kind != "store":
            continue
        for t in range(n_snap):
            row = bld.add_row(f"soc::{inst.iid}::{t}", "eq", 0.0)
            bld.add_entry(row, lvl_col[inst.iid, t], 1.0)
            prev = t - 1
            if t == 0 and inst.asset.cyclic:
                prev = n_snap - 1
            if prev >= 0 and prev != t:
                bld.add_entry(row, lvl_col[inst.iid, prev], -1.0)
            bld.add_entry(row, chg_col[inst.iid, t], -weights[t])
            if not inst.asset.one_way:
                bld.add_entry(row, dis_col[inst.iid, t], weights[t])

    # Global rows, sorted by limit name.
    aux_elec: dict[int, float] = {}
    for inst in instances:
        if ELECTROLYSIS_TAG in inst.asset.tags and inst.asset.kind != "store":
            coeff = _electrolysis_output_coeff(inst, network)
            for t in range(n_snap):
                aux_elec[disp_col[inst.iid, t]] = coeff * weights[t]

    for limit in sorted(network.limits, key=lambda l: l.name):
        if limit.kind == "net_emission_cap":
            load_const = 0.0
            for asset in network.assets:
                if asset.kind != "load":
                    continue
                carrier = network.bus_carrier(next(iter(asset.buses)))
                load_const += carrier.co2_intensity * float(asset.demand @ weights)
            row = bld.add_row(f"glb::{limit.name}", "le", limit.bound - load_const)
            for inst in instances:
                if inst.asset.kind == "store":
                    continue
                eff_atm = inst.efficiencies.get(atmosphere.id, 0.0)
                carrier = network.bus_carrier(next(iter(inst.efficiencies)))
                credit = (
                    -carrier.co2_intensity if inst.asset.kind == "import" else 0.0
                )
                coeff = eff_atm + credit
                if coeff == 0.0:
                    continue
                for t in range(n_snap):
                    bld.add_entry(row, disp_col[inst.iid, t], coeff * weights[t])
        elif limit.kind == "import_coupling":
            row = bld.add_row(f"glb::{limit.name}", "le", 0.0)
            for inst in instances:
                if inst.asset.kind == "import":
                    for t in range(n_snap):
                        bld.add_entry(row, disp_col[inst.iid, t], weights[t])
                elif ELECTROLYSIS_TAG in inst.asset.tags and inst.asset.kind != "store":
                    coeff = _electrolysis_output_coeff(inst, network)
                    for t in range(n_snap):
                        bld.add_entry(row, disp_col[inst.iid, t], -coeff * weights[t])
        else:  # sequestration_cap and generic_linear share annual-flow semantics
            sense = {"le": "le", "ge": "ge", "eq": "eq"}[limit.sense]
            row = bld.add_row(f"glb::{limit.name}", sense, limit.bound)
            for inst in instances:
                weight = limit.coefficients.get(inst.asset.id)
                if weight is None or inst.asset.kind == "store":
                    continue
                for t in range(n_snap):
                    bld.add_entry(row, disp_col[inst.iid, t], weight * weights[t])

    meta = {
        "name": f"{network.meta.get('name', 'network')}@{network.horizon}",
        "horizon": network.horizon,
        "network": network,
        "instances": [
            {
                "iid": inst.iid,
                "asset_id": inst.asset.id,
                "build_year": inst.build_year,
                "kind": inst.asset.kind,
                "capacity_base": inst.capacity_base,
                "efficiencies": dict(inst.efficiencies),
                "marginal_cost": inst.marginal_cost,
            }
            for inst in instances
        ],
    }
    return bld.build(aux={"electrolysis_output_mwh": aux_elec}, meta=meta)


def extract(problem: LpProblem, solution) -> DispatchResult:
    """Map a solved LP back to domain quantities.

    Every labelled column lands in exactly one result field; an unknown label
    is an internal consistency error, not user error.
    """
    if solution.x is None:
        raise ConsistencyError(f"cannot extract from a solution with status {solution.status!r}")
    network: Network = problem.meta["network"]
    weights = network.snapshots.weights
    n_snap = network.snapshots.count
    x = solution.x

    built: dict[str, float] = {}
    dispatch: dict[str, np.ndarray] = {}
    charge: dict[str, np.ndarray] = {}
    discharge: dict[str, np.ndarray] = {}
    for j, label in enumerate(problem.col_labels):
        parts = label.split("::")
        kind = parts[0]
        if kind == "cap":
            built[parts[1]] = float(x[j])
        elif kind in ("disp", "chg", "dis", "lvl"):
            iid, t = parts[1], int(parts[2])
            if kind == "disp":
                dispatch.setdefault(iid, np.zeros(n_snap))[t] = x[j] * weights[t]
            elif kind == "chg":
                charge.setdefault(iid, np.zeros(n_snap))[t] = x[j] * weights[t]
            elif kind == "dis":
                discharge.setdefault(iid, np.zeros(n_snap))[t] = x[j] * weights[t]
        else:
            raise ConsistencyError(f"unrecognized column label {label!r}")

    store_net = {}
    for iid in sorted(set(charge) | set(discharge)):
        store_net[iid] = discharge.get(iid, np.zeros(n_snap)) - charge.get(iid, np.zeros(n_snap))

    info = {rec["iid"]: rec for rec in problem.meta["instances"]}
    atmosphere = network.co2_bus("atmosphere")
    permanent = network.co2_bus("permanent")

    flow_rows: list[tuple] = []
    emissions = 0.0
    sequestered = 0.0
    imports: dict[str, float] = {}
    for iid in sorted(info):
        rec = info[iid]
        asset = network.asset(rec["asset_id"])
        if rec["kind"] == "store":
            bus_id = next(iter(asset.buses))
            annual = float(store_net[iid].sum())
            flow_rows.append((network.bus(bus_id).carrier, bus_id, asset.id, iid, annual))
            continue
        effs = rec["efficiencies"]
        metered = dispatch.get(iid, np.zeros(n_snap))
        carrier_primary = network.bus_carrier(next(iter(effs)))
        if asset.kind == "import":
            imports[carrier_primary.name] = imports.get(carrier_primary.name, 0.0) + float(
                metered.sum()
            )
            emissions -= carrier_primary.co2_intensity * float(metered.sum())
        for bus_id, eff in sorted(effs.items()):
            annual = eff * float(metered.sum())
            if atmosphere is not None and bus_id == atmosphere.id:
                emissions += annual
                continue
            if permanent is not None and bus_id == permanent.id and eff > 0:
                sequestered += annual
            flow_rows.append((network.bus(bus_id).carrier, bus_id, asset.id, iid, annual))

    for asset in sorted(network.assets, key=lambda a: a.id):
        if asset.kind != "load":
            continue
        bus_id = next(iter(asset.buses))
        carrier = network.bus_carrier(bus_id)
        annual = float(asset.demand @ weights)
        flow_rows.append((carrier.name, bus_id, asset.id, asset.id, -annual))
        emissions += carrier.co2_intensity * annual

    hydrogen_mwh = problem.aux_value("electrolysis_output_mwh", x)
    cost_vec = problem.meta.get("cost_vector", problem.c)
    return DispatchResult(
        horizon=network.horizon,
        objective=float(cost_vec @ x),
        built_capacity=built,
        dispatch_mwh=dispatch,
        store_net_mwh=store_net,
        instance_info=info,
        flow_rows=flow_rows,
        net_emissions_t=emissions,
        sequestered_t=sequestered,
        imports_mwh=imports,
        hydrogen_mwh=hydrogen_mwh,
    )


