"""Independent brute-force oracles for small LPs used across the test suite."""

from __future__ import annotations

import itertools

import numpy as np

from corridor_kit.lp import LpProblem


def enumerate_vertices_minimum(problem: LpProblem) -> tuple[str, float | None]:
    """Brute-force LP optimum by enumerating candidate vertices.

    Collects every constraint facet (rows tightened to equalities plus finite
    bound facets), solves each n-subset, keeps feasible points, and returns
    ("optimal", best objective) or ("infeasible", None).  Only sensible for
    a handful of variables; intended as an oracle, not a solver.
    """
    n, m = problem.n, problem.m
    a = problem.dense()
    facets_a: list[np.ndarray] = [a[i] for i in range(m)]
    facets_b: list[float] = [float(problem.b[i]) for i in range(m)]
    for j in range(n):
        if np.isfinite(problem.lb[j]):
            e = np.zeros(n)
            e[j] = 1.0
            facets_a.append(e)
            facets_b.append(float(problem.lb[j]))
        if np.isfinite(problem.ub[j]):
            e = np.zeros(n)
            e[j] = 1.0
            facets_a.append(e)
            facets_b.append(float(problem.ub[j]))
    fa = np.asarray(facets_a)
    fb = np.asarray(facets_b)
    k = fa.shape[0]
    if k < n:
        raise ValueError("not enough facets to pin a vertex; problem likely unbounded")

    combos = list(itertools.combinations(range(k), n))
    mats = fa[np.asarray(combos)]  # (n_combos, n, n)
    rhss = fb[np.asarray(combos)]
    dets = np.abs(np.linalg.det(mats))
    best = np.inf
    found = False
    for idx in np.nonzero(dets > 1e-10)[0]:
        x = np.linalg.solve(mats[idx], rhss[idx])
        if _feasible(problem, a, x):
            found = True
            best = min(best, float(problem.c @ x))
    if not found:
        return "infeasible", None
    return "optimal", best


def _feasible(problem: LpProblem, a: np.ndarray, x: np.ndarray, tol: float = 1e-7) -> bool:
    ax = a @ x
    for i in range(problem.m):
        r = ax[i] - problem.b[i]
        scale = 1.0 + abs(problem.b[i])
        s = problem.senses[i]
        if s == "le" and r > tol * scale:
            return False
        if s == "ge" and r < -tol * scale:
            return False
        if s == "eq" and abs(r) > tol * scale:
            return False
    if np.any(x < problem.lb - tol * (1 + np.abs(problem.lb))):
        return False
    finite_ub = np.isfinite(problem.ub)
    if np.any(x[finite_ub] > problem.ub[finite_ub] + tol * (1 + np.abs(problem.ub[finite_ub]))):
        return False
    return True


def random_problem(rng: np.random.Generator, n_vars: int, n_rows: int, bounded: bool = True) -> LpProblem:
    """A random dense-ish LP with a known feasible point baked into the rhs."""
    a = rng.uniform(-2.0, 2.0, size=(n_rows, n_vars))
    a[rng.uniform(size=a.shape) < 0.3] = 0.0
    x_feas = rng.uniform(0.0, 3.0, size=n_vars)
    senses = []
    b = np.zeros(n_rows)
    ax = a @ x_feas
    for i in range(n_rows):
        kind = rng.integers(0, 3)
        if kind == 0:
            senses.append("le")
            b[i] = ax[i] + rng.uniform(0.0, 2.0)
        elif kind == 1:
            senses.append("ge")
            b[i] = ax[i] - rng.uniform(0.0, 2.0)
        else:
            senses.append("eq")
            b[i] = ax[i]
    c = rng.uniform(-1.0, 1.0, size=n_vars)
    ub = np.full(n_vars, 10.0 if bounded else np.inf)
    rows, cols = np.nonzero(a)
    return LpProblem(
        c=c,
        a_rows=rows.astype(np.int64),
        a_cols=cols.astype(np.int64),
        a_vals=a[rows, cols],
        senses=senses,
        b=b,
        lb=np.zeros(n_vars),
        ub=ub,
        row_labels=[f"r{i}" for i in range(n_rows)],
        col_labels=[f"x{j}" for j in range(n_vars)],
    )
