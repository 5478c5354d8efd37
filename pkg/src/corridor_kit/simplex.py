"""Reference LP solver: primal revised simplex with dual extraction.

The solver is deterministic (fixed tie-breaking, no randomization) and
favours exact vertex solutions over speed: dispatch problems at desk scale
solve in well under a second, and clean basic solutions give well-defined
row duals for downstream shadow-price work.

Dual sign convention
--------------------
Row duals are reported as marginal values of the optimal objective with
respect to the right-hand side: ``y_i = d(objective)/d(b_i)``.  For a
minimization this means ``y_i <= 0`` on ``<=`` rows, ``y_i >= 0`` on ``>=``
rows and free sign on equalities.  The convention is asserted on every
optimal solve as part of the KKT residual check.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .lp import LpProblem

STATUS_OPTIMAL = "optimal"
STATUS_INFEASIBLE = "infeasible"
STATUS_UNBOUNDED = "unbounded"
STATUS_NUMERICAL = "numerical_failure"
STATUS_TIMEOUT = "timeout"


@dataclass
class SolverOptions:
    max_iterations: int = 50000
    tol: float = 1e-9  # pricing / pivot tolerance on the equilibrated matrix
    feas_tol: float = 1e-8  # relative phase-1 feasibility threshold
    kkt_tol: float = 1e-8  # relative residual required to report "optimal"
    refactor_every: int = 90
    stall_iterations: int = 300  # switch to Bland's rule after this many non-improving pivots


@dataclass
class ResidualReport:
    """Relative KKT residuals of a claimed-optimal primal/dual pair."""

    primal: float
    dual: float
    complementarity: float
    gap: float

    def passes(self, tol: float = 1e-8) -> bool:
        return max(self.primal, self.dual, self.complementarity, self.gap) <= tol

    def worst(self) -> float:
        return max(self.primal, self.dual, self.complementarity, self.gap)


@dataclass
class LpSolution:
    status: str
    x: np.ndarray | None = None
    y: np.ndarray | None = None
    objective: float | None = None
    iterations: int = 0
    residuals: ResidualReport | None = None
    basis: tuple | None = None  # opaque basis fingerprint (standard-form column ids)


def verify_kkt(problem: LpProblem, solution: LpSolution) -> ResidualReport:
    """Recompute relative KKT residuals for a primal/dual pair in original space.

    Residuals are primal infeasibility, dual infeasibility (reduced-cost and
    dual-sign violations), complementary slackness and the relative duality
    gap.  "Relative" means against the solution scale: row violations are
    normalized by ``1 + |b_i| + |A_i||x| + ||x||_inf`` and bound violations by
    ``1 + |bound| + ||x||_inf``, so a residual only counts when it is
    meaningful against the magnitudes the arithmetic actually carried.
    """
    x, y = solution.x, solution.y
    if x is None or y is None:
        raise ValueError("solution carries no primal/dual values to verify")
    if x.size != problem.n or y.size != problem.m:
        raise ValueError("solution dimensions do not match the problem")
    a = problem.dense()
    ax = a @ x if problem.m else np.zeros(0)
    activity = np.abs(a) @ np.abs(x) if problem.m else np.zeros(0)
    xscale = float(np.max(np.abs(x))) if x.size else 0.0

    primal = 0.0
    for i in range(problem.m):
        resid = ax[i] - problem.b[i]
        sense = problem.senses[i]
        if sense == "le":
            viol = max(0.0, resid)
        elif sense == "ge":
            viol = max(0.0, -resid)
        else:
            viol = abs(resid)
        primal = max(primal, viol / (1.0 + abs(problem.b[i]) + activity[i] + xscale))
    for j in range(problem.n):
        if np.isfinite(problem.lb[j]):
            primal = max(primal, (problem.lb[j] - x[j]) / (1.0 + abs(problem.lb[j]) + xscale))
        if np.isfinite(problem.ub[j]):
            primal = max(primal, (x[j] - problem.ub[j]) / (1.0 + abs(problem.ub[j]) + xscale))
    primal = max(primal, 0.0)

    z = problem.c - (a.T @ y if problem.m else 0.0)
    obj = float(problem.c @ x)
    scale = 1.0 + abs(obj)

    dual = 0.0
    for i in range(problem.m):
        if problem.senses[i] == "le":
            dual = max(dual, y[i] / (1.0 + abs(y[i])))
        elif problem.senses[i] == "ge":
            dual = max(dual, -y[i] / (1.0 + abs(y[i])))
    for j in range(problem.n):
        lo, hi = problem.lb[j], problem.ub[j]
        at_lo = np.isfinite(lo) and x[j] <= lo + 1e-7 * (1 + abs(lo))
        at_hi = np.isfinite(hi) and x[j] >= hi - 1e-7 * (1 + abs(hi))
        zj = z[j] / (1.0 + abs(problem.c[j]))
        if at_lo and at_hi:
            continue  # fixed variable, any sign admissible
        if at_lo:
            dual = max(dual, -zj)
        elif at_hi:
            dual = max(dual, zj)
        else:
            dual = max(dual, abs(zj))
    dual = max(dual, 0.0)

    comp = 0.0
    for i in range(problem.m):
        if problem.senses[i] != "eq":
            comp = max(comp, abs(y[i] * (ax[i] - problem.b[i])) / scale)
    for j in range(problem.n):
        lo, hi = problem.lb[j], problem.ub[j]
        gap_lo = x[j] - lo if np.isfinite(lo) else np.inf
        gap_hi = hi - x[j] if np.isfinite(hi) else np.inf
        slack = min(gap_lo, gap_hi)
        if np.isfinite(slack):
            comp = max(comp, abs(z[j] * slack) / scale)

    dual_obj = float(y @ problem.b) if problem.m else 0.0
    for j in range(problem.n):
        if z[j] > 0 and np.isfinite(problem.lb[j]):
            dual_obj += z[j] * problem.lb[j]
        elif z[j] < 0 and np.isfinite(problem.ub[j]):
            dual_obj += z[j] * problem.ub[j]
    gap = abs(obj - dual_obj) / (1.0 + abs(obj))

    return ResidualReport(primal=primal, dual=dual, complementarity=comp, gap=gap)


def _refined_solve(a: np.ndarray, b: np.ndarray, steps: int = 2) -> np.ndarray:
    """LU solve with iterative refinement for componentwise-small residuals."""
    x = np.linalg.solve(a, b)
    for _ in range(steps):
        r = b - a @ x
        if not np.any(r):
            break
        x = x + np.linalg.solve(a, r)
    return x


def _solve_unconstrained(problem: LpProblem) -> LpSolution:
    """Bounds-only problem (no rows): each variable sits at its cheaper bound."""
    x = np.zeros(problem.n)
    for j in range(problem.n):
        lo, hi = problem.lb[j], problem.ub[j]
        if lo > hi:
            return LpSolution(status=STATUS_INFEASIBLE)
        if problem.c[j] > 0:
            if not np.isfinite(lo):
                return LpSolution(status=STATUS_UNBOUNDED)
            x[j] = lo
        elif problem.c[j] < 0:
            if not np.isfinite(hi):
                return LpSolution(status=STATUS_UNBOUNDED)
            x[j] = hi
        else:
            x[j] = lo if np.isfinite(lo) else (hi if np.isfinite(hi) else 0.0)
    sol = LpSolution(
        status=STATUS_OPTIMAL,
        x=x,
        y=np.zeros(0),
        objective=float(problem.c @ x),
        basis=(),
    )
    sol.residuals = verify_kkt(problem, sol)
    return sol


class _Standardizer:
    """Conversion to equality form with nonnegative variables and scaled rows."""

    def __init__(self, problem: LpProblem):
        self.problem = problem
        n, m = problem.n, problem.m
        a = problem.dense()

        # Shift finite lower bounds to zero; split free variables in two.
        self.shift = np.where(np.isfinite(problem.lb), problem.lb, 0.0)
        self.split: list[int] = [j for j in range(n) if not np.isfinite(problem.lb[j])]
        cols = [a[:, j] for j in range(n)] + [-a[:, j] for j in self.split]
        costs = list(problem.c) + [-problem.c[j] for j in self.split]

        rows = [a]
        b = list(problem.b - a @ self.shift)
        senses = list(problem.senses)
        # Finite upper bounds become explicit rows over the shifted variables.
        self.ub_rows: list[int] = []
        for j in range(n):
            if np.isfinite(problem.ub[j]):
                row = np.zeros(len(cols))
                row[j] = 1.0
                if j in self.split:
                    row[n + self.split.index(j)] = -1.0
                rows.append(row.reshape(1, -1))
                b.append(problem.ub[j] - self.shift[j])
                senses.append("le")
                self.ub_rows.append(j)

        a_full = np.zeros((len(b), len(cols)))
        a_full[:m, :n] = a
        for k, j in enumerate(self.split):
            a_full[:m, n + k] = -a[:, j]
        for k, j in enumerate(self.ub_rows):
            a_full[m + k, j] = 1.0
            if j in self.split:
                a_full[m + k, n + self.split.index(j)] = -1.0

        # Row equilibration with powers of two keeps the arithmetic exact.
        self.row_scale = np.ones(len(b))
        for i in range(len(b)):
            mx = np.max(np.abs(a_full[i])) if a_full.shape[1] else 0.0
            if mx > 0:
                self.row_scale[i] = 2.0 ** np.round(np.log2(mx))
        a_full = a_full / self.row_scale[:, None]
        b_arr = np.asarray(b) / self.row_scale

        # Slack columns for inequality rows.
        slack_of_row = {}
        slack_cols = []
        for i, sense in enumerate(senses):
            if sense == "le":
                slack_of_row[i] = len(cols) + len(slack_cols)
                slack_cols.append((i, 1.0))
            elif sense == "ge":
                slack_of_row[i] = len(cols) + len(slack_cols)
                slack_cols.append((i, -1.0))

        n_struct = len(cols)
        n_slack = len(slack_cols)
        self.a_std = np.zeros((len(b), n_struct + n_slack))
        self.a_std[:, :n_struct] = a_full
        for k, (i, sgn) in enumerate(slack_cols):
            self.a_std[i, n_struct + k] = sgn
        self.c_std = np.concatenate([np.asarray(costs, dtype=float), np.zeros(n_slack)])

        # Flip rows so the right-hand side is nonnegative.
        self.flip = np.where(b_arr < 0, -1.0, 1.0)
        self.a_std *= self.flip[:, None]
        self.b_std = b_arr * self.flip

        self.n_orig = n
        self.n_struct = n_struct
        self.m_std = len(b)
        self.m_orig = m
        self.slack_of_row = slack_of_row
        self.slack_sign_after_flip = {
            n_struct + k: sgn * self.flip[i] for k, (i, sgn) in enumerate(slack_cols)
        }

    def recover_x(self, x_std: np.ndarray) -> np.ndarray:
        x = x_std[: self.n_orig].copy()
        for k, j in enumerate(self.split):
            x[j] -= x_std[self.n_orig + k]
        return x + self.shift

    def recover_y(self, y_std: np.ndarray) -> np.ndarray:
        y = y_std * self.flip / self.row_scale
        return y[: self.m_orig]


def solve(problem: LpProblem, options: SolverOptions | None = None) -> LpSolution:
    """Solve the problem with the reference revised simplex.

    Infeasible and unbounded models, iteration-cap timeouts and failed
    residual checks are reported through the solution status, never raised.
    A solve whose final residuals miss the tolerance is retried once with
    conservative settings before numerical failure is reported.
    """
    options = options or SolverOptions()
    for arr in (problem.c, problem.a_vals, problem.b):
        if arr.size and not np.all(np.isfinite(arr)):
            raise ValueError("non-finite coefficients in LP")
    if problem.n == 0:
        feasible = all(
            (s == "le" and bi >= 0) or (s == "ge" and bi <= 0) or (s == "eq" and bi == 0)
            for s, bi in zip(problem.senses, problem.b)
        )
        status = STATUS_OPTIMAL if feasible else STATUS_INFEASIBLE
        sol = LpSolution(status=status)
        if feasible:
            sol.x = np.zeros(0)
            sol.y = np.zeros(problem.m)
            sol.objective = 0.0
            sol.residuals = verify_kkt(problem, sol)
            sol.basis = ()
        return sol
    if problem.m == 0:
        return _solve_unconstrained(problem)

    std = _Standardizer(problem)
    sol = _solve_standardized(problem, std, options)
    if sol.status == STATUS_NUMERICAL:
        cautious = SolverOptions(
            max_iterations=options.max_iterations,
            tol=options.tol,
            feas_tol=options.feas_tol,
            kkt_tol=options.kkt_tol,
            refactor_every=20,
            stall_iterations=40,
        )
        retry = _solve_standardized(problem, std, cautious)
        if retry.status == STATUS_OPTIMAL:
            return retry
        retry.iterations += sol.iterations
        return retry
    return sol


def _solve_standardized(problem: LpProblem, std: "_Standardizer", options: SolverOptions) -> LpSolution:
    core = _SimplexCore(std.a_std, std.b_std, std.c_std, options)
    status, iterations = core.run()

    if status in (STATUS_INFEASIBLE, STATUS_UNBOUNDED, STATUS_TIMEOUT, STATUS_NUMERICAL):
        return LpSolution(status=status, iterations=iterations)

    # Final polish: recompute the basic solution and duals from a fresh
    # factorization of the final basis for maximum accuracy.  The working
    # matrix is used because a redundant row can keep an artificial column
    # basic at zero; such a column pins that row's dual to zero.
    basis = core.basis
    cost_full = np.concatenate([std.c_std, np.zeros(core.a_work.shape[1] - std.c_std.size)])
    b_mat = core.a_work[:, basis]
    try:
        x_basic = _refined_solve(b_mat, std.b_std)
        y_std = _refined_solve(b_mat.T, cost_full[basis])
    except np.linalg.LinAlgError:
        return LpSolution(status=STATUS_NUMERICAL, iterations=iterations)
    np.maximum(x_basic, 0.0, out=x_basic)  # degenerate basics: clamp solve noise
    x_std = np.zeros(std.a_std.shape[1])
    structural = basis < std.a_std.shape[1]
    x_std[basis[structural]] = x_basic[structural]

    sol = LpSolution(
        status=STATUS_OPTIMAL,
        x=std.recover_x(x_std),
        y=std.recover_y(y_std),
        iterations=iterations,
        basis=tuple(int(j) for j in basis),
    )
    sol.objective = float(problem.c @ sol.x)
    sol.residuals = verify_kkt(problem, sol)
    if not sol.residuals.passes(options.kkt_tol):
        sol.status = STATUS_NUMERICAL
    return sol


class _SimplexCore:
    """Two-phase revised simplex on equality form ``A x = b, x >= 0, b >= 0``."""

    def __init__(self, a: np.ndarray, b: np.ndarray, c: np.ndarray, options: SolverOptions):
        self.a = a
        self.b = b
        self.c = c
        self.options = options
        self.m, self.n = a.shape
        self.iterations = 0

    def run(self) -> tuple[str, int]:
        m, n = self.m, self.n
        opts = self.options

        # Initial basis: reuse slack columns where they enter positively,
        # add artificial columns elsewhere.
        basis = np.full(m, -1, dtype=np.int64)
        a_work = self.a
        # Identify usable slack columns (zero-cost unit column with +1 entry).
        col_nnz = (self.a != 0).sum(axis=0)
        for j in range(n):
            if col_nnz[j] == 1:
                i = int(np.argmax(self.a[:, j] != 0))
                if self.a[i, j] == 1.0 and basis[i] == -1 and self.c[j] == 0.0:
                    basis[i] = j
        n_art = int((basis == -1).sum())
        if n_art:
            art = np.zeros((m, n_art))
            k = 0
            for i in range(m):
                if basis[i] == -1:
                    art[i, k] = 1.0
                    basis[i] = n + k
                    k += 1
            a_work = np.concatenate([self.a, art], axis=1)
        self.a_work = a_work
        self.basis = basis
        self.is_artificial = np.zeros(a_work.shape[1], dtype=bool)
        self.is_artificial[n:] = True
        self.allowed = np.ones(a_work.shape[1], dtype=bool)

        self.b_inv = np.eye(m)
        self.x_b = self.b.copy()
        self._refactor()

        feas_scale = max(1.0, float(np.max(np.abs(self.b))) if m else 1.0)

        # Phase 1: minimize the sum of artificial variables.
        if n_art:
            phase1_cost = np.zeros(a_work.shape[1])
            phase1_cost[n:] = 1.0
            status = self._iterate(phase1_cost, phase=1)
            if status is not None:
                return status, self.iterations
            art_mask = self.is_artificial[self.basis]
            infeas = float(self.x_b[art_mask].sum()) if art_mask.any() else 0.0
            if infeas > opts.feas_tol * feas_scale:
                return STATUS_INFEASIBLE, self.iterations
            self._drive_out_artificials()
        self.allowed &= ~self.is_artificial

        # Phase 2: the real objective.  Degenerate churn can leave the final
        # basis dual feasible but slightly primal infeasible (drift hidden by
        # clamping); dual-simplex restoration steps repair that exactly, then
        # pricing resumes until both sides hold.
        cost = np.concatenate([self.c, np.zeros(a_work.shape[1] - n)])
        for _ in range(6):
            status = self._iterate(cost, phase=2)
            if status is not None:
                return status, self.iterations
            feasible, pivoted = self._restore_primal(cost)
            if feasible and not pivoted:
                return STATUS_OPTIMAL, self.iterations
            if not feasible:
                return STATUS_NUMERICAL, self.iterations
        return STATUS_NUMERICAL, self.iterations

    def _refactor(self) -> bool:
        try:
            self.b_inv = np.linalg.inv(self.a_work[:, self.basis])
        except np.linalg.LinAlgError:
            return False
        self.x_b = self.b_inv @ self.b
        return True

    def _drive_out_artificials(self):
        """Pivot basic artificials out wherever a structural pivot exists."""
        tol = 1e-7
        for pos in range(self.m):
            if not self.is_artificial[self.basis[pos]]:
                continue
            row = self.b_inv[pos] @ self.a_work
            candidates = np.nonzero(
                (np.abs(row) > tol) & self.allowed & ~self.is_artificial
            )[0]
            candidates = [j for j in candidates if j not in set(self.basis.tolist())]
            if not candidates:
                continue  # redundant row; artificial stays basic at zero
            j = int(candidates[0])
            d = self.b_inv @ self.a_work[:, j]
            self._pivot(pos, j, d)

    def _pivot(self, row: int, col: int, d: np.ndarray, clamp: bool = True):
        piv = d[row]
        leaving = self.basis[row]
        if self.is_artificial[leaving]:
            self.allowed[leaving] = False
        theta = self.x_b[row] / piv
        self.x_b -= theta * d
        self.x_b[row] = theta
        if clamp:
            np.maximum(self.x_b, 0.0, out=self.x_b)
        row_r = self.b_inv[row].copy()
        self.b_inv -= (d / piv)[:, None] * row_r
        self.b_inv[row] = row_r / piv
        self.basis[row] = col

    def _restore_primal(self, cost: np.ndarray) -> tuple[bool, bool]:
        """Repair exact primal infeasibility of a priced-optimal basis.

        Refactorizes without clamping, then runs dual-simplex steps (leaving:
        most negative basic; entering: dual ratio test, which preserves the
        nonnegative reduced costs pricing just established) until the exact
        basic solution is feasible.  Returns (feasible, pivoted).
        """
        if not self._refactor():
            return False, False
        self.x_b = _refined_solve(self.a_work[:, self.basis], self.b)
        # Negativity below the solution-scale noise floor is genuine basis
        # infeasibility left by degenerate churn; anything shallower is solve
        # noise the final clamp absorbs.
        scale = 1.0 + (float(np.max(np.abs(self.x_b))) if self.m else 0.0)
        pivoted = False
        for _ in range(200):
            row = int(np.argmin(self.x_b))
            value = float(self.x_b[row])
            if value >= -1e-8 * scale:
                np.maximum(self.x_b, 0.0, out=self.x_b)
                return True, pivoted
            y = cost[self.basis] @ self.b_inv
            z = cost - y @ self.a_work
            row_r = self.b_inv[row] @ self.a_work
            eligible = (row_r < -1e-9) & self.allowed
            eligible[self.basis] = False
            cand = np.nonzero(eligible)[0]
            if cand.size == 0:
                if value >= -1e-7 * scale:  # borderline noise; leave to the clamp
                    np.maximum(self.x_b, 0.0, out=self.x_b)
                    return True, pivoted
                return False, pivoted
            ratios = np.maximum(z[cand], 0.0) / (-row_r[cand])
            best = float(ratios.min())
            tie = cand[ratios <= best + 1e-12 * (1.0 + abs(best))]
            j = int(tie.min())
            d = self.b_inv @ self.a_work[:, j]
            self._pivot(row, j, d, clamp=False)
            pivoted = True
        return False, pivoted

    def _iterate(self, cost: np.ndarray, phase: int) -> str | None:
        opts = self.options
        tol = opts.tol
        # Pricing is normalized per column so the stopping rule matches the
        # relative reduced-cost criterion the KKT verifier applies; a second,
        # dual-scale term filters out roundoff noise of order |y|.|A_j| that
        # would otherwise admit degenerate zero-cost rays as "improving".
        denom = 1.0 + np.abs(cost)
        abs_a = np.abs(self.a_work)
        bland = False
        stall = 0
        best_obj = np.inf
        since_refactor = 0
        since_noise = 999
        noise = None
        ray_verified = False
        banned = np.zeros(self.a_work.shape[1], dtype=bool)
        in_basis = np.zeros(self.a_work.shape[1], dtype=bool)
        in_basis[self.basis] = True

        while True:
            if self.iterations >= opts.max_iterations:
                return STATUS_TIMEOUT
            self.iterations += 1
            since_refactor += 1
            if since_refactor >= opts.refactor_every:
                if not self._refactor():
                    return STATUS_NUMERICAL
                np.maximum(self.x_b, 0.0, out=self.x_b)
                since_refactor = 0
                banned[:] = False

            y = cost[self.basis] @ self.b_inv
            # The noise floor |y|.|A_j| drifts slowly; refreshing it every few
            # iterations halves the pricing cost without affecting the rule.
            since_noise += 1
            if since_noise >= 16 or noise is None:
                noise = np.abs(y) @ abs_a
                thr = tol * denom + 1e-12 * (1.0 + noise)
                since_noise = 0
            z = cost - y @ self.a_work
            score = (z + thr) / denom  # eligible iff score < 0
            score[~self.allowed] = np.inf
            score[in_basis] = np.inf
            score[banned] = np.inf

            if bland:
                neg = np.nonzero(score < 0.0)[0]
                if neg.size == 0:
                    if since_noise:  # confirm with a fresh noise floor
                        since_noise = 999
                        continue
                    return None
                j = int(neg[0])
            else:
                j = int(np.argmin(score))
                if score[j] >= 0.0:
                    if since_noise:
                        since_noise = 999
                        continue
                    return None

            d = self.b_inv @ self.a_work[:, j]
            pos = np.nonzero(d > tol)[0]
            if pos.size == 0:
                # Rule out factorization drift before declaring unboundedness.
                if not ray_verified:
                    if not self._refactor():
                        return STATUS_NUMERICAL
                    np.maximum(self.x_b, 0.0, out=self.x_b)
                    since_refactor = 0
                    since_noise = 999
                    banned[:] = False
                    ray_verified = True
                    continue
                # Fresh factorization and still no blocking row: re-price this
                # column accurately; a vanishing reduced cost marks a harmless
                # degenerate ray, not an unbounded direction.
                y_acc = _refined_solve(self.a_work[:, self.basis].T, cost[self.basis])
                z_acc = cost[j] - float(y_acc @ self.a_work[:, j])
                noise_j = 1.0 + float(np.abs(y_acc) @ abs_a[:, j])
                if z_acc >= -(tol * denom[j] + 1e-9 * noise_j):
                    banned[j] = True
                    ray_verified = False
                    continue
                return STATUS_UNBOUNDED if phase == 2 else STATUS_NUMERICAL
            ray_verified = False
            ratios = self.x_b[pos] / d[pos]
            theta = float(ratios.min())
            tie = pos[ratios <= theta + 1e-9 * (1.0 + abs(theta))]
            if bland:
                row = int(tie[np.argmin(self.basis[tie])])
            else:
                # Prefer a well-sized pivot among (near-)tied ratios; tiny
                # pivots degrade the basis conditioning under degeneracy.
                solid = tie[d[tie] >= 1e-7]
                pick = solid if solid.size else tie
                row = int(pick[np.argmax(d[pick])])

            in_basis[self.basis[row]] = False
            in_basis[j] = True
            self._pivot(row, j, d)

            stall += 1
            if stall % 4 == 0 or stall > opts.stall_iterations:
                obj = float(cost[self.basis] @ self.x_b)
                if obj < best_obj - tol * (1.0 + abs(best_obj)):
                    best_obj = obj
                    stall = 0
                    bland = False
                elif stall > opts.stall_iterations:
                    bland = True
