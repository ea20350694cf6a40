"""LP substrate: row/column models solved to optimality with duals.

Two interchangeable backends sit behind one model type:

* ``exact`` -- a bounded-variable two-phase revised simplex over rationals
  (gmpy2.mpq when available).  Deterministic, exact duals, meant for small
  fixtures where values like 17/2 must come out exactly.
* ``float`` -- scipy's HiGHS simplex for larger models.

Dual sign convention: a >=-row of a minimization has a nonnegative dual, a
<=-row a nonpositive one.  Every solve is audited for weak duality.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

import numpy as np
from scipy.optimize import linprog
from scipy.sparse import csr_matrix

try:
    from gmpy2 import mpq as _Q
except ImportError:  # pragma: no cover
    _Q = Fraction

LE, GE, EQ = "<=", ">=", "="

FEAS_TOL = 1e-9
INT_TOL = 1e-6


class NumericalFailure(RuntimeError):
    pass


class BadReference(ValueError):
    pass


@dataclass
class LpModel:
    """Minimization LP built incrementally from columns and rows."""

    name: str = "lp"
    objective: list = field(default_factory=list)
    lower: list = field(default_factory=list)
    upper: list = field(default_factory=list)  # None = +inf
    col_names: list = field(default_factory=list)
    row_coefs: list = field(default_factory=list)  # dict col -> coef
    senses: list = field(default_factory=list)
    rhs: list = field(default_factory=list)
    row_names: list = field(default_factory=list)

    @property
    def n_cols(self) -> int:
        return len(self.objective)

    @property
    def n_rows(self) -> int:
        return len(self.rhs)

    def add_column(self, obj=0, lb=0, ub=None, coefs: Mapping | None = None, name: str = "") -> int:
        """New column; ``coefs`` maps existing row ids to coefficients."""
        j = self.n_cols
        self.objective.append(obj)
        if lb is not None and ub is not None and lb > ub:
            raise ValueError(f"inconsistent bounds [{lb},{ub}] on column {name or j}")
        self.lower.append(lb)
        self.upper.append(ub)
        self.col_names.append(name or f"c{j}")
        if coefs:
            for i, v in coefs.items():
                if not 0 <= i < self.n_rows:
                    raise BadReference(f"row {i} does not exist")
                if v != 0:
                    self.row_coefs[i][j] = v
        return j

    def add_row(self, coefs: Mapping, sense: str, rhs, name: str = "") -> int:
        if sense not in (LE, GE, EQ):
            raise ValueError(f"unknown sense {sense!r}")
        clean = {}
        for j, v in coefs.items():
            if not 0 <= j < self.n_cols:
                raise BadReference(f"column {j} does not exist")
            if v != 0:
                clean[j] = v
        i = self.n_rows
        self.row_coefs.append(clean)
        self.senses.append(sense)
        self.rhs.append(rhs)
        self.row_names.append(name or f"r{i}")
        return i

    def set_bounds(self, col: int, lb, ub) -> None:
        if not 0 <= col < self.n_cols:
            raise BadReference(f"column {col} does not exist")
        self.lower[col] = lb
        self.upper[col] = ub

    def bounds(self, col: int):
        return self.lower[col], self.upper[col]


@dataclass
class LpSolution:
    status: str  # optimal | infeasible | unbounded
    primal: dict[int, object] = field(default_factory=dict)
    dual: dict[int, object] = field(default_factory=dict)
    objective: object = None

    def col_value(self, j: int):
        return self.primal.get(j, 0)


def export_lp_text(model: LpModel) -> str:
    """Plain-text rendering of a model (objective, rows, bounds) for debugging."""
    def term(coef, name):
        coef = Fraction(coef) if not isinstance(coef, float) else coef
        sign = "+" if coef >= 0 else "-"
        return f"{sign} {abs(coef)} {name}"

    lines = [f"\\ model {model.name}", "Minimize"]
    obj = " ".join(term(c, model.col_names[j]) for j, c in enumerate(model.objective) if c != 0)
    lines.append(" obj: " + (obj or "0"))
    lines.append("Subject To")
    for i in range(model.n_rows):
        body = " ".join(term(v, model.col_names[j]) for j, v in sorted(model.row_coefs[i].items()))
        lines.append(f" {model.row_names[i]}: {body or '0'} {model.senses[i]} {model.rhs[i]}")
    lines.append("Bounds")
    for j in range(model.n_cols):
        lo = "-inf" if model.lower[j] is None else model.lower[j]
        hi = "+inf" if model.upper[j] is None else model.upper[j]
        lines.append(f" {lo} <= {model.col_names[j]} <= {hi}")
    lines.append("End")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# exact backend: bounded-variable two-phase revised simplex
# ---------------------------------------------------------------------------

_BLAND_AFTER = 400


class _ExactSimplex:
    """Dense-inverse revised simplex over exact rationals.

    Columns = structurals, then one slack per row, then one artificial per
    row.  Phase 1 minimizes the artificial sum from the all-artificial basis;
    phase 2 restores true costs with artificials fixed to zero.  Dantzig
    pricing with a Bland fallback guarantees termination.
    """

    def __init__(self, model: LpModel):
        n, m = model.n_cols, model.n_rows
        self.n, self.m = n, m
        self.total = n + 2 * m
        q = lambda v: _Q(v) if not isinstance(v, float) else _Q(Fraction(v))
        self.cost = [q(c) for c in model.objective] + [_Q(0)] * (2 * m)
        self.lb: list = [None if v is None else q(v) for v in model.lower]
        self.ub: list = [None if v is None else q(v) for v in model.upper]
        self.b = [q(v) for v in model.rhs]
        # column-sparse matrix: structural columns from the row dicts
        cols: list[list[tuple[int, object]]] = [[] for _ in range(self.total)]
        for i in range(m):
            for j, v in model.row_coefs[i].items():
                cols[j].append((i, q(v)))
        for i, sense in enumerate(model.senses):
            sj = n + i
            cols[sj] = [(i, _Q(1))]
            if sense == LE:
                self.lb.append(_Q(0)); self.ub.append(None)
            elif sense == GE:
                self.lb.append(None); self.ub.append(_Q(0))
            else:
                self.lb.append(_Q(0)); self.ub.append(_Q(0))
        self.art0 = n + m
        for i in range(m):
            cols[self.art0 + i] = [(i, _Q(1))]  # sign fixed in solve()
            self.lb.append(_Q(0)); self.ub.append(None)
        self.cols = cols

    def solve(self) -> tuple[str, list, list, object]:
        n, m = self.n, self.m
        # nonbasic start: every non-artificial column at a finite bound
        self.status = []
        self.value = []
        for j in range(self.art0):
            lo, hi = self.lb[j], self.ub[j]
            if lo is not None:
                self.status.append("L"); self.value.append(lo)
            elif hi is not None:
                self.status.append("U"); self.value.append(hi)
            else:
                self.status.append("F"); self.value.append(_Q(0))
        resid = list(self.b)
        for j in range(self.art0):
            v = self.value[j]
            if v != 0:
                for i, a in self.cols[j]:
                    resid[i] -= a * v
        # artificial basis with signs matching the residuals
        self.basis = []
        self.xb = []
        self.binv = [[_Q(0)] * m for _ in range(m)]
        for i in range(m):
            sigma = _Q(1) if resid[i] >= 0 else _Q(-1)
            self.cols[self.art0 + i] = [(i, sigma)]
            self.basis.append(self.art0 + i)
            self.xb.append(abs(resid[i]))
            self.binv[i][i] = sigma
            self.status.append("B"); self.value.append(abs(resid[i]))
        self.in_basis = [False] * self.total
        for j in self.basis:
            self.in_basis[j] = True

        phase1 = [_Q(0)] * self.art0 + [_Q(1)] * m
        res = self._iterate(phase1, phase=1)
        if res == "unbounded":  # pragma: no cover - phase 1 is bounded below
            raise NumericalFailure("phase 1 reported unbounded")
        if sum((self.xb[i] for i in range(m) if self.basis[i] >= self.art0), _Q(0)) > 0:
            return "infeasible", [], [], None
        for i in range(m):  # artificials pinned at zero for phase 2
            self.ub[self.art0 + i] = _Q(0)
        res = self._iterate(self.cost, phase=2)
        if res == "unbounded":
            return "unbounded", [], [], None
        primal = [self._col_value(j) for j in range(n)]
        y = self._duals(self.cost)
        objective = sum((self.cost[j] * primal[j] for j in range(n)), _Q(0))
        return "optimal", primal, y, objective

    def _col_value(self, j):
        if self.in_basis[j]:
            return self.xb[self.basis.index(j)]
        return self.value[j]

    def _duals(self, cost):
        m = self.m
        y = [_Q(0)] * m
        for r in range(m):
            cb = cost[self.basis[r]]
            if cb != 0:
                row = self.binv[r]
                for i in range(m):
                    if row[i] != 0:
                        y[i] += cb * row[i]
        return y

    def _iterate(self, cost, phase: int) -> str:
        m = self.m
        iters = 0
        while True:
            iters += 1
            if iters > 200_000:
                raise NumericalFailure("simplex iteration limit exceeded")
            bland = iters > _BLAND_AFTER
            if phase == 1 and all(
                self.xb[i] == 0 or self.basis[i] < self.art0 for i in range(m)
            ):
                return "optimal"
            y = self._duals(cost)
            enter, direction, best = -1, 0, _Q(0)
            for j in range(self.total):
                if self.in_basis[j]:
                    continue
                lo, hi = self.lb[j], self.ub[j]
                if lo is not None and hi is not None and lo == hi:
                    continue
                rc = cost[j]
                for i, a in self.cols[j]:
                    rc -= y[i] * a
                st = self.status[j]
                if st == "L" and rc < 0:
                    cand, d = -rc, 1
                elif st == "U" and rc > 0:
                    cand, d = rc, -1
                elif st == "F" and rc != 0:
                    cand, d = abs(rc), (1 if rc < 0 else -1)
                else:
                    continue
                if bland:
                    enter, direction = j, d
                    break
                if cand > best:
                    best, enter, direction = cand, j, d
            if enter < 0:
                return "optimal"
            # direction of basic change: x_B -= sigma * d * t
            dvec = [_Q(0)] * m
            for i, a in self.cols[enter]:
                if a != 0:
                    for r in range(m):
                        brv = self.binv[r][i]
                        if brv != 0:
                            dvec[r] += a * brv
            sigma = direction
            lo_e, hi_e = self.lb[enter], self.ub[enter]
            span = None
            if lo_e is not None and hi_e is not None:
                span = hi_e - lo_e
            t_best, blocker, leave_to = span, -1, ""
            for r in range(m):
                g = -sigma * dvec[r]
                if g > 0:
                    hb = self.ub[self.basis[r]]
                    if hb is None:
                        continue
                    lim = (hb - self.xb[r]) / g
                    side = "U"
                elif g < 0:
                    lb_ = self.lb[self.basis[r]]
                    if lb_ is None:
                        continue
                    lim = (self.xb[r] - lb_) / (-g)
                    side = "L"
                else:
                    continue
                if (
                    t_best is None
                    or lim < t_best
                    or (lim == t_best and (blocker < 0 or self.basis[r] < self.basis[blocker]))
                ):
                    t_best, blocker, leave_to = lim, r, side
            if t_best is None:
                return "unbounded"
            if t_best > 0:
                for r in range(m):
                    if dvec[r] != 0:
                        self.xb[r] -= sigma * dvec[r] * t_best
                self.value[enter] = self.value[enter] + sigma * t_best
            if blocker < 0:  # bound flip: entering hit its other bound
                self.status[enter] = "U" if self.status[enter] == "L" else "L"
                continue
            leaving = self.basis[blocker]
            self.status[leaving] = leave_to
            self.value[leaving] = self.lb[leaving] if leave_to == "L" else self.ub[leaving]
            self.in_basis[leaving] = False
            piv = dvec[blocker]
            prow = self.binv[blocker]
            inv_piv = _Q(1) / piv
            self.binv[blocker] = [v * inv_piv for v in prow]
            prow = self.binv[blocker]
            for r in range(m):
                if r != blocker and dvec[r] != 0:
                    f = dvec[r]
                    row = self.binv[r]
                    for i in range(m):
                        if prow[i] != 0:
                            row[i] -= f * prow[i]
            self.basis[blocker] = enter
            self.xb[blocker] = self.value[enter]
            self.in_basis[enter] = True
            self.status[enter] = "B"


def _to_fraction(v) -> Fraction:
    return Fraction(v.numerator, v.denominator) if not isinstance(v, Fraction) else v


def _solve_exact(model: LpModel) -> LpSolution:
    status, primal, y, obj = _ExactSimplex(model).solve()
    if status != "optimal":
        return LpSolution(status)
    primal_f = {j: _to_fraction(v) for j, v in enumerate(primal)}
    dual_f = {i: _to_fraction(v) for i, v in enumerate(y)}
    sol = LpSolution("optimal", primal_f, dual_f, _to_fraction(obj))
    _audit_weak_duality(model, sol, exact=True)
    return sol


# ---------------------------------------------------------------------------
# float backend: scipy / HiGHS
# ---------------------------------------------------------------------------


def _solve_float(model: LpModel) -> LpSolution:
    n = model.n_cols
    c = np.array([float(v) for v in model.objective])
    bounds = [
        (None if lo is None else float(lo), None if hi is None else float(hi))
        for lo, hi in zip(model.lower, model.upper)
    ]
    ub_rows, ub_rhs, ub_sign, eq_rows, eq_rhs = [], [], [], [], []
    row_map: list[tuple[str, int]] = []
    for i in range(model.n_rows):
        coefs, sense, rhs = model.row_coefs[i], model.senses[i], float(model.rhs[i])
        if sense == EQ:
            row_map.append(("eq", len(eq_rows)))
            eq_rows.append(coefs)
            eq_rhs.append(rhs)
        else:
            sign = 1.0 if sense == LE else -1.0
            row_map.append(("ub", len(ub_rows)))
            ub_rows.append(coefs)
            ub_rhs.append(sign * rhs)
            ub_sign.append(sign)

    def sparse(rows, signs=None):
        data, indices, indptr = [], [], [0]
        for k, coefs in enumerate(rows):
            s = 1.0 if signs is None else signs[k]
            for j, v in sorted(coefs.items()):
                indices.append(j)
                data.append(s * float(v))
            indptr.append(len(data))
        return csr_matrix((data, indices, indptr), shape=(len(rows), n))

    kwargs = {}
    if ub_rows:
        kwargs["A_ub"] = sparse(ub_rows, ub_sign)
        kwargs["b_ub"] = np.array(ub_rhs)
    if eq_rows:
        kwargs["A_eq"] = sparse(eq_rows)
        kwargs["b_eq"] = np.array(eq_rhs)
    res = linprog(c, bounds=bounds, method="highs", **kwargs)
    if res.status == 2:
        return LpSolution("infeasible")
    if res.status == 3:
        return LpSolution("unbounded")
    if res.status != 0:
        raise NumericalFailure(f"LP solver failed: {res.message}")
    primal = {j: float(res.x[j]) for j in range(n)}
    dual: dict[int, float] = {}
    for i, (kind, k) in enumerate(row_map):
        if kind == "eq":
            dual[i] = float(res.eqlin.marginals[k])
        else:
            marg = float(res.ineqlin.marginals[k])
            dual[i] = marg if model.senses[i] == LE else -marg
    sol = LpSolution("optimal", primal, dual, float(res.fun))
    _audit_weak_duality(model, sol, exact=False)
    return sol


def _audit_weak_duality(model: LpModel, sol: LpSolution, exact: bool) -> None:
    """dual objective <= primal objective for a minimization, every solve."""
    if exact:
        zero, tol = Fraction(0), Fraction(0)
    else:
        zero, tol = 0.0, 1e-7
    dual_obj = zero
    for i in range(model.n_rows):
        y = sol.dual.get(i, zero)
        if y:
            dual_obj += y * (Fraction(model.rhs[i]) if exact else float(model.rhs[i]))
    rc = {j: (Fraction(model.objective[j]) if exact else float(model.objective[j])) for j in range(model.n_cols)}
    for i in range(model.n_rows):
        y = sol.dual.get(i, zero)
        if not y:
            continue
        for j, a in model.row_coefs[i].items():
            rc[j] -= y * (Fraction(a) if exact else float(a))
    for j, r in rc.items():
        if not exact and abs(r) <= 1e-7:
            continue
        if r > zero:
            lo = model.lower[j]
            if lo is not None:
                dual_obj += r * (Fraction(lo) if exact else float(lo))
        elif r < zero:
            hi = model.upper[j]
            if hi is not None:
                dual_obj += r * (Fraction(hi) if exact else float(hi))
    primal_obj = sol.objective
    slack = tol * (1 + abs(primal_obj)) if not exact else 0
    if dual_obj > primal_obj + slack:
        raise NumericalFailure(
            f"weak duality violated: dual {dual_obj} > primal {primal_obj}"
        )


def solve_lp(model: LpModel, mode: str = "float") -> LpSolution:
    """Solve to a basic optimum with duals; deterministic given equal models."""
    if mode == "exact":
        return _solve_exact(model)
    if mode == "float":
        return _solve_float(model)
    raise ValueError(f"unknown mode {mode!r}")
