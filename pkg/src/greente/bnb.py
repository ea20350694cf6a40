"""Exact branch-and-bound driver over an LpModel with callback hooks.

At every node the price callback runs until it adds no more columns, then the
separation callback until it adds no more rows, before any branching.  Rows
and columns added by callbacks must be globally valid: they stay in the
shared model for the rest of the search.
"""
from __future__ import annotations

import heapq
import math
import time
from dataclasses import dataclass, field
from typing import Callable

from .lp import LpModel, LpSolution, solve_lp

INT_TOL = 1e-6


class IncumbentRejected(RuntimeError):
    """An integral node passed all callbacks yet the incumbent filter said no."""


@dataclass
class BnbConfig:
    integrality_tol: float = INT_TOL
    time_limit: float | None = None
    node_limit: int | None = None
    mode: str = "float"
    objective_integral: bool = False
    price: Callable[[LpModel, LpSolution], list[int]] | None = None
    separate: Callable[[LpModel, LpSolution], list[int]] | None = None
    accept_incumbent: Callable[[LpSolution], bool] | None = None
    branch_select: Callable[[LpSolution, list[int]], int] | None = None
    initial_incumbent: tuple[object, dict] | None = None  # (value, primal)
    # called when a node relaxation is infeasible; returning new column ids
    # re-solves instead of pruning (restricted masters can be infeasible even
    # though the full column set is not)
    infeasibility_price: Callable[[LpModel], list[int]] | None = None


@dataclass
class BnbResult:
    status: str  # optimal | feasibleTimeout | infeasible | timeout
    incumbent: LpSolution | None
    bound: object
    nodes: int = 0
    bound_history: list = field(default_factory=list)


def _frac_dist(v) -> float:
    return abs(float(v) - round(float(v)))


def branch_and_bound(model: LpModel, integer_columns, config: BnbConfig) -> BnbResult:
    """Exact optimum over integer assignments of ``integer_columns``."""
    integer_columns = list(integer_columns)
    tol = config.integrality_tol
    start = time.perf_counter()
    deadline = None if config.time_limit is None else start + config.time_limit

    incumbent: LpSolution | None = None
    incumbent_value = math.inf
    if config.initial_incumbent is not None:
        value, primal = config.initial_incumbent
        incumbent = LpSolution("optimal", dict(primal), {}, value)
        incumbent_value = float(value)

    def prunable(bound) -> bool:
        if incumbent is None:
            return False
        b = float(bound)
        if math.isinf(b):
            return b > 0
        if config.objective_integral:
            return math.ceil(b - tol) >= incumbent_value - 1e-9
        return b >= incumbent_value - 1e-9 * (1 + abs(incumbent_value))

    # nodes: (bound estimate, seq, {col: (lb, ub)})
    seq = 0
    open_nodes: list[tuple[float, int, dict]] = [(-math.inf, seq, {})]
    nodes_done = 0
    history: list[float] = []
    last_bound = -math.inf

    def record_bound():
        nonlocal last_bound
        current = open_nodes[0][0] if open_nodes else incumbent_value
        current = max(last_bound, current)
        last_bound = current
        history.append(current)

    def finish(status: str) -> BnbResult:
        if open_nodes:
            bound = max(last_bound, open_nodes[0][0])
        else:
            bound = incumbent_value if incumbent is not None else math.inf
        return BnbResult(status, incumbent, bound, nodes_done, history)

    while open_nodes:
        if deadline is not None and time.perf_counter() > deadline:
            return finish("feasibleTimeout" if incumbent is not None else "timeout")
        if config.node_limit is not None and nodes_done >= config.node_limit:
            return finish("feasibleTimeout" if incumbent is not None else "timeout")
        bound_est, _, overrides = heapq.heappop(open_nodes)
        if prunable(bound_est):
            continue
        saved = {col: model.bounds(col) for col in overrides}
        for col, (lo, hi) in overrides.items():
            model.set_bounds(col, lo, hi)
        try:
            sol = None
            aborted = False
            while True:
                sol = solve_lp(model, config.mode)
                if sol.status == "infeasible" and config.infeasibility_price is not None:
                    if config.infeasibility_price(model):
                        continue
                if sol.status != "optimal":
                    break
                if deadline is not None and time.perf_counter() > deadline:
                    aborted = True
                    break
                if config.price is not None and config.price(model, sol):
                    continue
                if config.separate is not None and config.separate(model, sol):
                    continue
                break
            if aborted:
                seq += 1
                heapq.heappush(open_nodes, (bound_est, seq, overrides))
                return finish("feasibleTimeout" if incumbent is not None else "timeout")
            nodes_done += 1
            if sol.status == "unbounded":
                raise RuntimeError("node relaxation is unbounded")
            if sol.status != "optimal":
                record_bound()
                continue
            node_bound = max(float(bound_est), float(sol.objective))
            if prunable(node_bound):
                record_bound()
                continue
            fractional = [
                j for j in integer_columns if _frac_dist(sol.primal[j]) > tol
            ]
            if not fractional:
                ok = True
                if config.accept_incumbent is not None:
                    ok = config.accept_incumbent(sol)
                if not ok:
                    raise IncumbentRejected(
                        "integral node rejected with no remaining refinement"
                    )
                if float(sol.objective) < incumbent_value - 1e-12:
                    incumbent = LpSolution(
                        "optimal", dict(sol.primal), dict(sol.dual), sol.objective
                    )
                    incumbent_value = float(sol.objective)
                record_bound()
                continue
            if config.branch_select is not None:
                col = config.branch_select(sol, fractional)
            else:
                col = max(fractional, key=lambda j: (_frac_dist(sol.primal[j]), -j))
            x = float(sol.primal[col])
            lo, hi = overrides.get(col, model.bounds(col))
            down = dict(overrides)
            down[col] = (lo, math.floor(x + tol))
            up = dict(overrides)
            up[col] = (math.ceil(x - tol), hi)
            for child in (down, up):
                seq += 1
                heapq.heappush(open_nodes, (node_bound, seq, child))
            record_bound()
        finally:
            for col, (lo, hi) in saved.items():
                model.set_bounds(col, lo, hi)

    if incumbent is not None:
        return BnbResult("optimal", incumbent, incumbent.objective, nodes_done, history)
    return BnbResult("infeasible", None, math.inf, nodes_done, history)
