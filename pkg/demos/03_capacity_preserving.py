"""Minimum capacity-preserving subgraphs via branch-and-cut.

Keep as few connections as possible while every ordered vertex pair retains
at least a rho-fraction of its full-network min-cut value.  The cut family is
exponential, so constraints are generated lazily from max-flow separations.
"""
from fractions import Fraction

from greente import build_network
from greente.mcps import (
    make_instance,
    precompute_lower_bounds,
    separate_cuts,
    solve_mcps,
)

# A single link with five connections: how many survive depends on rho.
single = build_network([(0, 1, 1, 1, 5)])
for rho in (Fraction(3, 10), Fraction(1, 2), Fraction(7, 10)):
    result = solve_mcps(single, rho)
    print(f"single link, rho={rho}: keep {result.value} of 5 connections")

# Preprocessing bounds: retaining fewer than ceil(rho * 5) connections on the
# only s-t route already breaks the pair, so the solver never explores it.
inst = make_instance(single, Fraction(1, 2))
bounds, satisfied = precompute_lower_bounds(inst)
print("per-arc lower bounds:", bounds, "- pairs settled by them:", sorted(satisfied))

# Separation in action: at the all-zero point the pair (0,1) is short of its
# target, and the front/back cuts coincide on the only arc.
cuts = separate_cuts(inst, {0: Fraction(0)}, [(0, 1)])
for cut in cuts:
    print("violated cut:", sorted(cut.arc_ids), "needs capacity >=", cut.rhs)

# A full-duplex two-link chain: activation counts stay symmetric per link.
chain = build_network(
    [(0, 1, 2, 1, 2), (1, 0, 2, 1, 2), (1, 2, 1, 1, 2), (2, 1, 1, 1, 2)],
    duplex_mode="full-duplex",
)
result = solve_mcps(chain, Fraction(1, 2))
print("duplex chain activation:", result.activation.counts, "total", result.value)
