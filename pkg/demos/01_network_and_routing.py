"""Networks, deterministic shortest-path routing, and link utilization.

Every solver in this package shares one data model: a directed graph whose
arcs carry `mu` independently switchable connections of `ccap` capacity units
each, a traffic matrix of exact-rational demands, and an activation vector
saying how many connections stay on per arc.
"""
from fractions import Fraction

from greente import (
    Activation,
    TrafficMatrix,
    build_network,
    full_activation,
    is_spr_routable,
    k_shortest_paths,
    mlu,
    shortest_path_unique,
    spr_route,
)

# A triangle: a short thin arc s->v against a fat two-hop detour s->u->v.
# Specs are (tail, head, ccap, length, mu).
net = build_network([
    (0, 2, 1, 1, 3),   # arc 0: direct, 3 connections of capacity 1
    (0, 1, 3, 1, 1),   # arc 1: detour, 1 connection of capacity 3
    (1, 2, 3, 1, 1),   # arc 2
])
traffic = TrafficMatrix({(0, 2): 3})

print("full activation:", full_activation(net).counts)

# Shortest paths are unique by construction: ties in length break on hop
# count, then on the lexicographic arc-id sequence.
path = shortest_path_unique(net, full_activation(net), 0, 2)
print("shortest path with everything on:", path.arcs, "length", path.length)

for p in k_shortest_paths(net, 0, 2, 5):
    print("candidate route:", p.arcs, "length", p.length)

# Routing follows the unique shortest path of the *active* subnetwork, so
# deactivating the direct arc reroutes the demand over the detour.
routed = spr_route(net, full_activation(net), traffic)
print("loads, all on:", {a: str(v) for a, v in routed.load.items()})

dimmed = Activation((0, 1, 1))  # direct arc fully off
routed = spr_route(net, dimmed, traffic)
print("loads, direct off:", {a: str(v) for a, v in routed.load.items()})

print("routable with direct off?", is_spr_routable(net, dimmed, traffic))
print("utilization with direct off:", mlu(net, dimmed, traffic))
print("utilization fully on:", mlu(net, full_activation(net), traffic))

# Utilization is exact rational arithmetic end to end.
assert mlu(net, dimmed, traffic) == Fraction(1)
