"""Max-flow with early termination, and front/back minimum cuts.

The capacity-preserving solver separates violated constraints by running
max-flows on fractional LP points, stopping as soon as a retention target is
met, and reading two minimum cuts out of the residual graph when it is not.
"""
from fractions import Fraction

from greente import build_network, extract_cut, max_flow, all_pairs_maxflow

# Diamond: two arc-disjoint unit routes from s=0 to t=3.
net = build_network([
    (0, 1, 1, 1, 1),
    (0, 2, 1, 1, 1),
    (1, 3, 1, 1, 1),
    (2, 3, 1, 1, 1),
])
caps = {a.id: Fraction(1) for a in net.arcs}

flow = max_flow(net, caps, 0, 3)
print("max flow:", flow.value)

# Early termination: stop as soon as one unit is routed.
partial = max_flow(net, caps, 0, 3, target=1)
print("early stop at:", partial.value, "early?", partial.terminated_early)

# The front cut hugs the source, the back cut hugs the sink; both are exact
# minimum cuts (their capacity equals the flow value).
front = extract_cut(net, caps, flow, 0, 3, "front")
back = extract_cut(net, caps, flow, 0, 3, "back")
print("front cut:", sorted(front.arc_ids), "capacity", front.capacity)
print("back cut: ", sorted(back.arc_ids), "capacity", back.capacity)

# On a path the two cuts differ:
line = build_network([(0, 1, 1, 1, 1), (1, 2, 1, 1, 1)])
lcaps = {0: Fraction(1), 1: Fraction(1)}
lflow = max_flow(line, lcaps, 0, 2)
print("line front:", sorted(extract_cut(line, lcaps, lflow, 0, 2, "front").arc_ids))
print("line back: ", sorted(extract_cut(line, lcaps, lflow, 0, 2, "back").arc_ids))

# All-pairs min-cut values at full capacity feed the retention targets.
lam = all_pairs_maxflow(net)
print("lambda(0,3) =", lam[(0, 3)], " lambda(1,2) =", lam[(1, 2)])
