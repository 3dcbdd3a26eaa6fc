"""
A walk through the dynamic forest
=================================

Each tree edge stores how much flow it can still take in each direction.
"""

from fractions import Fraction as F

from flowround.linkcut import DynTree, TreeEdge

# a path 0 - 1 - 2 - 3; payloads are (room going down, room coming back)
tree = DynTree(4)
tree.link(0, 1, TreeEdge(0, F(3, 10), F(7, 10)))
tree.link(1, 2, TreeEdge(1, F(1, 2), F(1, 2)))
tree.link(2, 3, TreeEdge(2, F(3, 10), F(7, 10)))

# the tightest edge on 0->3; ties go to the edge nearest the start
print("min 0->3:", tree.path_min(0, 3))
print("min 3->0:", tree.path_min(3, 0))

# one query gives both directions at once
print(tree.path_summary(0, 3))

# push the bottleneck amount; the first tight edge is now saturated
edge, room = tree.path_min(0, 3)
tree.path_add(0, 3, room)
print("after push:", [tree.edge_payload(e) for e in tree.edge_ids()])

# cut it and the path falls apart
print("cut:", tree.cut_edge(edge))
print("0 and 3 connected?", tree.connected(0, 3))
print("operations so far:", tree.ops, "rotations:", tree.rotations)
