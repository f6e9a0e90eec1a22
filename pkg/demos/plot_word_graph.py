"""
How tree-like is the word graph?
================================

Balls of growing radius around ``RL`` and their four-point delta.  Distances
are measured inside each ball, so these are estimates.
"""

import numpy as np

from birkhoffkit.graphs import delta_hyperbolicity, explore_ball, export_graph

for kind in ("word", "conj"):
    rows = []
    for r in range(5):
        ball = explore_ball("RL", r, kind=kind)
        rows.append((r, len(ball.nodes), len(ball.edges), delta_hyperbolicity(ball).delta))
    table = np.array([[a, b, c, float(d)] for a, b, c, d in rows])
    print(kind)
    print(table)

# %%
# The radius-two ball in DOT form, ready for graphviz.
print(export_graph(explore_ball("RL", 2)))
