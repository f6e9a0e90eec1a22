"""
The parallelogram and its periodic orbits
=========================================

For a mixed word ``W`` the fixed points of ``RW`` on the torus sit on a line
through the origin, and three of them span a parallelogram.  This script
draws it and counts how periodic orbits cross it.
"""

from pathlib import Path

from birkhoffkit.figures import emit_parallelogram_svg
from birkhoffkit.torus import (
    build_parallelogram, enumerate_periodic_orbits, formula_fixed_points, locate,
)

p = build_parallelogram("RLRL")
print("RW =", p.rw, "| embedding:", p.embedding)
print("O, M, N =", p.O, p.M, p.N)

# %%
# Where do the fixed points fall?
for q in formula_fixed_points(p.rw):
    print(f"{str(q):>10}  {locate(p, q).name}")

# %%
# Orbits of period at most 2.  Orbits running along a side of the
# parallelogram are counted through the walls of the pair of pants.
for rec in enumerate_periodic_orbits(p, 2, on_side="wall"):
    tag = "boundary" if rec.boundary_flag else f"meets the section {rec.intersection}x"
    print(rec.period, rec.representative, tag)

# %%
# Write the figure to the working directory.
out = Path("parallelogram_RLRL.svg")
out.write_text(emit_parallelogram_svg(p, formula_fixed_points(p.rw)))
print("wrote", out.name)
