"""
A genus-one section for the cat map
===================================

The suspension of ``(2 1; 1 1)`` is the simplest hyperbolic torus bundle.
Here we build the genus-one section for the word ``RL`` and compare its
first-return map with the monodromy.
"""

from birkhoffkit.birkhoff import first_return_matrix, genus_one_section, pair_of_pants_data
from birkhoffkit.sl2z import word_to_matrix

# %%
# The word ``RL`` multiplies out to the cat map.
print(word_to_matrix("RL"))

# %%
# The pair of pants lives in the suspension of ``R * RL``.  For ``RL`` the
# corners M and N of the parallelogram land on the same torus point, so the
# pants has only two boundary orbits.
pants = pair_of_pants_data("RL")
for entry in pants.boundary:
    print(entry.orbit, entry.multiplicity, entry.circles, entry.circle_class)

# %%
# Adding a horizontal torus by a Fried sum removes one disc per boundary
# orbit, which costs one unit of Euler characteristic each.
section = genus_one_section("RL")
print("euler", section.euler_blowup, "circles", section.boundary_circle_count,
      "genus", section.genus)

# %%
# The first return on the section is the monodromy we started from.
fr = first_return_matrix("RL")
print(fr.matrix, fr.matrix == word_to_matrix("RL"))
