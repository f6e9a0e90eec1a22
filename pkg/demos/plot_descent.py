"""
Walking down to the cat map
===========================

Removing one letter at a time lowers the trace until ``RL`` is reached;
each removal costs at most three surgeries in the Ghys graph.
"""

from birkhoffkit.birkhoff import descent_chain
from birkhoffkit.graphs import ghys_distance_upper_bound
from birkhoffkit.sl2z import IntMatrix2, rl_factorize

m = IntMatrix2(3, 8, 4, 11)
fact = rl_factorize(m)
print(m, "is conjugate to", fact.word, "via", fact.conjugator)

chain = descent_chain(fact.word)
for step in chain.steps:
    print(f"{step.before:>8} -{step.generator}-> {step.after:<8} trace {step.trace_before} -> "
          f"{step.trace_after}")

# %%
# The chain gives one bound; a breadth-first search over topological
# classes can only do better.
print("descent bound:", chain.ghys_bound)
print("search bound: ", ghys_distance_upper_bound(fact.word, "RL"))
