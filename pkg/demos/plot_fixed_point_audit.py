"""
Counting fixed points of the first return
=========================================

``tr(W^m) - 2`` fixed points of the m-th return map split into those coming
from periodic orbits crossing the interior of the section and those living
on the boundary circles.
"""

from birkhoffkit.birkhoff import lefschetz_audit

for w in ("RL", "RRL", "RLRL"):
    audit = lefschetz_audit(w, 6)
    print(w)
    print(audit.to_text())
