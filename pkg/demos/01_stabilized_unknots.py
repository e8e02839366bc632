"""Stabilize the 2x2 unknot four ways and watch the canonical classes.

Run: python demos/01_stabilized_unknots.py
"""

from gridhom.complex import Theory
from gridhom.grid_core import classical_invariants, stabilize, unknot2
from gridhom.homology import homology_dims, lambda_report

U = unknot2()
print(f"{'grid':10} {'tb':>3} {'rot':>3}  lambda+  lambda-  tilde homology")
for label, G in [("unknot", U)] + [(f"X:{k}", stabilize(U, "X", k, 0)) for k in ("SE", "NW", "NE", "SW")]:
    ci = classical_invariants(G)
    rep = lambda_report(G)
    flag = lambda d: "zero" if d["enhanced_vanishes"] else "nonzero"  # noqa: E731
    table = homology_dims(G, Theory.TildeOX).as_list()
    print(f"{label:10} {ci.tb:3d} {ci.rot:3d}  {flag(rep.plus):7}  {flag(rep.minus):7}  {table}")

# X:SE and X:NW keep the Legendrian type, so nothing changes.  X:NE is a
# positive stabilization and kills lambda+; X:SW is negative and kills lambda-.
