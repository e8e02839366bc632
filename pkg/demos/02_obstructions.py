"""Ask whether decomposable Lagrangian cobordisms can exist between small grids.

Run: python demos/02_obstructions.py
"""

import json

from gridhom.cob_maps import birth_grid, obstruct_cobordism
from gridhom.grid_core import stabilize, unknot2

U = unknot2()
pairs = {
    "unknot -> unknot": (U, U),
    "unknot -> X:NE unknot": (U, stabilize(U, "X", "NE", 0)),
    "X:NE unknot -> unknot": (stabilize(U, "X", "NE", 0), U),
    "unknot -> unknot + unknot": (U, birth_grid(U, 0)),
}
for label, (lo, hi) in pairs.items():
    rep = obstruct_cobordism(lo, hi)
    print(f"{label:28} {rep.verdict}")
    for r in rep.reasons:
        print(f"{'':30}{r}")
    print(f"{'':30}shift {json.dumps(list(rep.shift))}")
