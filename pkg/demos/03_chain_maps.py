"""Build each cobordism map on a small example and check it at the chain level.

Run: python demos/03_chain_maps.py
"""

import random

from gridhom.cob_maps import (
    birth_grid,
    birth_map,
    commutation_map,
    pinch_map_O,
    pinch_map_X,
    stabilization_maps,
    verify_chain_map,
)
from gridhom.grid_core import GridError, combined_diagram, commutation_legal, commute, random_grid
from gridhom.suites import pinch_pairs, stabilization_identities

rng = random.Random(1)
G = random_grid(4, rng)
while not any(commutation_legal(G, "row", i) for i in range(3)):
    G = random_grid(4, rng)
print("grid", G)

i = next(i for i in range(3) if commutation_legal(G, "row", i))
cd = combined_diagram(commute(G, "row", i), G)
for variant in ("filtered", "minus"):
    r = verify_chain_map(commutation_map(cd, variant))
    print(f"commutation rows {i},{i + 1} ({variant}): chain map {r.ok} on {r.checked} states")

S = stabilization_maps(G, "SE", 0)
for name, ok, _ in stabilization_identities(S):
    print(f"X:SE stabilization, {name}: {ok}")

for Gm, Gp, marker in pinch_pairs(G):
    try:
        cd = combined_diagram(Gm, Gp)
    except GridError:
        continue
    f = pinch_map_X(cd) if marker == "X" else pinch_map_O(cd)
    print(f"{marker} swap pinch, bidegree {f.bidegree}: chain map {verify_chain_map(f).ok}")

Gb = birth_grid(G, 0)
r = verify_chain_map(birth_map(G, Gb))
print(f"birth at column 0 ({Gb.n}x{Gb.n}): chain map {r.ok} on {r.checked} states")
