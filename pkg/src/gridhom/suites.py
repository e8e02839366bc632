"""Seeded verification suites: differentials and every chain map, run on small grids.

Each suite returns a list of :class:`Check` records.  Exhaustive parts
cover every grid of the smallest useful size; the seeded parts draw random
grids from ``random.Random(seed)`` so a run is reproducible.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import List

from .algebra import ChainElement, CoeffPoly, Monomial
from .cob_maps import (
    birth_grid,
    birth_map,
    commutation_map,
    pinch_map_O,
    pinch_map_X,
    stabilization_maps,
    swap_markings,
    verify_chain_map,
)
from .complex import ALL_THEORIES, check_d_squared, check_homogeneity, enumerate_states
from .grid_core import (
    GridError,
    all_grids,
    canonical_states,
    classical_invariants,
    combined_diagram,
    commutation_legal,
    commute,
    random_grid,
    unknot2,
)

SUITES = ("d2", "comm", "stab", "pinch", "birth")


@dataclass
class Check:
    suite: str
    label: str
    ok: bool
    detail: str = ""
    residue: list = field(default_factory=list)


def _note(seen, *gs):
    if seen is not None:
        seen.update(gs)


def _grids(seed, sizes_exhaustive, sizes_random, count):
    rng = random.Random(seed)
    for n in sizes_exhaustive:
        yield from all_grids(n)
    for n in sizes_random:
        for _ in range(count):
            yield random_grid(n, rng)


def suite_d2(seed=0, max_n=5, count=20, seen=None):
    out = []
    for G in _grids(seed, [3], range(4, max_n + 1), count):
        _note(seen, G)
        for th in ALL_THEORIES:
            bad = check_d_squared(G, th)
            hom = check_homogeneity(G, th)
            ok = bad is None and not hom
            if not ok:
                out.append(Check("d2", f"{G} {th.value}", False, f"d^2 {bad} homogeneity {hom[:1]}"))
    if not out:
        out.append(Check("d2", "d^2 = 0 and homogeneity", True))
    return out


def _tracks(f, G, H, exact):
    xp, xm = canonical_states(G)
    yp, ym = canonical_states(H)
    for x, y in ((xp, yp), (xm, ym)):
        img = f(x)
        if exact:
            if img != ChainElement.basis(y):
                return False
        elif y not in img.terms or not any(m.is_one() for m in img.terms[y].terms):
            return False
    return True


def _adjacent_band_X(cd):
    """Lower band X immediately left of the upper one: x+ cannot be tracked."""
    Gp = cd.row_plus
    xc = Gp.x_col()
    return (xc[cd.band] - xc[cd.band - 1]) % cd.n == 1


def suite_comm(seed=0, max_n=5, count=4, mutate=False, seen=None):
    out = []
    sizes_r = range(5, max_n + 1)
    for G in _grids(seed, [n for n in (3, 4) if n <= max_n], sizes_r, count):
        for axis in ("row", "col"):
            for i in range(G.n - 1):
                if not commutation_legal(G, axis, i):
                    continue
                H = commute(G, axis, i)
                _note(seen, G, H)
                cd = combined_diagram(H, G)
                for variant in ("filtered", "minus"):
                    f = commutation_map(cd, variant, long_ok=not mutate)
                    r = verify_chain_map(f)
                    label = f"{G} {axis}{i} {variant}"
                    if not r.ok:
                        out.append(Check("comm", label, False, "chain map", r.violations[:3]))
                    elif not _adjacent_band_X(cd) and not _tracks(f, G, H, variant == "minus"):
                        out.append(Check("comm", label, False, "canonical states"))
    if not out:
        out.append(Check("comm", "commutation maps", True))
    return out


def suite_stab(seed=0, max_n=5, count=4, mutate=False, seen=None):
    out = []
    rng = random.Random(seed)
    grids = [unknot2()] + list(all_grids(3))
    grids += [random_grid(n, rng) for n in range(4, max_n + 1) for _ in range(count)]
    for G in grids:
        for corner in ("SE", "NW"):
            for c in range(G.n):
                S = stabilization_maps(G, corner, c, long_ok=not mutate)
                _note(seen, G, S.Gs)
                label = f"{G} X:{corner} at {c}"
                for name, ok, res in stabilization_identities(S):
                    if not ok:
                        out.append(Check("stab", f"{label} {name}", False, name, res[:3]))
    if not out:
        out.append(Check("stab", "stabilization identities", True))
    return out


def stabilization_identities(S):
    """[(name, ok, residues)] for the four identities of the stabilization maps."""
    states = [s.s for s in enumerate_states(S.Gs.n)]
    I = [x for x in states if S.in_I(x)]
    N = [x for x in states if not S.in_I(x)]
    dII, dNN, dNI = S.d_part("I", "I"), S.d_part("N", "N"), S.d_part("N", "I")
    V = CoeffPoly([Monomial.make(0, {S.O1: 1}), Monomial.make(0, {S.O2: 1})])
    out = []
    res = [(x, S.H_O1(S.H_N(x)) + ChainElement.basis(x)) for x in I]
    out.append(("H_O1*H_N = id", res))
    res = [(x, S.H_N(S.H_O1(x)) + ChainElement.basis(x) + dNN(S.H_O1X2(x)) + S.H_O1X2(dNN(x)))
           for x in N]
    out.append(("H_N*H_O1 = id + dH + Hd", res))
    res = [(x, dNI(S.H_N(x)) + ChainElement.basis(x).scale(V)) for x in I]
    out.append(("d_NI*H_N = V1 + V2", res))
    res = [(x, S.H_N(dII(x)) + dNN(S.H_N(x))) for x in I]
    out.append(("H_N chain map", res))
    return [(name, not any(r for _, r in res), [(x, r) for x, r in res if r]) for name, res in out]


def pinch_pairs(G):
    """(G_minus, G_plus, marker) for every swap of G that is a Legendrian pinch."""
    out = []
    ci = classical_invariants(G)
    for marker in ("X", "O"):
        for lo in range(G.n - 1):
            try:
                H = swap_markings(G, marker, lo)
            except GridError:
                continue
            ch = classical_invariants(H)
            if ch.rot != ci.rot or abs(ch.tb - ci.tb) != 1:
                continue
            Gm, Gp = (G, H) if ch.tb > ci.tb else (H, G)
            out.append((Gm, Gp, marker))
    return out


def suite_pinch(seed=0, max_n=5, count=6, seen=None):
    out = []
    for G in _grids(seed, [n for n in (3, 4) if n <= max_n], range(5, max_n + 1), count):
        for Gm, Gp, marker in pinch_pairs(G):
            _note(seen, Gm, Gp)
            try:
                cd = combined_diagram(Gm, Gp)
            except GridError:
                continue  # X's too close together
            f = pinch_map_X(cd) if marker == "X" else pinch_map_O(cd)
            r = verify_chain_map(f)
            label = f"{Gp} -> {Gm} {marker} swap"
            if not r.ok:
                out.append(Check("pinch", label, False, "chain map", r.violations[:3]))
            elif not _tracks(f, Gp, Gm, marker == "O"):
                out.append(Check("pinch", label, False, "canonical states"))
    if not out:
        out.append(Check("pinch", "pinch maps", True))
    return out


def suite_birth(seed=0, max_n=5, count=3, seen=None):
    out = []
    rng = random.Random(seed)
    grids = [unknot2()] + list(all_grids(3))
    grids += [random_grid(n, rng) for n in range(4, max_n + 1) for _ in range(count)]
    for G in grids:
        for p in range(G.n):
            Gp = birth_grid(G, p)
            _note(seen, G, Gp)
            f = birth_map(G, Gp)
            r = verify_chain_map(f)
            label = f"{G} birth at {p}"
            if not r.ok:
                out.append(Check("birth", label, False, "chain map", r.violations[:3]))
            elif not _tracks(f, Gp, G, True):
                out.append(Check("birth", label, False, "canonical states"))
    if not out:
        out.append(Check("birth", "birth maps", True))
    return out


def run_suites(names, seed=0, max_n=5, mutate=False, seen=None) -> List[Check]:
    """Run the named suites; grids they touch are added to the set ``seen``."""
    out = []
    for name in names:
        if name == "d2":
            out += suite_d2(seed, max_n, seen=seen)
        elif name == "comm":
            out += suite_comm(seed, max_n, mutate=mutate, seen=seen)
        elif name == "stab":
            out += suite_stab(seed, max_n, mutate=mutate, seen=seen)
        elif name == "pinch":
            out += suite_pinch(seed, max_n, seen=seen)
        elif name == "birth":
            out += suite_birth(seed, max_n, seen=seen)
        else:
            raise ValueError(f"unknown suite {name!r}")
    return out
