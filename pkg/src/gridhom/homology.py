"""Bigraded homology of the fully blocked theories and the canonical classes.

Everything works one bigraded piece at a time.  A piece of the enhanced
complex at (m, 2a) is spanned by v^k x with M(x) + 2k = m and 2A(x) = 2a; it
is finite because Maslov gradings of states are bounded.
"""

from __future__ import annotations

import os
from collections import defaultdict
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from math import comb
from typing import Dict, Optional

import numpy as np

from .algebra import ChainElement, Monomial, SpanSolver, bits, span_rank
from .complex import GridComplex, Theory, gradings, gradings_array, state_array
from .grid_core import GridDiagram, canonical_states, link_components


class NotACycle(ValueError):
    pass


class NotHomogeneous(ValueError):
    pass


class TheoremViolation(AssertionError):
    """The enhanced class vanished while the plain one did not."""


def _check_blocked(theory):
    if not theory.fully_blocked:
        raise ValueError(f"{theory.value} is not a fully blocked theory")


# ---------------------------------------------------------------- grading cache

class GradingTable:
    """Gradings of all states of a grid, computed once with numpy."""

    def __init__(self, G: GridDiagram):
        self.G = G
        self.states = state_array(G.n)
        self.M, self.A2 = gradings_array(G, self.states)
        self.M_min = int(self.M.min())
        self.M_max = int(self.M.max())

    def select(self, mask):
        idx = np.nonzero(mask)[0]
        return [tuple(int(v) for v in self.states[i]) for i in idx], idx


_TABLES: Dict[GridDiagram, GradingTable] = {}


def grading_table(G):
    t = _TABLES.get(G)
    if t is None:
        if len(_TABLES) > 64:
            _TABLES.clear()
        t = _TABLES[G] = GradingTable(G)
    return t


def default_v_cutoff(G):
    t = grading_table(G)
    return 2 * (t.M_max - t.M_min)


def bigraded_piece(G: GridDiagram, theory: Theory, m: int, a2: int, v_cutoff=None):
    """Basis of the (m, 2a) piece: a list of (state, k) meaning v^k * state.

    Sorted by Lehmer rank of the state, then by k.  Lehmer rank order is
    the row order of :func:`state_array`.
    """
    _check_blocked(theory)
    t = grading_table(G)
    if theory.big:
        diff = m - t.M
        mask = (t.A2 == a2) & (diff >= 0) & (diff % 2 == 0)
        if v_cutoff is not None:
            mask &= diff <= 2 * v_cutoff
    else:
        mask = (t.A2 == a2) & (t.M == m)
    states, idx = t.select(mask)
    if theory.big:
        ks = ((m - t.M[idx]) // 2).tolist()
    else:
        ks = [0] * len(states)
    return list(zip(states, (int(k) for k in ks)))


# ---------------------------------------------------------------- differentials on pieces

def _images(G, theory, states):
    """For each state, the list of (target, extra v power) of its differential."""
    C = GridComplex(G)
    out = []
    for s in states:
        acc = {}
        for y, k, _ in C.rect_terms(s, theory):
            key = (y, k)
            if key in acc:
                del acc[key]
            else:
                acc[key] = True
        out.append(list(acc))
    return out


def _images_chunk(args):
    G, theory_value, states = args
    return _images(G, Theory(theory_value), states)


def images_parallel(G, theory, states, jobs=1):
    if jobs <= 1 or len(states) < 2000:
        return _images(G, theory, states)
    size = (len(states) + 4 * jobs - 1) // (4 * jobs)
    chunks = [states[i:i + size] for i in range(0, len(states), size)]
    out = []
    with ProcessPoolExecutor(max_workers=jobs) as ex:
        for part in ex.map(_images_chunk, [(G, theory.value, c) for c in chunks]):
            out.extend(part)
    return out


def resolve_jobs(jobs=None):
    if jobs is None:
        jobs = int(os.environ.get("GRIDHOM_JOBS", "1") or 1)
    return max(1, int(jobs))


# ---------------------------------------------------------------- dimensions

@dataclass
class BigradedDims:
    dims: Dict[tuple, int]
    theory: Theory
    n: int
    l: int
    v_cutoff: Optional[int] = None
    top_m: Optional[int] = None  # pieces with M above this were not computed

    def as_list(self):
        return [[m, a2, d] for (m, a2), d in sorted(self.dims.items()) if d]

    def total(self):
        return sum(self.dims.values())


def homology_dims(G: GridDiagram, theory: Theory, v_cutoff=None, jobs=1) -> BigradedDims:
    """dim H per bigrade; for the enhanced theory up to M_max + 2*cutoff."""
    _check_blocked(theory)
    t = grading_table(G)
    l = link_components(G)[0]
    if theory.big and v_cutoff is None:
        v_cutoff = default_v_cutoff(G)
    top = t.M_max + (2 * v_cutoff if theory.big else 0)
    a_values = sorted(set(int(a) for a in t.A2))
    states_all, _ = t.select(np.ones(len(t.M), dtype=bool))
    imgs = dict(zip(states_all, images_parallel(G, theory, states_all, resolve_jobs(jobs))))
    dims = {}
    rank_cache = {}

    def rank_out(m, a2):
        """Rank of the differential leaving piece (m, a2)."""
        key = (m, a2)
        if key in rank_cache:
            return rank_cache[key]
        basis = bigraded_piece(G, theory, m, a2)
        index = {}
        vecs = []
        for s, k in basis:
            vec = 0
            for y, j in imgs[s]:
                kk = k + j
                if not theory.big and kk:
                    continue
                i = index.setdefault((y, kk), len(index))
                vec ^= 1 << i
            vecs.append(vec)
        r = span_rank(vecs)
        rank_cache[key] = r
        return r

    for a2 in a_values:
        for m in range(t.M_min, top + 1):
            size = len(bigraded_piece(G, theory, m, a2))
            if not size:
                continue
            d = size - rank_out(m, a2) - rank_out(m + 1, a2)
            if d:
                dims[(m, a2)] = d
    return BigradedDims(dims, theory, G.n, l, v_cutoff if theory.big else None, top)


def w_deconvolve(dims: Dict[tuple, int], k: int, top_m=None, a_hi=None):
    """Divide a bigraded table by W^k, W spanned by degrees (0,0) and (-1,-1).

    Along each line of slope (1, 2) in (M, 2A) the table is a polynomial in
    q (one step down the line); we divide it by (1+q)^k.  Returns
    ``(quotient, ok)``.  Lines reaching above ``top_m`` are skipped since the
    table is incomplete there.
    """
    lines = defaultdict(dict)
    for (m, a2), d in dims.items():
        if d:
            lines[a2 - 2 * m][m] = d
    quotient = {}
    ok = True
    if a_hi is None:
        a_hi = max([a2 for (_, a2) in dims] or [0])
    for diag, entries in lines.items():
        if top_m is not None:
            # highest M this line can reach inside the A range
            m_hi = (a_hi - diag) // 2
            if m_hi > top_m:
                continue
        hi = max(entries)
        lo = min(entries)
        # coefficient list indexed by steps down from hi
        coeffs = [entries.get(hi - i, 0) for i in range(hi - lo + 1)]
        q = []
        rem = coeffs[:]
        for i in range(len(coeffs) - k):
            c = rem[i]
            q.append(c)
            for j in range(k + 1):
                rem[i + j] -= c * comb(k, j)
        if any(rem) or any(c < 0 for c in q) or len(coeffs) <= k and any(coeffs):
            ok = False
        for i, c in enumerate(q):
            if c:
                quotient[(hi - i, diag + 2 * (hi - i))] = c
    return quotient, ok


def w_factor_check(G, theory, v_cutoff=None):
    hd = homology_dims(G, theory, v_cutoff)
    k = G.n - hd.l
    a_hi = int(grading_table(G).A2.max())
    _, ok = w_deconvolve(hd.dims, k, hd.top_m if theory.big else None, a_hi)
    return ok, hd


# ---------------------------------------------------------------- classes

@dataclass
class Vanishing:
    vanishes: bool
    M: int
    twoA: int
    witness: Optional[ChainElement] = None
    piece_size: int = 0


def _homogeneous_grading(G, c: ChainElement):
    gr = set()
    for s, mono in c:
        if mono.V_exps:
            raise NotHomogeneous("tilde theories carry no V variables")
        m, a2 = gradings(G, s)
        gr.add((m + 2 * mono.v_exp, a2))
    if len(gr) != 1:
        raise NotHomogeneous(f"element spans gradings {sorted(gr)}")
    return gr.pop()


def class_vanishes(G: GridDiagram, theory: Theory, c: ChainElement, jobs=1) -> Vanishing:
    """Decide whether the cycle c is a boundary; a zero verdict carries a witness."""
    _check_blocked(theory)
    if not c:
        return Vanishing(True, 0, 0, ChainElement())
    m, a2 = _homogeneous_grading(G, c)
    C = GridComplex(G)
    if C.apply(c, theory):
        raise NotACycle("element is not a cycle")
    basis = bigraded_piece(G, theory, m + 1, a2)
    imgs = images_parallel(G, theory, [s for s, _ in basis], resolve_jobs(jobs))
    index = {}
    target = 0
    for s, mono in c:
        target ^= 1 << index.setdefault((s, mono.v_exp), len(index))
    solver = SpanSolver()
    for (s, k), img in zip(basis, imgs):
        vec = 0
        for y, j in img:
            kk = k + j
            if not theory.big and kk:
                continue
            vec ^= 1 << index.setdefault((y, kk), len(index))
        solver.add(vec)
    combo = solver.express(target)
    if combo is None:
        return Vanishing(False, m, a2, None, len(basis))
    w = ChainElement()
    for i in bits(combo):
        s, k = basis[i]
        w.add_term(s, Monomial(k))
    if C.apply(w, theory) != c:
        raise AssertionError("boundary witness failed verification")
    return Vanishing(True, m, a2, w, len(basis))


@dataclass
class LambdaReport:
    grid: GridDiagram
    plus: Dict[str, object] = field(default_factory=dict)
    minus: Dict[str, object] = field(default_factory=dict)
    v_cutoff: int = 0

    def to_dict(self, dims=None, theory=Theory.TildeOXBig):
        out = {"grid": self.grid.to_dict(), "theory": theory.value,
               "dims": dims if dims is not None else [],
               "lambda": {}, "v_cutoff": self.v_cutoff}
        for name, d in (("plus", self.plus), ("minus", self.minus)):
            out["lambda"][name] = {
                "M": d["M"], "twoA": d["twoA"],
                "enhanced_vanishes": d["enhanced_vanishes"],
                "classical_vanishes": d["classical_vanishes"],
            }
        return out


def canonical_vanishing(G, which="plus", theory=Theory.TildeOXBig, jobs=1):
    xp, xm = canonical_states(G)
    x = xp if which == "plus" else xm
    return class_vanishes(G, theory, ChainElement.basis(x), jobs=jobs)


def lambda_report(G: GridDiagram, jobs=1, v_cutoff=None) -> LambdaReport:
    xp, xm = canonical_states(G)
    rep = LambdaReport(G, v_cutoff=default_v_cutoff(G) if v_cutoff is None else v_cutoff)
    for name, x in (("plus", xp), ("minus", xm)):
        big = class_vanishes(G, Theory.TildeOXBig, ChainElement.basis(x), jobs=jobs)
        small = class_vanishes(G, Theory.TildeOX, ChainElement.basis(x), jobs=jobs)
        if big.vanishes and not small.vanishes:
            raise TheoremViolation(f"{name}: enhanced class vanishes but plain one does not on {G}")
        d = {"M": big.M, "twoA": big.twoA, "enhanced_vanishes": big.vanishes,
             "classical_vanishes": small.vanishes, "state": list(x),
             "witness": big.witness}
        setattr(rep, name, d)
    return rep
