"""Chain maps between grid complexes: commutation, stabilization, pinch and birth.

Maps are computed state by state and cached.  The combined diagram of a
commutation or swap is always handled in row form (a column relation is
transposed first), using integer coordinates in quarter units: vertical
circle c sits at 4c, horizontal circle j at 4j, marking centres at 4c+2,
and the two bent curves at 4*band +- 1.  Swapped markings sit on 4*band,
inside their lens.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional

from .algebra import ChainElement, CoeffPoly, Monomial
from .complex import GridComplex, Theory, enumerate_states, gradings, generator_grading
from .grid_core import (
    CombinedDiagram,
    GridDiagram,
    GridError,
    NotRelated,
    classical_invariants,
    combined_diagram,
    link_components,
    validate_grid,
)


class NotACommutation(GridError):
    pass


class NotAStabilization(GridError):
    pass


class NotAnXSwap(GridError):
    pass


class NotAnOSwap(GridError):
    pass


class NotABirth(GridError):
    pass


def _inverse(s):
    out = [0] * len(s)
    for c, r in enumerate(s):
        out[r] = c
    return tuple(out)


# ---------------------------------------------------------------- chain maps

@dataclass
class ChainMap:
    """A map of grid complexes given on states.

    ``var_map`` sends the index of a source variable V_k to the index of the
    matching target variable (markings keep their identity across a move,
    not their column).  ``bidegree`` is the (M, 2A) change of every term;
    when ``filtered`` is set the 2A change is only an upper bound.
    """

    name: str
    source: GridDiagram
    target: GridDiagram
    source_theory: Theory
    target_theory: Theory
    on_state: Callable
    bidegree: Optional[tuple] = None
    filtered: bool = False
    var_map: Optional[Dict[int, int]] = None
    domain: Optional[Callable] = None  # predicate on source states, None = all
    _cache: Dict[tuple, ChainElement] = field(default_factory=dict, repr=False)

    def __call__(self, x) -> ChainElement:
        if isinstance(x, ChainElement):
            return self.apply(x)
        x = tuple(x)
        out = self._cache.get(x)
        if out is None:
            if self.domain is not None and not self.domain(x):
                out = ChainElement()
            else:
                out = self.on_state(x)
            self._cache[x] = out
        return out

    def translate(self, mono: Monomial) -> Monomial:
        if not self.var_map or not mono.V_exps:
            return mono
        return Monomial(mono.v_exp, tuple((self.var_map.get(i, i), e) for i, e in mono.V_exps))

    def apply(self, elem: ChainElement) -> ChainElement:
        out = ChainElement()
        for s, poly in elem.terms.items():
            img = self(s)
            if not img:
                continue
            p = CoeffPoly([self.translate(m) for m in poly.terms])
            out = out + img.scale(p)
        return out

    def source_states(self):
        for st in enumerate_states(self.source.n):
            if self.domain is None or self.domain(st.s):
                yield st.s

    def matrix(self, states=None):
        states = self.source_states() if states is None else states
        return {tuple(s): self(s) for s in states}


def compose(g: ChainMap, f: ChainMap, name=None) -> ChainMap:
    """g after f."""
    def on_state(x):
        return g.apply(f(x))

    vm = None
    if f.var_map or g.var_map:
        keys = set(range(f.source.n))
        vm = {k: g.var_map.get(f.var_map.get(k, k), f.var_map.get(k, k)) if g.var_map
              else f.var_map.get(k, k) for k in keys}
    bd = None
    if f.bidegree is not None and g.bidegree is not None:
        bd = (f.bidegree[0] + g.bidegree[0], f.bidegree[1] + g.bidegree[1])
    return ChainMap(name or f"{g.name}*{f.name}", f.source, g.target, f.source_theory,
                    g.target_theory, on_state, bd, f.filtered or g.filtered, vm, f.domain)


def identity_map(G: GridDiagram, theory: Theory) -> ChainMap:
    return ChainMap("id", G, G, theory, theory, lambda x: ChainElement.basis(x), (0, 0))


def zero_map(G: GridDiagram, theory: Theory) -> ChainMap:
    return ChainMap("zero", G, G, theory, theory, lambda x: ChainElement(), (0, 0))


@dataclass
class VerifyResult:
    ok: bool
    checked: int
    violations: List[tuple] = field(default_factory=list)  # (state, residue)
    grading_errors: List[tuple] = field(default_factory=list)

    def __bool__(self):
        return self.ok


def verify_chain_map(f: ChainMap, states=None, max_violations=10, check_grading=True) -> VerifyResult:
    """Check d_target(f(x)) + f(d_source(x)) = 0 for every source state x.

    Also compares each stored term with the declared bidegree.
    """
    Cs = GridComplex(f.source)
    Ct = GridComplex(f.target)
    states = list(f.source_states() if states is None else states)
    res = VerifyResult(True, 0)
    for x in states:
        x = tuple(x)
        fx = f(x)
        resid = Ct.apply(fx, f.target_theory) + f.apply(Cs.differential(x, f.source_theory))
        res.checked += 1
        if resid:
            res.ok = False
            if len(res.violations) < max_violations:
                res.violations.append((x, resid))
        if check_grading and f.bidegree is not None and fx:
            bad = grading_defects(f, x, fx)
            if bad:
                res.ok = False
                if len(res.grading_errors) < max_violations:
                    res.grading_errors.append((x, bad))
    return res


def grading_defects(f: ChainMap, x, fx=None):
    """Terms of f(x) whose grading change disagrees with the declared bidegree."""
    fx = f(x) if fx is None else fx
    m0, a0 = gradings(f.source, x)
    dm, da = f.bidegree
    bad = []
    for y, mono in fx:
        m, a = generator_grading(f.target, y, mono)
        if m - m0 != dm or (a - a0 > da if f.filtered else a - a0 != da):
            bad.append((y, str(mono), m - m0, a - a0))
    return bad


def top_part(f: ChainMap, name=None) -> ChainMap:
    """Terms of a filtered map that keep the declared Alexander shift.

    This is the map induced on the associated graded (fully blocked) complexes.
    """
    dm, da = f.bidegree

    def on_state(x):
        m0, a0 = gradings(f.source, x)
        out = ChainElement()
        for y, mono in f(x):
            if generator_grading(f.target, y, mono)[1] - a0 == da:
                out.add_term(y, mono)
        return out

    def small(t):
        return {Theory.FilteredOBig: Theory.TildeOXBig, Theory.FilteredO: Theory.TildeOX}.get(t, t)

    return ChainMap(name or f"gr({f.name})", f.source, f.target, small(f.source_theory),
                    small(f.target_theory), on_state, f.bidegree, False, f.var_map, f.domain)


# ---------------------------------------------------------------- combined diagram shapes

@dataclass(frozen=True)
class Pentagon:
    source: tuple
    target: tuple
    c1: int          # column of the left edge
    width: int       # in columns; exceeds n for long pentagons
    top_bent: bool   # the bent side (through a) is the top edge
    long: bool
    O_mult: tuple    # per row-form column
    X_mult: tuple
    interior_points: int


@dataclass(frozen=True)
class Triangle:
    source: tuple
    target: tuple
    column: int
    leftward: bool   # the lens piece lies left of the vertical edge
    O_mult: tuple
    X_mult: tuple

    interior_points: int = 0


class _Band:
    """Row-form geometry of a combined diagram in quarter units."""

    def __init__(self, cd: CombinedDiagram):
        self.cd = cd
        n = self.n = cd.n
        self.N = 4 * n
        self.k = cd.band
        self.a = round(cd.a * 4)
        self.b = round(cd.b * 4)
        Gp = cd.row_plus
        lo, hi = self.k - 1, self.k
        moveX = cd.kind in ("commutation", "x_swap")
        moveO = cd.kind in ("commutation", "o_swap")

        def place(rows, moving):
            out = []
            for c, r in enumerate(rows):
                y = 4 * self.k if moving and r in (lo, hi) else 4 * r + 2
                out.append((4 * c + 2, y))
            return out

        self.Xpos = place(Gp.X, moveX)
        self.Opos = place(Gp.O, moveO)

    def high(self, x4):
        return (x4 - self.b) % self.N < (self.a - self.b) % self.N

    def alpha(self, x4):
        return 4 * self.k + (1 if self.high(x4) else -1)

    def alpha_p(self, x4):
        return 4 * self.k - (1 if self.high(x4) else -1)

    def points(self, x):
        k = self.k
        return [(4 * c, self.alpha(4 * c) if r == k else 4 * r) for c, r in enumerate(x)]

    def _lifts(self, px, lo, hi):
        """x-lifts of px strictly inside (lo, hi)."""
        N = self.N
        t = px + ((lo - px) // N) * N
        while t <= lo:
            t += N
        while t < hi:
            yield t
            t += N

    def _count(self, pos, X1, X2, inside):
        out = []
        for px, py in pos:
            out.append(sum(1 for t in self._lifts(px, X1, X2) if inside(t, py)))
        return out

    def pentagons(self, x, long_ok=True):
        """Every pentagon (normal and long) out of the row-form plus state x."""
        n, N, k = self.n, self.N, self.k
        x = tuple(x)
        ca = x.index(k)
        pts = self.points(x)
        out = []
        for top_bent in (True, False):
            for w in range(1, 2 * n):
                if w == n:
                    continue
                long = w > n
                if long and not long_ok:
                    break
                if top_bent:
                    c2 = ca
                    c1 = (ca - w) % n
                    j = x[c1]
                    X2 = 4 * ca
                    X1 = X2 - 4 * w
                    if long and j != k - 1:
                        continue
                    B = 4 * j if j < k else 4 * (j - n)
                else:
                    c1 = ca
                    c2 = (ca + w) % n
                    j = x[c2]
                    X1 = 4 * ca
                    X2 = X1 + 4 * w
                    if long and j != (k + 1) % n:
                        continue
                    T = 4 * j if j > k else 4 * (j + n)
                for astar in self._lifts(self.a, X1, X2):
                    if top_bent:
                        def inside(px, py, astar=astar, B=B):
                            py = B + (py - B) % N
                            top = self.alpha_p(px) if px < astar else self.alpha(px)
                            return B < py < top
                    else:
                        def inside(px, py, astar=astar, T=T):
                            py = T - (T - py) % N
                            bot = self.alpha(px) if px < astar else self.alpha_p(px)
                            return bot < py < T
                    om = self._count(self.Opos, X1, X2, inside)
                    xm = self._count(self.Xpos, X1, X2, inside)
                    ip = sum(self._count(pts, X1, X2, inside))
                    y = list(x)
                    if top_bent:
                        y[c1], y[c2] = k, j
                    else:
                        y[c1], y[c2] = j, k
                    out.append(Pentagon(x, tuple(y), c1 if not top_bent else (ca - w) % n,
                                        w, top_bent, long, tuple(om), tuple(xm), ip))
        return out

    def triangles(self, x):
        """The triangle through b out of x (there is exactly one)."""
        k, N = self.k, self.N
        x = tuple(x)
        ca = x.index(k)
        X0 = 4 * ca
        if self.high(X0):
            # alpha above alpha': the lens piece runs left to b
            lo = X0 - ((X0 - self.b) % N)
            hi = X0
        else:
            lo = X0
            hi = X0 + ((self.b - X0) % N)

        def inside(px, py):
            return min(self.alpha(px), self.alpha_p(px)) < py < max(self.alpha(px), self.alpha_p(px))

        om = self._count(self.Opos, lo, hi, inside)
        xm = self._count(self.Xpos, lo, hi, inside)
        return [Triangle(x, x, ca, self.high(X0), tuple(om), tuple(xm))]


def _row_form(cd, x):
    return tuple(x) if cd.axis == "row" else _inverse(x)


def _from_row_form(cd, y):
    return tuple(y) if cd.axis == "row" else _inverse(y)


def _var_index(cd: CombinedDiagram):
    """Row-form column of an O marking -> variable index in plus and minus grids."""
    if cd.axis == "row":
        ident = {c: c for c in range(cd.n)}
        return ident, ident
    # transposed: the O in row-form column j sits in original row j
    return ({j: c for c, j in enumerate(cd.plus.O)}, {j: c for c, j in enumerate(cd.minus.O)})


def pentagons(cd: CombinedDiagram, x, long_ok=True) -> List[Pentagon]:
    """Pentagons from the plus state x, in the diagrams' own coordinates."""
    eng = _Band(cd)
    out = []
    for p in eng.pentagons(_row_form(cd, x), long_ok):
        out.append(Pentagon(tuple(x), _from_row_form(cd, p.target), p.c1, p.width, p.top_bent,
                            p.long, p.O_mult, p.X_mult, p.interior_points))
    return out


def triangles(cd: CombinedDiagram, x) -> List[Triangle]:
    eng = _Band(cd)
    return [Triangle(tuple(x), _from_row_form(cd, t.target), t.column, t.leftward, t.O_mult, t.X_mult)
            for t in eng.triangles(_row_form(cd, x))]


def _shape_map(cd, name, theory, variant, shapes, bidegree, filtered):
    eng = _Band(cd)
    vp, vm = _var_index(cd)

    def on_state(x):
        out = ChainElement()
        for p in shapes(eng, _row_form(cd, x)):
            if variant == "filtered":
                if any(p.O_mult):
                    continue
                mono = Monomial(1 if getattr(p, "long", False) else p.interior_points)
            else:
                if any(p.X_mult):
                    continue
                V = {vm[j]: e for j, e in enumerate(p.O_mult) if e}
                mono = Monomial.make(1 if p.long else p.interior_points, V)
            out.add_term(_from_row_form(cd, p.target), mono)
        return out

    var_map = {vp[j]: vm[j] for j in range(cd.n)}
    return ChainMap(name, cd.plus, cd.minus, theory, theory, on_state, bidegree, filtered, var_map)


def commutation_map(cd: CombinedDiagram, variant="filtered", long_ok=True) -> ChainMap:
    """Pentagon map from the plus grid to the minus grid of a commutation.

    ``variant="filtered"`` counts O-free pentagons on the filtered complexes,
    ``"minus"`` counts X-free ones with V weights on the unblocked complexes.
    ``long_ok=False`` drops long pentagons (for mutation testing only).
    """
    if cd.kind != "commutation":
        raise NotACommutation(f"combined diagram is a {cd.kind}")
    if variant == "filtered":
        theory = Theory.FilteredOBig
        return _shape_map(cd, "C_filtered", theory, variant,
                          lambda e, x: e.pentagons(x, long_ok), (0, 0), True)
    if variant == "minus":
        return _shape_map(cd, "C_minus", Theory.MinusXBig, variant,
                          lambda e, x: e.pentagons(x, long_ok), (0, 0), False)
    raise ValueError(f"unknown variant {variant!r}")


def commutation_pair(G, axis, i):
    """Combined diagram for the commutation of G at (axis, i); maps go G -> G'."""
    from .grid_core import commute
    return combined_diagram(commute(G, axis, i), G)


def _pinch_bidegree(cd):
    lp = link_components(cd.plus)[0]
    lm = link_components(cd.minus)[0]
    # M drops by one; 2A by |L+| - |L-| + 1 (an upper bound for filtered maps)
    return (-1, -(lp - lm + 1))


def pinch_map_X(cd: CombinedDiagram) -> ChainMap:
    """O-free pentagons through a, on the filtered complexes (plus -> minus)."""
    if cd.kind != "x_swap":
        raise NotAnXSwap(f"combined diagram is a {cd.kind}")
    return _shape_map(cd, "P_X", Theory.FilteredOBig, "filtered",
                      lambda e, x: e.pentagons(x, True), _pinch_bidegree(cd), True)


def pinch_map_O(cd: CombinedDiagram) -> ChainMap:
    """O-free triangles through b, on the filtered complexes (plus -> minus)."""
    if cd.kind != "o_swap":
        raise NotAnOSwap(f"combined diagram is a {cd.kind}")
    return _shape_map(cd, "P_O", Theory.FilteredOBig, "filtered",
                      lambda e, x: e.triangles(x), _pinch_bidegree(cd), True)


def swap_markings(G: GridDiagram, marker: str, lo: int) -> GridDiagram:
    """Exchange the ``marker`` markings of rows lo and lo+1."""
    if not 0 <= lo < G.n - 1:
        raise NotRelated(f"row {lo} has no row above it")
    sw = {lo: lo + 1, lo + 1: lo}
    X = [sw.get(r, r) for r in G.X] if marker == "X" else list(G.X)
    O = [sw.get(r, r) for r in G.O] if marker == "O" else list(G.O)
    return validate_grid(G.n, X, O)


# ---------------------------------------------------------------- stabilization

def rotate_grid(G: GridDiagram) -> GridDiagram:
    """Rotate the torus by 180 degrees."""
    n = G.n
    X = [0] * n
    O = [0] * n
    for c in range(n):
        X[n - 1 - c] = n - 1 - G.X[c]
        O[n - 1 - c] = n - 1 - G.O[c]
    return GridDiagram(n, X, O)


def rotate_state(x):
    n = len(x)
    out = [0] * n
    for c, r in enumerate(x):
        out[(n - c) % n] = (n - r) % n
    return tuple(out)


def conjugate(f: ChainMap, src: GridDiagram, tgt: GridDiagram, state_fn, var_fn, name=None) -> ChainMap:
    """The map state_fn o f o state_fn^-1 for an involution state_fn on states."""

    def on_state(x):
        out = ChainElement()
        for y, mono in f(state_fn(x)):
            out.add_term(state_fn(y), Monomial(mono.v_exp, tuple((var_fn(i), e) for i, e in mono.V_exps)))
        return out

    dom = None
    if f.domain is not None:
        dom = lambda x: f.domain(state_fn(x))  # noqa: E731
    vm = None
    if f.var_map:
        vm = {var_fn(k): var_fn(v) for k, v in f.var_map.items()}
    return ChainMap(name or f.name, src, tgt, f.source_theory, f.target_theory, on_state,
                    f.bidegree, f.filtered, vm, dom)


def _cells(mask, n, boards):
    """Columns whose marking (given as a board bitmask) lies in ``mask``."""
    m = mask & boards
    out = []
    while m:
        low = m & -m
        out.append((low.bit_length() - 1) // n)
        m ^= low
    return out


@dataclass
class StabilizationMaps:
    """Maps of an X:SE (or X:NW) stabilization on the unblocked enhanced complex.

    States of the stabilized grid split into I (containing the block centre
    ``point``) and N.  ``H_N`` goes I -> N, ``H_O1`` N -> I, ``H_O1X2`` N -> N;
    ``e_prime``/``e`` identify states of the small grid with I.
    """

    G: GridDiagram
    Gs: GridDiagram
    corner: str
    column: int
    point: tuple
    O1: int   # column of O_1 (index of V_1)
    O2: int   # column of O_2 (index of V_2)
    X2: int   # column of X_2
    H_N: ChainMap
    H_O1: ChainMap
    H_O1X2: ChainMap
    e_prime: ChainMap
    e: ChainMap

    def in_I(self, x):
        c, r = self.point
        return x[c] == r

    def d_part(self, src, dst):
        """The part of the differential from states in ``src`` to states in ``dst``."""
        C = GridComplex(self.Gs)
        pred = {"I": self.in_I, "N": lambda x: not self.in_I(x)}

        def on_state(x):
            out = ChainElement()
            for y, poly in C.differential(x, Theory.MinusXBig).terms.items():
                if pred[dst](y):
                    out.add_term(y, poly)
            return out

        return ChainMap(f"d_{src}{dst}", self.Gs, self.Gs, Theory.MinusXBig, Theory.MinusXBig,
                        on_state, (-1, 0), False, None, pred[src])


def _se_maps(G, c, Gs, long_ok=True):
    n = Gs.n
    r = G.X[c]
    if not (Gs.O[c] == r + 1 and Gs.X[c] == r and Gs.X[c + 1] == r + 1):
        raise NotAStabilization("stabilized grid lacks the X:SE block")
    point = (c + 1, r + 1)
    O1, X2 = c, c
    O2 = Gs.o_col()[r]
    C = GridComplex(Gs)
    Xb, Ob = C.Xb, C.Ob
    X2bit = 1 << (c * n + r)
    O1bit = 1 << (c * n + r + 1)

    def in_I(x):
        return x[c + 1] == r + 1

    def rects(x):
        xb = C.state_board(x)
        for c1, c2, w, h, cm, im in C.raw_rects(x):
            y = list(x)
            y[c1], y[c2] = x[c2], x[c1]
            yield tuple(y), cm, bin(im & xb).count("1")

    def weight(cm, k, drop_O1):
        V = {j: 1 for j in _cells(cm, n, Ob) if not (drop_O1 and j == O1)}
        return Monomial.make(k, V)

    def h_n(x):
        out = ChainElement()
        for y, cm, k in rects(x):
            if cm & Xb == X2bit and not in_I(y):
                out.add_term(y, weight(cm, k, False))
        return out

    def h_o1(x):
        out = ChainElement()
        for y, cm, k in rects(x):
            if cm & O1bit and not cm & Xb and in_I(y):
                out.add_term(y, weight(cm, k, True))
        return out

    def h_o1x2(x):
        out = ChainElement()
        for y, cm, k in rects(x):
            if cm & O1bit and cm & Xb == X2bit and not in_I(y):
                out.add_term(y, weight(cm, k, True))
        # long rectangles of width one in the block's left column
        d = (x[c + 1] - x[c]) % n
        double = {(x[c] + i) % n for i in range(d)}
        if long_ok and r not in double and r + 1 not in double:
            y = list(x)
            y[c], y[c + 1] = x[c + 1], x[c]
            if not in_I(y):
                out.add_term(tuple(y), Monomial(1))
        return out

    def is_N(x):
        return not in_I(x)

    th = Theory.MinusXBig
    H_N = ChainMap("H_N", Gs, Gs, th, th, h_n, None, False, None, in_I)
    H_O1 = ChainMap("H_O1", Gs, Gs, th, th, h_o1, None, False, None, is_N)
    H_O1X2 = ChainMap("H_O1X2", Gs, Gs, th, th, h_o1x2, None, False, None, is_N)

    def line(k):  # old circle index -> new
        return k if k <= c else k + 1

    def lift(s):
        y = [0] * n
        for k, v in enumerate(s):
            y[line(k)] = v if v <= r else v + 1
        y[c + 1] = r + 1
        return tuple(y)

    def drop(x):
        s = []
        for k in range(n):
            if k == c + 1:
                continue
            v = x[k]
            s.append(v if v <= r else v - 1)
        return tuple(s)

    # O of old column k sits in new column k (k < c) or k + 1 (k >= c)
    var_up = {k: (k if k < c else k + 1) for k in range(G.n)}
    var_down = {v: k for k, v in var_up.items()}
    e_prime = ChainMap("e'", G, Gs, th, th, lambda s: ChainElement.basis(lift(s)), None, False, var_up)
    e = ChainMap("e", Gs, G, th, th, lambda x: ChainElement.basis(drop(x)), None, False, var_down, in_I)
    return point, O1, O2, X2, H_N, H_O1, H_O1X2, e_prime, e


def stabilization_maps(G: GridDiagram, corner: str, c: int, long_ok=True) -> StabilizationMaps:
    """Maps for the X:SE or X:NW stabilization of G at column c.

    ``long_ok=False`` drops the long rectangles (for mutation testing).
    """
    from .grid_core import stabilize

    Gs = stabilize(G, "X", corner, c)
    if corner == "SE":
        parts = _se_maps(G, c, Gs, long_ok)
        return StabilizationMaps(G, Gs, corner, c, *parts)
    if corner != "NW":
        raise NotAStabilization(f"maps are built for X:SE and X:NW, not X:{corner}")
    n = G.n
    Gr = rotate_grid(G)
    Gsr = rotate_grid(Gs)
    cr = n - 1 - c
    if stabilize(Gr, "X", "SE", cr) != Gsr:
        raise NotAStabilization("rotated block is not X:SE")
    point, O1, O2, X2, *maps = _se_maps(Gr, cr, Gsr, long_ok)
    m = Gs.n

    def var_big(i):
        return m - 1 - i

    def var_small(i):
        return n - 1 - i

    conj = []
    for f in maps[:3]:
        conj.append(conjugate(f, Gs, Gs, rotate_state, var_big))
    ep, e = maps[3], maps[4]
    ep2 = ChainMap("e'", G, Gs, ep.source_theory, ep.target_theory,
                   lambda s: ChainElement.basis(rotate_state(next(iter(ep(rotate_state(s)).terms)))),
                   None, False, {var_small(k): var_big(v) for k, v in ep.var_map.items()})
    e2 = ChainMap("e", Gs, G, e.source_theory, e.target_theory,
                  lambda x: ChainElement.basis(rotate_state(next(iter(e(rotate_state(x)).terms)))),
                  None, False, {var_big(k): var_small(v) for k, v in e.var_map.items()},
                  lambda x: e.domain(rotate_state(x)))
    pt = ((m - point[0]) % m, (m - point[1]) % m)
    return StabilizationMaps(G, Gs, corner, c, pt, var_big(O1), var_big(O2), var_big(X2),
                             conj[0], conj[1], conj[2], ep2, e2)


# ---------------------------------------------------------------- birth

def birth_grid(G: GridDiagram, p: int) -> GridDiagram:
    """Insert an unknotted 2x2 block touching the bottom right corner of the O in column p."""
    if not 0 <= p < G.n:
        raise NotABirth(f"column {p} outside 0..{G.n - 1}")
    n = G.n
    q = G.O[p]
    X = [0] * (n + 2)
    O = [0] * (n + 2)
    for k in range(n):
        kk = k if k <= p else k + 2
        X[kk] = G.X[k] if G.X[k] < q else G.X[k] + 2
        O[kk] = G.O[k] if G.O[k] < q else G.O[k] + 2
    O[p + 1], X[p + 1] = q + 1, q
    X[p + 2], O[p + 2] = q + 1, q
    return validate_grid(n + 2, X, O)


@dataclass(frozen=True)
class BirthDecomposition:
    """Points a, b of a birth block and the split of the plus states."""

    minus: GridDiagram
    plus: GridDiagram
    p: int
    q: int

    @property
    def a(self):
        return self.p + 1, self.q + 2

    @property
    def b(self):
        return self.p + 2, self.q + 1

    def part(self, x):
        ha = x[self.p + 1] == self.q + 2
        hb = x[self.p + 2] == self.q + 1
        return ("A" if ha else "N") + ("B" if hb else "N")

    def e(self, x):
        """AB state of the plus grid -> state of the minus grid."""
        if self.part(x) != "AB":
            raise NotABirth("e is only defined on AB")
        p, q = self.p, self.q
        out = []
        for k in range(self.minus.n):
            v = x[k if k <= p else k + 2]
            out.append(v if v <= q else v - 2)
        return tuple(out)

    def e_inverse(self, s):
        p, q = self.p, self.q
        x = [0] * self.plus.n
        for k, v in enumerate(s):
            x[k if k <= p else k + 2] = v if v <= q else v + 2
        x[p + 1], x[p + 2] = q + 2, q + 1
        return tuple(x)


def birth_decomposition(G_minus: GridDiagram, G_plus: GridDiagram) -> BirthDecomposition:
    if G_plus.n != G_minus.n + 2:
        raise NotABirth("a birth adds two rows and two columns")
    for p in range(G_minus.n):
        if birth_grid(G_minus, p) == G_plus:
            return BirthDecomposition(G_minus, G_plus, p, G_minus.O[p])
    raise NotABirth("no birth block below and right of an O")


def birth_map(G_minus: GridDiagram, G_plus: GridDiagram) -> ChainMap:
    """e o psi o Pi on the filtered complexes, plus -> minus."""
    D = birth_decomposition(G_minus, G_plus)
    C = GridComplex(G_plus)
    n = G_plus.n
    p, q = D.p, D.q
    Ob = C.Ob
    O23 = (1 << ((p + 1) * n + q + 1)) | (1 << ((p + 2) * n + q))
    X23 = (1 << ((p + 1) * n + q)) | (1 << ((p + 2) * n + q + 1))
    bbit = 1 << ((p + 2) * n + q + 1)

    def psi(x):
        out = ChainElement()
        xb = C.state_board(x)
        for c1, c2, w, h, cm, im in C.raw_rects(x):
            if c1 != p + 1:
                continue
            y = list(x)
            y[c1], y[c2] = x[c2], x[c1]
            if D.part(y) != "AB":
                continue
            if cm & Ob != O23 or cm & X23 != X23 or not im & bbit:
                continue
            k = bin(im & xb).count("1") - 1
            out.add_term(D.e(tuple(y)), Monomial(k))
        return out

    lp = link_components(G_plus)[0]
    lm = link_components(G_minus)[0]
    return ChainMap("B", G_plus, G_minus, Theory.FilteredOBig, Theory.FilteredOBig, psi,
                    (1, lp - lm - 1), True, None, lambda x: D.part(x) == "NB")


# ---------------------------------------------------------------- obstruction

def shift_bidegree(a, twob):
    """(M, 2A) change of a grading preserving map into C[[a, b]]."""
    return -a, -twob


@dataclass
class ObstructionReport:
    source: GridDiagram  # the negative end
    target: GridDiagram  # the positive end
    rot_match: bool
    chi: int
    parity_ok: bool
    lambda_plus: dict
    lambda_minus: dict
    verdict: str
    reasons: List[str]
    shift: tuple

    @property
    def obstructed(self):
        return self.verdict == "OBSTRUCTED"

    def to_dict(self):
        return {
            "from": self.source.to_dict(),
            "to": self.target.to_dict(),
            "classical": {"rot_match": self.rot_match, "chi": self.chi,
                          "parity_ok": self.parity_ok},
            "lambda_plus": dict(self.lambda_plus),
            "lambda_minus": dict(self.lambda_minus),
            "verdict": self.verdict,
            "reasons": list(self.reasons),
            "shift": list(self.shift),
        }


def obstruct_cobordism(G_minus: GridDiagram, G_plus: GridDiagram, jobs=1) -> ObstructionReport:
    """Can a decomposable Lagrangian cobordism run from G_minus up to G_plus?

    Lambda entries record whether the enhanced hat class vanishes at each
    end (decided in the fully blocked enhanced theory).
    """
    from .homology import canonical_vanishing

    cm = classical_invariants(G_minus)
    cp = classical_invariants(G_plus)
    chi = cm.tb - cp.tb
    rot_match = cm.rot == cp.rot
    parity_ok = (chi - cm.components - cp.components) % 2 == 0
    reasons = []
    if not rot_match:
        reasons.append("classical: rotation numbers differ")
    if not parity_ok:
        reasons.append("classical: Euler characteristic has the wrong parity")
    lam = {}
    for which in ("plus", "minus"):
        lam[which] = {
            "from": canonical_vanishing(G_minus, which, Theory.TildeOXBig, jobs).vanishes,
            "to": canonical_vanishing(G_plus, which, Theory.TildeOXBig, jobs).vanishes,
        }
        if lam[which]["to"] and not lam[which]["from"]:
            reasons.append(f"lambda_{which}: vanishes at the top end only")
    verdict = "OBSTRUCTED" if reasons else "NOT_OBSTRUCTED_BY_THESE_INVARIANTS"
    shift = (-chi, cp.components - cm.components - chi)
    return ObstructionReport(G_minus, G_plus, rot_match, chi, parity_ok, lam["plus"],
                             lam["minus"], verdict, reasons, shift)
