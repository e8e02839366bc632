"""Grid diagrams: validation, Cromwell moves, link tracing and the Legendrian front.

Storage convention: ``X[c]`` and ``O[c]`` are the rows of the markings in
column ``c``.  Rows count bottom to top, columns left to right, and a marking
in column c, row r sits at the point (c + 1/2, r + 1/2) of the torus.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from math import factorial
from typing import Iterable, Sequence


class GridError(ValueError):
    """Base class for grid validation and move errors."""


class NotPermutation(GridError):
    pass


class SharedSquare(GridError):
    pass


class SizeTooSmall(GridError):
    pass


class IllegalCommutation(GridError):
    pass


class NoSuchPattern(GridError):
    pass


class OutOfRange(GridError):
    pass


class NotRelated(GridError):
    pass


class GridParseError(GridError):
    def __init__(self, msg, line=None):
        self.line = line
        if line is not None:
            msg = f"line {line}: {msg}"
        super().__init__(msg)


@dataclass(frozen=True)
class GridDiagram:
    n: int
    X: tuple
    O: tuple

    def __post_init__(self):
        object.__setattr__(self, "X", tuple(int(r) for r in self.X))
        object.__setattr__(self, "O", tuple(int(r) for r in self.O))

    def x_col(self):
        """Row-indexed view: column of the X marking in each row."""
        out = [0] * self.n
        for c, r in enumerate(self.X):
            out[r] = c
        return out

    def o_col(self):
        out = [0] * self.n
        for c, r in enumerate(self.O):
            out[r] = c
        return out

    def transpose(self):
        """Reflect across the diagonal; column c becomes row c."""
        return GridDiagram(self.n, tuple(self.x_col()), tuple(self.o_col()))

    def to_dict(self):
        return {"n": self.n, "X": list(self.X), "O": list(self.O)}


def _is_perm(seq, n):
    return len(seq) == n and sorted(seq) == list(range(n))


def validate_grid(n, X, O) -> GridDiagram:
    try:
        n = int(n)
        X = [int(r) for r in X]
        O = [int(r) for r in O]
    except (TypeError, ValueError) as exc:
        raise NotPermutation(f"non-integer grid data: {exc}") from None
    if n < 2:
        raise SizeTooSmall(f"grid size {n} < 2")
    if not _is_perm(X, n):
        raise NotPermutation(f"X={X} is not a permutation of 0..{n - 1}")
    if not _is_perm(O, n):
        raise NotPermutation(f"O={O} is not a permutation of 0..{n - 1}")
    for c in range(n):
        if X[c] == O[c]:
            raise SharedSquare(f"column {c}: X and O both in row {X[c]}")
    return GridDiagram(n, tuple(X), tuple(O))


def unknot2() -> GridDiagram:
    """The 2x2 grid of the Legendrian unknot with tb = -1."""
    return GridDiagram(2, (1, 0), (0, 1))


# ---------------------------------------------------------------- states

@dataclass(frozen=True)
class GridState:
    s: tuple

    @property
    def n(self):
        return len(self.s)

    @property
    def rank(self):
        return state_rank(self.s)

    @classmethod
    def from_rank(cls, n, k):
        return cls(state_unrank(n, k))


def state_rank(s: Sequence[int]) -> int:
    """Lehmer rank; agrees with lexicographic order of permutations."""
    n = len(s)
    k = 0
    rest = list(range(n))
    for i, v in enumerate(s):
        j = rest.index(v)
        k += j * factorial(n - 1 - i)
        rest.pop(j)
    return k


def state_unrank(n: int, k: int) -> tuple:
    if not 0 <= k < factorial(n):
        raise OutOfRange(f"rank {k} outside 0..{factorial(n) - 1}")
    rest = list(range(n))
    out = []
    for i in range(n):
        f = factorial(n - 1 - i)
        j, k = divmod(k, f)
        out.append(rest.pop(j))
    return tuple(out)


# ---------------------------------------------------------------- link

def link_components(G: GridDiagram):
    """Trace the link.

    Returns ``(count, labels, reps)``: ``labels[c]`` is the component of both
    markings in column c and ``reps[i]`` is the smallest O-column of
    component i (used as the variable V_k standing in for U_i).
    """
    xc = G.x_col()
    nxt = [xc[G.O[c]] for c in range(G.n)]  # O_c -> X in its row -> that column
    labels = [-1] * G.n
    reps = []
    for c0 in range(G.n):
        if labels[c0] >= 0:
            continue
        c = c0
        while labels[c] < 0:
            labels[c] = len(reps)
            c = nxt[c]
        reps.append(c0)
    return len(reps), labels, reps


def n_components(G: GridDiagram) -> int:
    return link_components(G)[0]


def canonical_states(G: GridDiagram):
    """(x_plus, x_minus): points NE and SW of the X markings."""
    n = G.n
    xm = tuple(G.X)
    xp = [0] * n
    for c in range(n):
        xp[(c + 1) % n] = (G.X[c] + 1) % n
    return tuple(xp), xm


# ---------------------------------------------------------------- front

@dataclass(frozen=True)
class ClassicalInvariants:
    tb: int
    rot: int
    components: int
    writhe: int
    cusps_up: int
    cusps_down: int

    @property
    def sl(self):
        return self.tb - self.rot


def front_data(G: GridDiagram):
    """Corners and crossings of the front obtained from the grid.

    The grid projection has vertical strands over horizontal ones, oriented
    O -> X along rows and X -> O along columns.  NW and SE corners get
    smoothed, NE and SW corners become right and left cusps, and after the
    45 degree clockwise turn every crossing is flipped.
    """
    n = G.n
    xc, oc = G.x_col(), G.o_col()
    up = down = 0
    cusps = []
    for c in range(n):
        for kind, r, other_col, other_row in (
            ("X", G.X[c], oc[G.X[c]], G.O[c]),
            ("O", G.O[c], xc[G.O[c]], G.X[c]),
        ):
            east = other_col > c
            north = other_row > r
            if east == north:
                # NE (west+south) is a right cusp, SW (east+north) a left cusp.
                # Entering an NE corner along X's row means travelling down.
                going_down = (kind == "X") == (not east)
                if going_down:
                    down += 1
                else:
                    up += 1
                cusps.append((c, r, "right" if not east else "left", going_down))
    crossings = []
    for c in range(n):
        lo, hi = sorted((G.X[c], G.O[c]))
        d = 1 if G.O[c] > G.X[c] else -1
        for r in range(lo + 1, hi):
            a, b = sorted((oc[r], xc[r]))
            if a < c < b:
                e = 1 if xc[r] > oc[r] else -1
                # grid sign is -d*e (vertical over); flipping negates it
                crossings.append((c, r, d * e))
    return cusps, crossings, up, down


def classical_invariants(G: GridDiagram) -> ClassicalInvariants:
    cusps, crossings, up, down = front_data(G)
    wr = sum(s for _, _, s in crossings)
    twice_tb = 2 * wr - (up + down)
    twice_rot = down - up
    assert twice_tb % 2 == 0 and twice_rot % 2 == 0
    return ClassicalInvariants(
        tb=twice_tb // 2,
        rot=twice_rot // 2,
        components=n_components(G),
        writhe=wr,
        cusps_up=up,
        cusps_down=down,
    )


# ---------------------------------------------------------------- moves

CORNERS = ("SE", "NW", "SW", "NE")
# Position (dc, dr) inside the 2x2 block of the single marking of the other
# kind; the empty cell is the opposite corner.
_LONE = {"SE": (0, 1), "NW": (1, 0), "SW": (1, 1), "NE": (0, 0)}


@dataclass(frozen=True)
class CyclicRow:
    up: bool = True  # True: top row moves to the bottom


@dataclass(frozen=True)
class CyclicCol:
    right: bool = True  # True: rightmost column moves to the left


@dataclass(frozen=True)
class Commutation:
    axis: str  # "row" or "col"
    i: int  # swaps i and i+1


@dataclass(frozen=True)
class Stabilization:
    marker: str  # "X" or "O"
    corner: str
    c: int


@dataclass(frozen=True)
class Destabilization:
    marker: str
    corner: str
    c: int  # lower-left cell of the 2x2 block
    r: int


def _check_col(G, c):
    if not 0 <= c < G.n:
        raise OutOfRange(f"column {c} outside 0..{G.n - 1}")


def cyclic_row(G, up=True):
    n = G.n
    s = 1 if up else -1
    return GridDiagram(n, [(r + s) % n for r in G.X], [(r + s) % n for r in G.O])


def cyclic_col(G, right=True):
    s = 1 if right else -1
    n = G.n
    X = [0] * n
    O = [0] * n
    for c in range(n):
        X[(c + s) % n] = G.X[c]
        O[(c + s) % n] = G.O[c]
    return GridDiagram(n, X, O)


def commutation_legal(G, axis, i):
    if axis == "col":
        return commutation_legal(G.transpose(), "row", i)
    if not 0 <= i < G.n - 1:
        return False
    xc, oc = G.x_col(), G.o_col()
    s1 = sorted((xc[i], oc[i]))
    s2 = sorted((xc[i + 1], oc[i + 1]))
    ends = set(s1) | set(s2)
    if len(ends) < 4:
        return False  # a shared column is not a commutation
    inside = [s1[0] < e < s1[1] for e in s2]
    return inside[0] == inside[1]


def commute(G, axis, i):
    if axis not in ("row", "col"):
        raise OutOfRange(f"axis must be row or col, got {axis!r}")
    if not 0 <= i < G.n - 1:
        raise OutOfRange(f"commutation index {i} outside 0..{G.n - 2}")
    if not commutation_legal(G, axis, i):
        raise IllegalCommutation(f"{axis}s {i} and {i + 1} interleave")
    if axis == "col":
        return commute(G.transpose(), "row", i).transpose()
    sw = {i: i + 1, i + 1: i}
    return GridDiagram(G.n, [sw.get(r, r) for r in G.X], [sw.get(r, r) for r in G.O])


def stabilize(G, marker, corner, c):
    """Replace the ``marker`` square in column c by a 2x2 block.

    The block has two ``marker`` cells on a diagonal, one cell of the other
    kind, and the empty cell named by ``corner``.
    """
    if marker not in ("X", "O"):
        raise OutOfRange(f"marker must be X or O, got {marker!r}")
    if corner not in _LONE:
        raise OutOfRange(f"corner must be one of {CORNERS}")
    _check_col(G, c)
    if marker == "O":
        H = stabilize(GridDiagram(G.n, G.O, G.X), "X", corner, c)
        return GridDiagram(H.n, H.O, H.X)
    n = G.n
    r = G.X[c]
    j = G.o_col()[r]  # the O sharing the row with our X
    dc, dr = _LONE[corner]

    def sc(col):
        return col + 1 if col > c else col

    def sr(row):
        return row + 1 if row > r else row

    X = [None] * (n + 1)
    O = [None] * (n + 1)
    for k in range(n):
        if k != c:
            X[sc(k)] = sr(G.X[k])
            O[sc(k)] = sr(G.O[k]) if k != j else r + 1 - dr
    # lone O at (c+dc, r+dr); X's at (c+1-dc, r+dr) and (c+dc, r+1-dr)
    O[c + dc] = r + dr
    X[c + 1 - dc] = r + dr
    X[c + dc] = r + 1 - dr
    # column c+1-dc keeps the old column's O; row r+1-dr keeps the old row's O
    O[c + 1 - dc] = sr(G.O[c])
    return validate_grid(n + 1, X, O)


def destabilize(G, marker, corner, c, r):
    """Inverse of :func:`stabilize`; (c, r) is the block's lower-left cell."""
    if G.n < 3:
        raise NoSuchPattern("cannot destabilize below size 2")
    if marker not in ("X", "O") or corner not in _LONE:
        raise OutOfRange("bad marker or corner")
    if not (0 <= c < G.n - 1 and 0 <= r < G.n - 1):
        raise OutOfRange(f"block at ({c},{r}) does not fit")
    if marker == "O":
        H = destabilize(GridDiagram(G.n, G.O, G.X), "X", corner, c, r)
        return GridDiagram(H.n, H.O, H.X)
    dc, dr = _LONE[corner]
    ok = (G.O[c + dc] == r + dr and G.X[c + 1 - dc] == r + dr
          and G.X[c + dc] == r + 1 - dr)
    if not ok:
        raise NoSuchPattern(f"no X:{corner} block at ({c},{r})")
    n = G.n - 1

    def dc_(col):
        return col - 1 if col > c else col

    def dr_(row):
        return row - 1 if row > r else row

    X = [None] * n
    O = [None] * n
    for k in range(G.n):
        if k in (c, c + 1):
            continue
        X[dc_(k)] = dr_(G.X[k])
        O[dc_(k)] = dr_(G.O[k])
    X[c] = r
    O[c] = dr_(G.O[c + 1 - dc])
    H = validate_grid(n, X, O)
    if stabilize(H, "X", corner, c) != G:
        raise NoSuchPattern(f"block at ({c},{r}) is not a stabilization")
    return H


def stabilization_block(G, marker, corner, c):
    """Lower-left cell of the block created by ``stabilize(G, marker, corner, c)``."""
    r = G.X[c] if marker == "X" else G.O[c]
    return c, r


def apply_move(G: GridDiagram, m) -> GridDiagram:
    if isinstance(m, CyclicRow):
        return cyclic_row(G, m.up)
    if isinstance(m, CyclicCol):
        return cyclic_col(G, m.right)
    if isinstance(m, Commutation):
        return commute(G, m.axis, m.i)
    if isinstance(m, Stabilization):
        return stabilize(G, m.marker, m.corner, m.c)
    if isinstance(m, Destabilization):
        return destabilize(G, m.marker, m.corner, m.c, m.r)
    raise OutOfRange(f"unknown move {m!r}")


def find_destabilizations(G):
    """All X-type destabilization moves available on G."""
    out = []
    if G.n < 3:
        return out
    for corner in CORNERS:
        for c in range(G.n - 1):
            for r in range(G.n - 1):
                try:
                    destabilize(G, "X", corner, c, r)
                except (NoSuchPattern, GridError):
                    continue
                out.append(Destabilization("X", corner, c, r))
    return out


# ------------------------------------------------------- combined diagram

@dataclass(frozen=True)
class CombinedDiagram:
    """Two grids differing in how markings sit around one horizontal curve.

    ``plus`` uses the curve alpha and ``minus`` uses alpha'.  Everything is
    stored in row form (``band`` is the index of the replaced horizontal
    circle, between rows band-1 and band); a column relation is stored
    transposed with ``axis == "col"``.

    Along the circle the curves bound two lenses: over ``down`` columns alpha
    runs above alpha', over the rest below.  ``a`` is the crossing where
    alpha passes from above to below (left to right) and ``b`` the other
    one; both are x-coordinates in (0, n).
    """

    minus: GridDiagram
    plus: GridDiagram
    axis: str
    kind: str  # "commutation", "x_swap" or "o_swap"
    band: int
    a: float
    b: float
    swapped: tuple = field(default=())  # columns of the swapped band markings

    @property
    def n(self):
        return self.plus.n

    @property
    def row_plus(self):
        return self.plus if self.axis == "row" else self.plus.transpose()

    @property
    def row_minus(self):
        return self.minus if self.axis == "row" else self.minus.transpose()

    def alpha_high(self, x):
        """Is alpha the upper curve at abscissa x (mod n)?"""
        n = self.n
        x %= n
        return (x - self.b) % n < (self.a - self.b) % n


def _row_relation(Gm, Gp):
    """Classify two grids as a row commutation or swap at some band."""
    n = Gp.n
    if Gm.n != n or Gm == Gp:
        return None
    dX = [c for c in range(n) if Gm.X[c] != Gp.X[c]]
    dO = [c for c in range(n) if Gm.O[c] != Gp.O[c]]
    rows = {Gp.X[c] for c in dX} | {Gp.O[c] for c in dO}
    rows |= {Gm.X[c] for c in dX} | {Gm.O[c] for c in dO}
    if len(rows) != 2:
        return None
    i, j = sorted(rows)
    if j != i + 1:
        return None
    sw = {i: j, j: i}
    for c in dX:
        if Gm.X[c] != sw[Gp.X[c]]:
            return None
    for c in dO:
        if Gm.O[c] != sw[Gp.O[c]]:
            return None
    xc, oc = Gp.x_col(), Gp.o_col()
    band_X = {xc[i], xc[j]}
    band_O = {oc[i], oc[j]}
    if set(dX) == band_X and set(dO) == band_O:
        kind = "commutation"
    elif set(dX) == band_X and not dO:
        kind = "x_swap"
    elif set(dO) == band_O and not dX:
        kind = "o_swap"
    else:
        return None
    return kind, j


def _place_a(n, last_d, first_u, x_lo, x_hi):
    """Abscissa of a between the last D and first U marking centres.

    When the band X's border the gap, a is pushed right of the vertical
    circle after the lower X and left of the one through the upper X, so
    that the canonical states have a thin empty pentagon.  If that window is
    empty (adjacent X's) the plain choice last_d + 0.75 is used.
    """
    lo = 4 * last_d + 2
    hi = lo + (4 * ((first_u - last_d) % n))
    L, U = lo, hi
    if x_lo == last_d:
        L = max(L, 4 * (last_d + 1))
    if x_hi == first_u:
        U = min(U, hi - 2)
    for t in range(L + 1, U):
        if t % 4:
            return (t / 4) % n
    return (last_d + 0.75) % n


def _place_crossings(Gp, kind, band):
    """Positions of a and b for the row-form relation at ``band``."""
    n = Gp.n
    lo, hi = band - 1, band
    xc, oc = Gp.x_col(), Gp.o_col()
    cols = []
    if kind in ("commutation", "x_swap"):
        cols += [(xc[lo], "D"), (xc[hi], "U")]
    if kind in ("commutation", "o_swap"):
        cols += [(oc[lo], "D"), (oc[hi], "U")]
    if len({c for c, _ in cols}) != len(cols):
        raise NotRelated("band markings share a column")
    cols.sort()
    # the D and U markings must each be contiguous around the circle
    labels = [t for _, t in cols]
    changes = [k for k in range(len(cols)) if labels[k] != labels[k - 1]]
    if len(changes) != 2:
        raise NotRelated("swapped markings interleave; no two-crossing picture")
    a = b = None
    for k in changes:
        prev_c, prev_t = cols[k - 1]
        nxt_c, _ = cols[k]
        gap = (nxt_c - prev_c) % n
        if prev_t == "D":
            if kind == "x_swap" and gap < 2:
                raise NotRelated("swapped X's must be two columns apart")
            a = _place_a(n, prev_c, nxt_c, xc[lo] if kind != "o_swap" else None,
                         xc[hi] if kind != "o_swap" else None)
        else:
            b = (prev_c + 0.75) % n
    return a, b, tuple(c for c, _ in cols)


def combined_diagram(G_minus: GridDiagram, G_plus: GridDiagram) -> CombinedDiagram:
    """Combine grids related by a commutation or an X/O swap.

    Maps built on the result go from ``G_plus`` (curve alpha) to ``G_minus``.
    """
    rel = _row_relation(G_minus, G_plus)
    axis = "row"
    if rel is None:
        rel = _row_relation(G_minus.transpose(), G_plus.transpose())
        axis = "col"
    if rel is None:
        raise NotRelated("diagrams do not differ by one commutation or swap")
    kind, band = rel
    Gp = G_plus if axis == "row" else G_plus.transpose()
    if kind == "commutation":
        lo = band - 1
        if not commutation_legal(Gp, "row", lo):
            raise NotRelated("rows interleave; not a commutation")
    a, b, swapped = _place_crossings(Gp, kind, band)
    return CombinedDiagram(G_minus, G_plus, axis, kind, band, a, b, swapped)


# ---------------------------------------------------------------- files

def parse_grid_text(text: str) -> GridDiagram:
    rows = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("%"):
            continue
        rows.append((lineno, line))
    if len(rows) < 3:
        last = rows[-1][0] if rows else 1
        raise GridParseError("expected three lines: n, X:, O:", last)
    if len(rows) > 3:
        raise GridParseError("unexpected extra content", rows[3][0])
    (ln, first), (lx, xline), (lo, oline) = rows
    try:
        n = int(first)
    except ValueError:
        raise GridParseError(f"grid size {first!r} is not an integer", ln) from None

    def field_(line, lineno, tag):
        if not line.startswith(tag + ":"):
            raise GridParseError(f"expected '{tag}:' prefix", lineno)
        parts = line[len(tag) + 1:].split()
        try:
            vals = [int(p) for p in parts]
        except ValueError:
            raise GridParseError(f"non-integer entry in {tag} line", lineno) from None
        if len(vals) != n:
            raise GridParseError(f"{tag} has {len(vals)} entries, expected {n}", lineno)
        return vals

    X = field_(xline, lx, "X")
    O = field_(oline, lo, "O")
    return validate_grid(n, X, O)


def parse_grid_json(text: str) -> GridDiagram:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GridParseError(f"invalid JSON: {exc.msg} (column {exc.colno})", exc.lineno) from None
    if not isinstance(data, dict) or not {"n", "X", "O"} <= set(data):
        raise GridParseError("JSON grid needs keys n, X, O", 1)
    if not isinstance(data["X"], list) or not isinstance(data["O"], list):
        raise GridParseError("X and O must be arrays", 1)
    if len(data["X"]) != data["n"] or len(data["O"]) != data["n"]:
        raise NotPermutation("X and O must have n entries")
    return validate_grid(data["n"], data["X"], data["O"])


def parse_grid(text: str) -> GridDiagram:
    if text.lstrip().startswith("{"):
        return parse_grid_json(text)
    return parse_grid_text(text)


def load_grid(path) -> GridDiagram:
    with open(path, encoding="utf-8") as fh:
        return parse_grid(fh.read())


def grid_to_json(G: GridDiagram) -> str:
    return json.dumps(G.to_dict())


def grid_to_text(G: GridDiagram) -> str:
    return (f"{G.n}\nX: " + " ".join(map(str, G.X))
            + "\nO: " + " ".join(map(str, G.O)) + "\n")


def all_grids(n: int) -> Iterable[GridDiagram]:
    """Every valid (X, O) pair of size n."""
    from itertools import permutations

    for X in permutations(range(n)):
        for O in permutations(range(n)):
            if all(X[c] != O[c] for c in range(n)):
                yield GridDiagram(n, X, O)


def random_grid(n: int, rng) -> GridDiagram:
    """Uniform valid grid of size n from a ``random.Random``-like rng."""
    while True:
        X = list(range(n))
        O = list(range(n))
        rng.shuffle(X)
        rng.shuffle(O)
        if all(X[c] != O[c] for c in range(n)):
            return GridDiagram(n, X, O)
