"""Exact F2 arithmetic: polynomials in V_1..V_n and v, chain elements, bit matrices.

Polynomials are sets of monomials (addition is symmetric difference).
Vectors over F2 are Python ints used as bitsets, bit j standing for basis
element j.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Tuple


class DimensionMismatch(ValueError):
    pass


class NoSolution(ValueError):
    pass


@dataclass(frozen=True, order=True)
class Monomial:
    v_exp: int = 0
    V_exps: Tuple[Tuple[int, int], ...] = ()  # sorted (index, exponent), exponents > 0

    def __post_init__(self):
        if self.v_exp < 0:
            raise ValueError("negative exponent of v")
        cleaned = tuple(sorted((int(i), int(e)) for i, e in self.V_exps if e))
        if any(e < 0 for _, e in cleaned):
            raise ValueError("negative exponent of V")
        idx = [i for i, _ in cleaned]
        if len(set(idx)) != len(idx):
            raise ValueError("repeated variable in monomial")
        object.__setattr__(self, "V_exps", cleaned)

    @classmethod
    def make(cls, v=0, V=None):
        V = V or {}
        return cls(v, tuple((i, e) for i, e in V.items() if e))

    def __mul__(self, other: "Monomial") -> "Monomial":
        d = dict(self.V_exps)
        for i, e in other.V_exps:
            d[i] = d.get(i, 0) + e
        return Monomial(self.v_exp + other.v_exp, tuple(d.items()))

    @property
    def V_degree(self):
        return sum(e for _, e in self.V_exps)

    def is_one(self):
        return self.v_exp == 0 and not self.V_exps

    def __str__(self):
        parts = []
        for i, e in self.V_exps:
            parts.append(f"V{i}" + (f"^{e}" if e > 1 else ""))
        if self.v_exp:
            parts.append("v" + (f"^{self.v_exp}" if self.v_exp > 1 else ""))
        return "*".join(parts) or "1"


ONE = Monomial()


class CoeffPoly:
    """Polynomial over F2; immutable."""

    __slots__ = ("terms",)

    def __init__(self, terms: Iterable[Monomial] = ()):
        acc = set()
        for t in terms:
            acc ^= {t}
        self.terms = frozenset(acc)

    @classmethod
    def one(cls):
        return cls([ONE])

    @classmethod
    def monomial(cls, v=0, V=None):
        return cls([Monomial.make(v, V)])

    def __add__(self, other):
        return CoeffPoly._raw(self.terms ^ other.terms)

    __sub__ = __add__

    def __mul__(self, other):
        acc = set()
        for s in self.terms:
            for t in other.terms:
                acc ^= {s * t}
        return CoeffPoly._raw(frozenset(acc))

    @classmethod
    def _raw(cls, fs):
        p = cls.__new__(cls)
        p.terms = fs
        return p

    def __eq__(self, other):
        return isinstance(other, CoeffPoly) and self.terms == other.terms

    def __hash__(self):
        return hash(self.terms)

    def __bool__(self):
        return bool(self.terms)

    def __repr__(self):
        if not self.terms:
            return "0"
        return " + ".join(str(t) for t in sorted(self.terms))

    def v_free(self):
        """Drop every term with a positive power of v."""
        return CoeffPoly._raw(frozenset(t for t in self.terms if t.v_exp == 0))


def poly_add(p: CoeffPoly, q: CoeffPoly) -> CoeffPoly:
    return p + q


def poly_mul(p: CoeffPoly, q: CoeffPoly) -> CoeffPoly:
    return p * q


class ChainElement:
    """Finite sum of states (tuples) with polynomial coefficients."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms: Dict[tuple, CoeffPoly] = {}
        if terms:
            for s, p in dict(terms).items():
                self.add_term(s, p)

    @classmethod
    def basis(cls, state, mono: Monomial = ONE):
        return cls({tuple(state): CoeffPoly([mono])})

    def add_term(self, state, poly):
        state = tuple(state)
        if isinstance(poly, Monomial):
            poly = CoeffPoly([poly])
        cur = self.terms.get(state)
        new = poly if cur is None else cur + poly
        if new:
            self.terms[state] = new
        else:
            self.terms.pop(state, None)

    def __add__(self, other):
        out = ChainElement(self.terms)
        for s, p in other.terms.items():
            out.add_term(s, p)
        return out

    def scale(self, poly):
        out = ChainElement()
        for s, p in self.terms.items():
            out.add_term(s, p * poly)
        return out

    def __eq__(self, other):
        return isinstance(other, ChainElement) and self.terms == other.terms

    def __bool__(self):
        return bool(self.terms)

    def __iter__(self):
        for s in sorted(self.terms):
            for m in sorted(self.terms[s].terms):
                yield s, m

    def __repr__(self):
        if not self.terms:
            return "0"
        return " + ".join(f"({self.terms[s]})*{list(s)}" for s in sorted(self.terms))

    def v_free(self):
        out = ChainElement()
        for s, p in self.terms.items():
            out.add_term(s, p.v_free())
        return out


# ------------------------------------------------------------ bit matrices

class BitMatrix:
    """Dense F2 matrix with rows packed into Python ints.

    Bit j of ``rows[i]`` is entry (i, j).  ``labels`` optionally names the
    columns (basis elements of a bigraded piece).
    """

    def __init__(self, nrows: int, ncols: int, rows: Optional[List[int]] = None, labels=None):
        self.nrows = nrows
        self.ncols = ncols
        self.rows = list(rows) if rows is not None else [0] * nrows
        if len(self.rows) != nrows:
            raise DimensionMismatch(f"{len(self.rows)} rows given, {nrows} declared")
        mask = (1 << ncols) - 1
        if any(r & ~mask for r in self.rows):
            raise DimensionMismatch("row has bits beyond the column count")
        self.labels = labels

    @classmethod
    def from_dense(cls, dense):
        dense = [list(r) for r in dense]
        m = len(dense)
        n = len(dense[0]) if m else 0
        rows = []
        for r in dense:
            if len(r) != n:
                raise DimensionMismatch("ragged input")
            rows.append(sum(1 << j for j, b in enumerate(r) if b & 1))
        return cls(m, n, rows)

    @classmethod
    def identity(cls, n):
        return cls(n, n, [1 << i for i in range(n)])

    def get(self, i, j):
        return (self.rows[i] >> j) & 1

    def set(self, i, j, bit=1):
        if bit:
            self.rows[i] |= 1 << j
        else:
            self.rows[i] &= ~(1 << j)

    def to_dense(self):
        return [[(r >> j) & 1 for j in range(self.ncols)] for r in self.rows]

    def transpose(self):
        cols = [0] * self.ncols
        for i, r in enumerate(self.rows):
            while r:
                low = r & -r
                cols[low.bit_length() - 1] |= 1 << i
                r ^= low
        return BitMatrix(self.ncols, self.nrows, cols)

    def columns(self):
        return self.transpose().rows

    def matvec(self, x: int) -> int:
        """M x for x a bitset over columns; result is a bitset over rows."""
        out = 0
        for i, r in enumerate(self.rows):
            if bin(r & x).count("1") & 1:
                out |= 1 << i
        return out

    def __eq__(self, other):
        return (isinstance(other, BitMatrix) and self.nrows == other.nrows
                and self.ncols == other.ncols and self.rows == other.rows)


def span_rank(vectors: Iterable[int]) -> int:
    """Rank over F2 of a family of bitset vectors."""
    piv: Dict[int, int] = {}
    for v in vectors:
        while v:
            h = v.bit_length() - 1
            p = piv.get(h)
            if p is None:
                piv[h] = v
                break
            v ^= p
    return len(piv)


class SpanSolver:
    """Incremental echelon basis with combination tracking.

    Feed vectors with :meth:`add`; :meth:`express` writes a target as a sum
    of fed vectors, returning the set of their indices as a bitset.
    """

    def __init__(self, track=True):
        self.piv: Dict[int, Tuple[int, int]] = {}
        self.count = 0
        self.track = track

    def add(self, v: int) -> bool:
        combo = (1 << self.count) if self.track else 0
        self.count += 1
        piv = self.piv
        while v:
            h = v.bit_length() - 1
            p = piv.get(h)
            if p is None:
                piv[h] = (v, combo)
                return True
            v ^= p[0]
            if self.track:
                combo ^= p[1]
        return False

    @property
    def rank(self):
        return len(self.piv)

    def express(self, target: int) -> Optional[int]:
        combo = 0
        piv = self.piv
        while target:
            h = target.bit_length() - 1
            p = piv.get(h)
            if p is None:
                return None
            target ^= p[0]
            combo ^= p[1]
        return combo


def rank(M: BitMatrix) -> int:
    return span_rank(M.rows)


def solve(M: BitMatrix, b: int) -> int:
    """Return some x (bitset over columns) with M x = b; raise NoSolution."""
    if isinstance(b, (list, tuple)):
        if len(b) != M.nrows:
            raise DimensionMismatch(f"right-hand side has {len(b)} entries, matrix {M.nrows} rows")
        b = sum(1 << i for i, bit in enumerate(b) if bit & 1)
    elif b >> M.nrows:
        raise DimensionMismatch("right-hand side has bits beyond the row count")
    solver = SpanSolver()
    for col in M.columns():
        solver.add(col)
    x = solver.express(b)
    if x is None:
        raise NoSolution("vector is not in the column space")
    return x


def bits(x: int) -> List[int]:
    out = []
    while x:
        low = x & -x
        out.append(low.bit_length() - 1)
        x ^= low
    return out
