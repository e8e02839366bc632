import pytest
from hypothesis import given, strategies as st

from gridhom.algebra import (
    BitMatrix,
    ChainElement,
    CoeffPoly,
    DimensionMismatch,
    Monomial,
    NoSolution,
    SpanSolver,
    bits,
    rank,
    solve,
    span_rank,
)

monos = st.builds(
    Monomial.make,
    st.integers(0, 3),
    st.dictionaries(st.integers(0, 3), st.integers(0, 2), max_size=3),
)
polys = st.lists(monos, max_size=5).map(CoeffPoly)


def dense_rank(rows, ncols):
    rows = [list(r) for r in rows]
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                rows[i] = [a ^ b for a, b in zip(rows[i], rows[r])]
        r += 1
    return r


@given(polys, polys, polys)
def test_ring_axioms(p, q, r):
    assert p + q == q + p
    assert (p + q) + r == p + (q + r)
    assert p * q == q * p
    assert (p * q) * r == p * (q * r)
    assert p * (q + r) == p * q + p * r
    assert p + p == CoeffPoly()
    assert p * CoeffPoly.one() == p


def test_monomial_rules():
    m = Monomial.make(1, {0: 1, 2: 3})
    assert (m * m).v_exp == 2
    assert (m * m).V_degree == 8
    assert str(Monomial.make(2, {1: 1})) == "V1*v^2"
    assert Monomial().is_one()
    with pytest.raises(ValueError):
        Monomial(-1)


def test_v_free_drops_v_terms():
    p = CoeffPoly([Monomial.make(0, {1: 1}), Monomial.make(2)])
    assert p.v_free() == CoeffPoly([Monomial.make(0, {1: 1})])


def test_chain_element_cancels():
    x = (0, 1)
    a = ChainElement.basis(x)
    assert not (a + a)
    b = ChainElement.basis(x, Monomial.make(1))
    assert (a + b).terms[x] == CoeffPoly([Monomial(), Monomial.make(1)])
    assert not (a + b).v_free() == (a + b)


binmats = st.integers(0, 7).flatmap(
    lambda m: st.integers(0, 7).flatmap(
        lambda n: st.lists(st.lists(st.integers(0, 1), min_size=n, max_size=n), min_size=m, max_size=m)
        .map(lambda rows: (rows, n))))


@given(binmats)
def test_rank_matches_dense_elimination(data):
    rows, n = data
    M = BitMatrix.from_dense(rows) if rows else BitMatrix(0, n)
    assert rank(M) == dense_rank(rows, n)
    assert rank(M.transpose()) == rank(M)
    assert M.transpose().transpose() == M


@given(binmats, st.data())
def test_solve_finds_preimage(data, draw):
    rows, n = data
    if not rows:
        return
    M = BitMatrix.from_dense(rows)
    x = draw.draw(st.integers(0, (1 << n) - 1))
    b = M.matvec(x)
    y = solve(M, b)
    assert M.matvec(y) == b


def test_solve_no_solution_and_mismatch():
    M = BitMatrix.from_dense([[1, 0], [1, 0]])
    with pytest.raises(NoSolution):
        solve(M, [1, 0])
    with pytest.raises(DimensionMismatch):
        solve(M, [1, 0, 1])
    with pytest.raises(DimensionMismatch):
        BitMatrix(1, 2, [0b100])


def test_span_solver_tracks_combination():
    vecs = [0b1100, 0b0110, 0b0011]
    s = SpanSolver()
    for v in vecs:
        s.add(v)
    combo = s.express(0b1001)
    acc = 0
    for i in bits(combo):
        acc ^= vecs[i]
    assert acc == 0b1001
    assert s.express(0b1000) is None
    assert span_rank(vecs) == s.rank == 3


def test_identity_matrix():
    Id = BitMatrix.identity(5)
    assert rank(Id) == 5
    assert Id.to_dense()[2] == [0, 0, 1, 0, 0]
