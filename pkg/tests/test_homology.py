import pytest
from hypothesis import given

from conftest import grids
from gridhom.algebra import ChainElement, Monomial
from gridhom.complex import GridComplex, Theory
from gridhom.grid_core import GridDiagram, canonical_states, unknot2
from gridhom.homology import (
    NotACycle,
    NotHomogeneous,
    bigraded_piece,
    canonical_vanishing,
    class_vanishes,
    homology_dims,
    lambda_report,
    w_deconvolve,
    w_factor_check,
)

import oracle

# frozen from the brute-force oracle
STAB_TABLE = {(-2, -4): 1, (-1, -2): 2, (0, 0): 1}
TREFOIL = GridDiagram(5, (3, 4, 0, 1, 2), (0, 1, 2, 3, 4))
TREFOIL_TABLE = {(-4, -10): 1, (-3, -8): 5, (-2, -6): 11, (-1, -4): 14,
                 (0, -2): 11, (1, 0): 5, (2, 2): 1}
FROZEN = [
    # grid, tilde table, (M, 2A) of x+, x-, enhanced vanishing (+, -)
    (unknot2(), {(-1, -2): 1, (0, 0): 1}, (0, 0), (0, 0), (False, False)),
    (GridDiagram(3, (2, 1, 0), (1, 0, 2)), STAB_TABLE, (-2, -2), (0, 0), (True, False)),
    (GridDiagram(3, (2, 1, 0), (0, 2, 1)), STAB_TABLE, (0, 0), (-2, -2), (False, True)),
    (GridDiagram(3, (1, 2, 0), (2, 0, 1)), STAB_TABLE, (0, 0), (0, 0), (False, False)),
    (TREFOIL, TREFOIL_TABLE, (2, 2), (2, 2), (False, False)),
]


@pytest.mark.parametrize("G,table,gp,gm,van", FROZEN, ids=["unknot", "ne", "sw", "se", "trefoil"])
def test_frozen_values(G, table, gp, gm, van):
    assert homology_dims(G, Theory.TildeOX).dims == table
    rep = lambda_report(G)
    assert (rep.plus["M"], rep.plus["twoA"]) == gp
    assert (rep.minus["M"], rep.minus["twoA"]) == gm
    assert (rep.plus["enhanced_vanishes"], rep.minus["enhanced_vanishes"]) == van


@given(grids(max_n=4))
def test_tilde_homology_matches_oracle(G):
    assert homology_dims(G, Theory.TildeOX).dims == oracle.tilde_homology(G.n, list(G.X), list(G.O))


@given(grids(max_n=5))
def test_lambda_matches_oracle(G):
    n, X, O = G.n, list(G.X), list(G.O)
    rep = lambda_report(G)
    for d, x in zip((rep.plus, rep.minus), oracle.canonical(n, X)):
        assert d["enhanced_vanishes"] == oracle.enhanced_class_vanishes(n, X, O, x)
        assert d["classical_vanishes"] == oracle.classical_class_vanishes(n, X, O, x)


@given(grids(max_n=5))
def test_enhanced_vanishing_implies_classical(G):
    rep = lambda_report(G)
    for d in (rep.plus, rep.minus):
        assert not d["enhanced_vanishes"] or d["classical_vanishes"]


@given(grids(max_n=5))
def test_witness_is_a_primitive(G):
    for which in ("plus", "minus"):
        v = canonical_vanishing(G, which)
        if v.vanishes:
            x = canonical_states(G)[0 if which == "plus" else 1]
            assert GridComplex(G).apply(v.witness, Theory.TildeOXBig) == ChainElement.basis(x)


@given(grids(max_n=5))
def test_w_factor_tilde(G):
    ok, _ = w_factor_check(G, Theory.TildeOX)
    assert ok


@given(grids(max_n=4))
def test_w_factor_enhanced_below_cutoff(G):
    ok, _ = w_factor_check(G, Theory.TildeOXBig, v_cutoff=3)
    assert ok


def test_w_deconvolve_detects_non_multiple():
    assert w_deconvolve({(0, 0): 1, (-1, -2): 1}, 1)[1]
    assert not w_deconvolve({(0, 0): 1}, 1)[1]
    assert w_deconvolve({(0, 0): 1, (-1, -2): 2, (-2, -4): 1}, 2)[0] == {(0, 0): 1}


def test_bigraded_piece_enhanced_uses_v_powers():
    G = unknot2()
    piece = bigraded_piece(G, Theory.TildeOXBig, 2, 0)
    assert piece == [((1, 0), 1)]
    assert bigraded_piece(G, Theory.TildeOX, 2, 0) == []


def test_class_vanishes_errors():
    G = GridDiagram(3, (2, 1, 0), (1, 0, 2))
    mixed = ChainElement.basis((0, 1, 2)) + ChainElement.basis((2, 1, 0))
    with pytest.raises(NotHomogeneous):
        class_vanishes(G, Theory.TildeOXBig, mixed)
    with pytest.raises(NotHomogeneous):
        class_vanishes(G, Theory.TildeOXBig, ChainElement.basis((0, 1, 2), Monomial.make(0, {0: 1})))
    with pytest.raises(ValueError):
        class_vanishes(G, Theory.MinusX, ChainElement.basis((0, 1, 2)))
    C = GridComplex(G)
    noncycles = [s for s in ((0, 1, 2), (1, 2, 0), (2, 0, 1), (0, 2, 1), (1, 0, 2))
                 if C.differential(s, Theory.TildeOX)]
    assert noncycles
    with pytest.raises(NotACycle):
        class_vanishes(G, Theory.TildeOX, ChainElement.basis(noncycles[0]))


def test_zero_class_vanishes():
    assert class_vanishes(unknot2(), Theory.TildeOX, ChainElement()).vanishes


def test_jobs_give_same_answer():
    G = GridDiagram(7, (6, 0, 5, 1, 4, 2, 3), (1, 3, 0, 2, 6, 4, 5))
    a = homology_dims(G, Theory.TildeOX, jobs=1).dims
    b = homology_dims(G, Theory.TildeOX, jobs=2).dims
    assert a == b
