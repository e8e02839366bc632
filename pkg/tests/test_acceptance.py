"""The ten acceptance criteria, one test each, each printing a PASS/FAIL line."""

import random
import time
from contextlib import contextmanager

from conftest import ACCEPTANCE
from gridhom.cli import EXIT_OBSTRUCTED, EXIT_OK, run
from gridhom.complex import ALL_THEORIES, Theory, check_d_squared, check_homogeneity, gradings
from gridhom.grid_core import (
    Commutation,
    CyclicCol,
    CyclicRow,
    Stabilization,
    all_grids,
    apply_move,
    classical_invariants,
    commutation_legal,
    find_destabilizations,
    grid_to_json,
    random_grid,
    stabilize,
    unknot2,
)
from gridhom.homology import TheoremViolation, homology_dims, lambda_report, w_factor_check
from gridhom.suites import SUITES, run_suites

SEEN = set()  # every grid processed by criteria 1-6


@contextmanager
def criterion(k, title):
    t0 = time.perf_counter()
    try:
        yield
    except BaseException as exc:
        line = f"criterion {k:2d} FAIL  {title}: {type(exc).__name__}: {str(exc)[:120]}"
        print(line)
        ACCEPTANCE.append(line)
        raise
    line = f"criterion {k:2d} PASS  {title} ({time.perf_counter() - t0:.1f}s)"
    print(line)
    ACCEPTANCE.append(line)


def _corpus():
    rng = random.Random(2024)
    grids = list(all_grids(3))
    grids += [random_grid(4, rng) for _ in range(200)]
    grids += [random_grid(5, rng) for _ in range(200)]
    return grids


def _enhanced(G):
    r = lambda_report(G)
    return r.plus["enhanced_vanishes"], r.minus["enhanced_vanishes"]


def test_criterion_01_d_squared():
    with criterion(1, "d^2 = 0, all theories, n=3 exhaustive + 400 seeded at n=4,5"):
        t0 = time.perf_counter()
        bad = []
        for G in _corpus():
            SEEN.add(G)
            for th in ALL_THEORIES:
                r = check_d_squared(G, th)
                if r is not None:
                    bad.append((G, th, r[0]))
        assert not bad, bad[:3]
        assert time.perf_counter() - t0 < 60


def test_criterion_02_homogeneity():
    with criterion(2, "differential terms homogeneous of degree (-1, 0)"):
        bad = []
        for G in _corpus():
            for th in ALL_THEORIES:
                bad += check_homogeneity(G, th)
        assert not bad, bad[:3]


def test_criterion_03_unknot():
    with criterion(3, "2x2 unknot ground truth"):
        G = unknot2()
        SEEN.add(G)
        assert {s: gradings(G, s) for s in ((1, 0), (0, 1))} == {(1, 0): (0, 0), (0, 1): (-1, -2)}
        assert homology_dims(G, Theory.TildeOX).dims == {(0, 0): 1, (-1, -2): 1}
        assert _enhanced(G) == (False, False)
        ci = classical_invariants(G)
        assert (ci.tb, ci.rot) == (-1, 0)


def test_criterion_04_w_factor():
    with criterion(4, "W-factor divisibility, 50 seeded grids n<=5"):
        t0 = time.perf_counter()
        rng = random.Random(4)
        bad = []
        for _ in range(50):
            G = random_grid(rng.randint(2, 5), rng)
            SEEN.add(G)
            for th in (Theory.TildeOX, Theory.TildeOXBig):
                ok, _ = w_factor_check(G, th, v_cutoff=4 if th.big else None)
                if not ok:
                    bad.append((G, th))
        assert not bad, bad[:3]
        assert time.perf_counter() - t0 < 300


def test_criterion_05_stabilization_vanishing():
    with criterion(5, "X:NE kills lambda+, X:SW kills lambda-, 50 seeded grids n<=4"):
        rng = random.Random(5)
        bad = []
        for _ in range(50):
            G = random_grid(rng.randint(2, 4), rng)
            c = rng.randrange(G.n)
            ne, sw = stabilize(G, "X", "NE", c), stabilize(G, "X", "SW", c)
            SEEN.update((G, ne, sw))
            if not _enhanced(ne)[0]:
                bad.append(("NE", G, c))
            if not _enhanced(sw)[1]:
                bad.append(("SW", G, c))
        assert not bad, bad[:3]


def test_criterion_06_chain_map_suites():
    with criterion(6, "chain-map suites: commutation, stabilization, pinch, birth"):
        t0 = time.perf_counter()
        checks = run_suites([s for s in SUITES if s != "d2"], seed=6, max_n=5, seen=SEEN)
        failed = [c for c in checks if not c.ok]
        assert not failed, [(c.label, c.detail) for c in failed[:3]]
        assert time.perf_counter() - t0 < 600


def test_criterion_07_implication():
    with criterion(7, f"enhanced vanishing implies classical vanishing on {len(SEEN)} grids"):
        assert SEEN
        for G in sorted(SEEN, key=lambda g: (g.n, g.X, g.O)):
            try:
                lambda_report(G)  # raises TheoremViolation on a counterexample
            except TheoremViolation as exc:
                raise AssertionError(str(exc)) from None


def _random_move(G, rng, corners):
    opts = [CyclicRow(True), CyclicRow(False), CyclicCol(True), CyclicCol(False)]
    opts += [Commutation(a, i) for a in ("row", "col") for i in range(G.n - 1)
             if commutation_legal(G, a, i)]
    if G.n < 6:
        opts += [Stabilization("X", k, c) for k in corners for c in range(G.n)]
    opts += [d for d in find_destabilizations(G) if d.corner in corners]
    return rng.choice(opts)


def test_criterion_08_invariance_smoke():
    with criterion(8, "vanishing constant along 20+20 seeded Legendrian move sequences"):
        rng = random.Random(8)
        bad = []
        for i in range(40):
            G = random_grid(rng.randint(2, 3), rng)
            if i % 2:
                G = stabilize(G, "X", rng.choice(["NE", "SW"]), 0)
            with_sw = i >= 20
            corners = ("SE", "NW", "SW") if with_sw else ("SE", "NW")
            v0 = _enhanced(G)
            for step in range(rng.randint(1, 6)):
                G = apply_move(G, _random_move(G, rng, corners))
                v = _enhanced(G)
                if (v[0] != v0[0]) if with_sw else (v != v0):
                    bad.append((i, step, G))
        assert not bad, bad[:3]


def test_criterion_09_obstruction(tmp_path):
    with criterion(9, "obstruct: unknot -> X:NE unknot obstructed, unknot -> unknot not"):
        U = unknot2()
        u = tmp_path / "u.json"
        s = tmp_path / "s.json"
        u.write_text(grid_to_json(U))
        s.write_text(grid_to_json(stabilize(U, "X", "NE", 0)))
        t0 = time.perf_counter()
        assert run(["obstruct", str(u), str(s)])[0] == EXIT_OBSTRUCTED
        assert time.perf_counter() - t0 < 1
        t0 = time.perf_counter()
        assert run(["obstruct", str(u), str(u)])[0] == EXIT_OK
        assert time.perf_counter() - t0 < 1


def test_criterion_10_performance():
    with criterion(10, "lambda decision at n=8 under 60 s, n=9 with 4 jobs under 15 min"):
        rng = random.Random(10)
        for n, jobs, limit in ((8, 1, 60), (9, 4, 900)):
            G = random_grid(n, rng)
            t0 = time.perf_counter()
            lambda_report(G, jobs=jobs)
            assert time.perf_counter() - t0 < limit, (n, time.perf_counter() - t0)
