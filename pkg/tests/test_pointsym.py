"""Point-symmetry quotient boards against the oracle and published values."""

import pytest
from hypothesis import given, strategies as st

from polycensus.growth import figures, walk_problem
from polycensus.oracle import classify, iter_levels, oracle_tables
from polycensus.pointsym import (
    POINT_KINDS,
    center_cells,
    core_problem,
    count_point_class,
    diag_problem,
    orbit,
    point_map,
    point_tables,
    quotient,
    rep,
    ring_problem,
    scan_problem,
)

N_ORACLE = 9


@pytest.fixture(scope="module")
def oracle():
    return oracle_tables(N_ORACLE)


@pytest.fixture(scope="module")
def engine():
    return {kind: point_tables(kind, N_ORACLE, jit=False) for kind in POINT_KINDS}


@pytest.mark.parametrize("kind", POINT_KINDS)
def test_totals_match_oracle(oracle, engine, kind):
    for n in range(1, N_ORACLE + 1):
        assert engine[kind]["total"][n] == oracle[kind][n]


@pytest.mark.parametrize("kind", POINT_KINDS)
@pytest.mark.parametrize("part", ["core", "rings"])
def test_splits_match_oracle(oracle, engine, kind, part):
    for n in range(1, N_ORACLE + 1):
        assert engine[kind][part][n] == oracle[f"{kind}_{part}"][n]


@pytest.mark.parametrize("kind", POINT_KINDS)
def test_figures_are_exactly_the_oracle_shapes(kind):
    got = []
    for problem in (core_problem(kind, 8), ring_problem(kind, 8)):
        got.extend(fig for _, fig in figures(problem, 8))
    if kind == "r180v":
        got.extend(fig for _, fig in figures(diag_problem(8), 8))
    assert len(got) == len(set(got)), "a figure was produced twice"
    want = set()
    for _, level in iter_levels(8):
        want.update(poly for poly in level if kind in classify(poly))
    assert set(got) == want


ORDER = {"r180c": 2, "r180m": 2, "r180v": 2, "r90c": 4, "r90v": 4}

coords = st.integers(min_value=-30, max_value=30)


@given(kind=st.sampled_from(POINT_KINDS), x=coords, y=coords)
def test_point_map_is_a_rotation_of_the_right_order(kind, x, y):
    c = (x, y)
    seen = [c]
    for _ in range(ORDER[kind]):
        c = point_map(kind, c)
        seen.append(c)
    assert seen[ORDER[kind]] == seen[0]
    assert len(orbit(kind, (x, y))) in (1, 2, 4)
    assert len(orbit(kind, (x, y))) == len(set(seen[: ORDER[kind]]))


@given(kind=st.sampled_from(POINT_KINDS), x=coords, y=coords)
def test_rep_is_constant_on_orbits(kind, x, y):
    r = rep(kind, (x, y))
    assert rep(kind, point_map(kind, (x, y))) == r
    assert rep(kind, r) == r


@pytest.mark.parametrize("kind", POINT_KINDS)
def test_center_cells_are_closed_under_the_rotation(kind):
    zone = set(center_cells(kind))
    assert {point_map(kind, c) for c in zone} == zone


@pytest.mark.parametrize("kind", POINT_KINDS)
def test_quotient_board_invariants(kind):
    q = quotient(kind, 6)
    for i, c in enumerate(q.cells):
        assert rep(kind, c) == c
        assert q.weights[i] == len(q.orbits[i])
        assert 0 < len(q.nbrs[i]) <= 4
        assert i not in q.nbrs[i]
        for j in q.nbrs[i]:
            assert i in q.nbrs[j]
    covered = [c for o in q.orbits for c in o]
    assert len(covered) == len(set(covered)), "orbits overlap"


def _encloses_center(kind, plane):
    """The center-incident cells are walled in by the figure."""
    zone = set(center_cells(kind))
    if plane & zone:
        return False
    xs = [x for x, _ in plane]
    ys = [y for _, y in plane]
    lo_x, hi_x = min(xs) - 1, max(xs) + 1
    lo_y, hi_y = min(ys) - 1, max(ys) + 1
    stack = [next(iter(zone))]
    seen = set(stack)
    while stack:
        x, y = stack.pop()
        if x in (lo_x, hi_x) or y in (lo_y, hi_y):
            return False
        for d in ((x + 1, y), (x - 1, y), (x, y + 1), (x, y - 1)):
            if d not in seen and d not in plane:
                seen.add(d)
                stack.append(d)
    return True


@pytest.mark.parametrize("kind, n_max", [("r180c", 10), ("r90c", 9), ("r180m", 12)])
def test_ring_figures_enclose_the_center(kind, n_max):
    problem = ring_problem(kind, n_max)
    seen = 0
    for _, fig, _, ok in walk_problem(problem, n_max):
        if not ok:
            continue
        plane = {c for i in fig for c in problem.orbits[i]}
        assert _encloses_center(kind, plane)
        seen += 1
    assert seen > 0


def test_published_split_landmarks():
    m = point_tables("r180m", 12, jit=False)
    assert (m["core"][10], m["rings"][10]) == (126, 1)
    assert (m["core"][12], m["rings"][12]) == (465, 7)
    v = point_tables("r180v", 12, jit=False)
    assert (v["core"][12], v["rings"][12]) == (183, 3)
    c = point_tables("r180c", 8, jit=False)
    assert c["rings"][8] == 1 and c["core"][7] == 24
    q = point_tables("r90c", 8, jit=False)
    assert q["rings"][8] == 1


@pytest.mark.parametrize("kind, n_max", [("r180v", 13), ("r90v", 12), ("r180m", 10)])
def test_scan_agrees_with_the_decomposition(kind, n_max):
    from polycensus.growth import count_problem

    scanned = count_problem(scan_problem(kind, n_max), n_max)
    total = point_tables(kind, n_max)["total"]
    for n in range(1, n_max + 1):
        assert scanned.get(n, 0) == total[n]


def test_count_point_class_interface():
    assert count_point_class("r180c", 8, split="rings", jit=False)[8] == 1
    assert count_point_class("r180c", 8, jit=False)[7] == 24
    with pytest.raises(ValueError):
        count_point_class("r180c", 8, split="everything")
    with pytest.raises(ValueError):
        count_point_class("m90", 8)
