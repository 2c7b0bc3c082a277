from collections import Counter

import numpy as np
import pytest

from polycensus.growth import (
    _build_board,
    _make_scratch,
    _run,
    ALL_MINE,
    count_fixed,
    count_mirror_growth,
    count_problem,
    figures,
    fixed_problem,
    load_checkpoint,
    mirror_problem,
    subtree_count,
    walk_problem,
)
from polycensus.oracle import enumerate_fixed

FIXED = [1, 2, 6, 19, 63, 216, 760, 2725, 9910, 36446]
M90 = [1, 1, 2, 3, 7, 10, 24, 36, 86, 133]
M45 = [1, 0, 2, 1, 5, 4, 16, 13, 54, 46]


def table_of(problem, n_max, **kw):
    kw.setdefault("jit", False)
    return count_problem(problem, n_max, **kw)


def walker_table(problem, n_max):
    tally = Counter(w for _, _, w, ok in walk_problem(problem, n_max) if ok)
    return dict(tally)


@pytest.mark.parametrize(
    "problem,n",
    [
        (fixed_problem(6), 6),
        (mirror_problem("m90", 8), 8),
        (mirror_problem("m45", 8), 8),
    ],
    ids=["fixed", "m90", "m45"],
)
def test_kernel_matches_reference_walker(problem, n):
    assert table_of(problem, n, shortcut=False) == walker_table(problem, n)
    assert table_of(problem, n, shortcut=True) == walker_table(problem, n)


def test_fixed_counts():
    table = count_fixed(10, jit=False)
    assert [table[n] for n in range(1, 11)] == FIXED


def test_fixed_figures_are_exactly_the_oracle_shapes():
    by_size = {n: set() for n in range(1, 5)}
    seen = []
    for w, fig in figures(fixed_problem(4), 4):
        by_size[w].add(fig)
        seen.append((w, fig))
    assert len(seen) == len(set(seen))  # anchoring yields each shape once
    for n in range(1, 5):
        assert by_size[n] == enumerate_fixed(n)


def test_mirror_growth_counts():
    m90 = count_mirror_growth("m90", 10, jit=False)
    m45 = count_mirror_growth("m45", 10, jit=False)
    assert [m90[n] for n in range(1, 11)] == M90
    assert [m45[n] for n in range(1, 11)] == M45


def test_shortcut_equivalence():
    problem = fixed_problem(9)
    plain = table_of(problem, 9, shortcut=False)
    assert table_of(problem, 9, shortcut=True) == plain
    assert table_of(problem, 9, shortcut=True, split_depth=3, workers=2) != {}


@pytest.mark.parametrize("workers", [1, 2, 3, 8])
@pytest.mark.parametrize("split_depth", [0, 2, 4])
def test_partition_invariance(workers, split_depth):
    problem = fixed_problem(8)
    expected = {n: v for n, v in zip(range(1, 9), FIXED)}
    got = table_of(problem, 8, workers=workers, split_depth=split_depth)
    assert got == expected


def test_partition_covers_mirror_boards():
    problem = mirror_problem("m90", 9)
    base = table_of(problem, 9)
    for workers, split in [(2, 0), (3, 2), (5, 3)]:
        assert table_of(problem, 9, workers=workers, split_depth=split) == base


def test_subtree_count_matches_tree_layer():
    # With one root and split depth d, subtree ids cover the depth-d layer of
    # the anchored tree: one per figure of size d+1.
    problem = fixed_problem(6)
    assert subtree_count(problem, 6, 0, jit=False) == 1
    assert subtree_count(problem, 6, 2, jit=False) == 6
    assert subtree_count(problem, 6, 3, jit=False) == 19


def test_parallel_processes_agree_with_serial():
    problem = fixed_problem(8)
    serial = table_of(problem, 8)
    forked = count_problem(
        problem, 8, workers=2, split_depth=2, parallel=True, jit=False
    )
    assert forked == serial


def test_checkpoint_roundtrip(tmp_path):
    problem = fixed_problem(7)
    expected = table_of(problem, 7)
    path = tmp_path / "fixed7.ckpt"
    got = table_of(problem, 7, split_depth=2, checkpoint=str(path))
    assert got == expected
    records = load_checkpoint(str(path))
    assert set(records) == set(range(subtree_count(problem, 7, 2, jit=False) + 1))
    # A finished file resumes without recomputation and without growing.
    before = path.read_text()
    assert table_of(problem, 7, split_depth=2, checkpoint=str(path)) == expected
    assert path.read_text() == before


def test_checkpoint_resume_after_torn_write(tmp_path):
    problem = fixed_problem(7)
    expected = table_of(problem, 7)
    path = tmp_path / "torn.ckpt"
    table_of(problem, 7, split_depth=2, checkpoint=str(path))
    lines = path.read_text().splitlines()
    # Chop off the last record's done marker and half a data line.
    path.write_text("\n".join(lines[:-2]) + "\n3,4")
    assert table_of(problem, 7, split_depth=2, checkpoint=str(path)) == expected


def test_kernel_restores_its_board():
    problem = mirror_problem("m45", 7)
    board = _build_board(problem)
    scratch = _make_scratch(board, 7)
    fresh = scratch.counter.copy()
    out = np.zeros(8, dtype=np.int64)
    _run(
        board,
        7,
        out,
        split_depth=0,
        target=ALL_MINE,
        worker_id=0,
        worker_count=1,
        skip=np.zeros(0, dtype=np.int64),
        shortcut=True,
        jit=False,
        scratch=scratch,
    )
    assert np.array_equal(scratch.counter, fresh)
    assert not scratch.infig.any()
