"""Depth-first growth engine: the workhorse counter.

One iterative untried-set search serves every population that is counted by
tree enumeration here — plain fixed counting, the weighted half-plane mirror
counts, and the point-symmetry quotient boards — because those differ only in
the cell graph, the per-cell weights, the pre-placed root cells, and the rule
deciding which tree nodes count.  Every node of the search tree is a distinct
figure, so counting figures of weight n means bumping ``out[n]`` per node.

The kernel `_search_impl` is a single flat-array function: numba JIT-compiles
it when available (`_search_jit`), and the very same function object runs as
the pure-Python fallback, which the tests cross-check against an independent
recursive reference (`walk_problem`).

Bookkeeping invariants the kernel maintains:

* ``counter[c]`` = (# chosen neighbors of c) + BIG if c is chosen, banned for
  the rest of the current node, or blocked.  A cell is appendable to the
  frontier exactly when its counter ticks 0 -> 1.
* The frontier array F is append-only along a descent and truncated on
  backtrack; a node's candidates are the fixed window F[start:end).
* On exit the board arrays are bit-for-bit as the kernel found them
  (asserted in the unit tests), so one scratch set serves all roots.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Callable, Iterator, NamedTuple

import numpy as np

from polycensus.cells import Cell, CountTable, is_connected, normalize

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised only on bare installs
    njit = None
    HAVE_NUMBA = False

BIG = 1 << 20
#: `target` value meaning "every subtree this worker owns".
ALL_MINE = -1
#: `target` value no subtree index ever reaches; walking with it counts
#: subtrees without descending into any.
NO_SUBTREE = 1 << 62

LEAF_RULES = ("all", "special", "closure")
_FILT_CODE = {"all": 0, "special": 2, "closure": 1}


@dataclass(frozen=True)
class Root:
    """One starting configuration: pre-placed cells plus cells this root may
    never use (both as indices into the problem's cell list)."""

    seeds: tuple[int, ...]
    blocked: tuple[int, ...] = ()


@dataclass(frozen=True)
class GrowthProblem:
    """A weighted cell graph plus the roots to grow from.

    `nbrs` must be symmetric and at most 4 per cell.  leaf_rule:

    - ``all``: every tree node counts;
    - ``special``: only figures containing a cell from `special` count;
    - ``closure``: only figures whose plane closure (union of the per-cell
      `orbits`) is edge-connected count.  For this rule each cell's weight
      must equal its orbit size, so the figure weight is the closure's area.
    """

    name: str
    cells: tuple[Cell, ...]
    weights: tuple[int, ...]
    nbrs: tuple[tuple[int, ...], ...]
    roots: tuple[Root, ...]
    leaf_rule: str = "all"
    special: tuple[int, ...] = ()
    orbits: tuple[tuple[Cell, ...], ...] = ()


def row_major(cells) -> tuple[Cell, ...]:
    return tuple(sorted(set(cells), key=lambda c: (c[1], c[0])))


def lattice_nbrs(cells: tuple[Cell, ...]) -> tuple[tuple[int, ...], ...]:
    """Plain 4-neighbor adjacency restricted to the given universe."""
    index = {c: i for i, c in enumerate(cells)}
    out = []
    for x, y in cells:
        row = [index[d] for d in ((x + 1, y), (x - 1, y), (x, y + 1), (x, y - 1)) if d in index]
        out.append(tuple(sorted(row)))
    return tuple(out)


# ---------------------------------------------------------------------------
# standard problems


def fixed_problem(n_max: int) -> GrowthProblem:
    """Anchored fixed-polyomino enumeration: figures containing the origin as
    their first cell in row-major order, so each translation class appears
    exactly once."""
    cells = []
    for y in range(n_max):
        lo = 0 if y == 0 else -(n_max - 1)
        for x in range(lo, n_max):
            cells.append((x, y))
    cells = tuple(cells)
    index = {c: i for i, c in enumerate(cells)}
    return GrowthProblem(
        name="fixed",
        cells=cells,
        weights=(1,) * len(cells),
        nbrs=lattice_nbrs(cells),
        roots=(Root(seeds=(index[(0, 0)],)),),
    )


def mirror_problem(kind: str, n_max: int) -> GrowthProblem:
    """Weighted half-region boards for the two cell-centered mirror classes.

    A mirror-symmetric polyomino is determined by its closed half: cells on
    the axis weigh 1, cells strictly off it weigh 2, and the figure must
    touch the axis.  Both halves stay connected when the whole is (folding a
    lattice path across the axis keeps it a path), so ordinary growth over
    the half-region with a touch-the-axis leaf rule counts the class.

    - ``m90``: vertical axis x = 0, half-region x >= 0, anchored at min y;
    - ``m45``: diagonal axis y = x, half-region y <= x, anchored at min y
      (translation freedom along the axis only, in both cases).
    """
    if kind == "m90":
        xmax = (n_max - 1) // 2
        cells = row_major((x, y) for y in range(n_max) for x in range(xmax + 1))
        axis = [i for i, (x, _) in enumerate(cells) if x == 0]
    elif kind == "m45":
        cells = row_major((x, y) for y in range(n_max) for x in range(y, n_max))
        axis = [i for i, (x, y) in enumerate(cells) if x == y]
    else:
        raise ValueError(f"no mirror board for {kind!r}")
    index = {c: i for i, c in enumerate(cells)}
    weights = tuple(1 if i in set(axis) else 2 for i in range(len(cells)))
    roots = []
    anchors = [c for c in cells if c[1] == 0]
    for k, anchor in enumerate(sorted(anchors)):
        roots.append(
            Root(
                seeds=(index[anchor],),
                blocked=tuple(index[a] for a in sorted(anchors)[:k]),
            )
        )
    return GrowthProblem(
        name=kind,
        cells=cells,
        weights=weights,
        nbrs=lattice_nbrs(cells),
        roots=tuple(roots),
        leaf_rule="special",
        special=tuple(axis),
    )


# ---------------------------------------------------------------------------
# kernel


def _search_impl(
    nbr4,
    weights,
    special,
    plane_nbr,
    rep_of_plane,
    seeds,
    blocked,
    seed_plane,
    counter,
    infig,
    F,
    stk_j,
    stk_start,
    stk_end,
    stk_conn,
    visited,
    bfsq,
    out,
    n_max,
    filt,
    minw,
    uniw,
    shortcut,
    split_depth,
    target,
    worker_id,
    worker_count,
    skip,
    idx_start,
):
    idx = idx_start
    shallow_tally = False
    if split_depth == 0:
        # The whole root tree is one subtree.
        idx += 1
        if target == ALL_MINE:
            owned = (idx - 1) % worker_count == worker_id
            if owned and skip.size > 0:
                pos = np.searchsorted(skip, idx)
                if pos < skip.size and skip[pos] == idx:
                    owned = False
        else:
            owned = idx == target
        if not owned:
            return idx
        shallow_tally = True
    else:
        if target == ALL_MINE:
            shallow_tally = worker_id == 0
            if shallow_tally and skip.size > 0:
                pos = np.searchsorted(skip, 0)
                if pos < skip.size and skip[pos] == 0:
                    shallow_tally = False
        else:
            shallow_tally = target == 0

    # Place the root figure.
    for bi in range(blocked.size):
        counter[blocked[bi]] += BIG
    w = 0
    for si in range(seeds.size):
        s = seeds[si]
        counter[s] += BIG
        infig[s] = 1
        w += weights[s]
    flen = 0
    for si in range(seeds.size):
        s = seeds[si]
        for t in range(4):
            m = nbr4[s, t]
            counter[m] += 1
            if counter[m] == 1:
                F[flen] = m
                flen += 1
    nspec = 0
    if filt == 2:
        for si in range(seeds.size):
            nspec += special[seeds[si]]
    epoch = 0
    conn = False
    if filt == 1:
        # The visited stamps of a previous root must not collide with this
        # root's restarted epoch counter.
        for z in range(visited.shape[0]):
            visited[z] = 0
        epoch += 1
        visited[seed_plane] = epoch
        bfsq[0] = seed_plane
        head = 0
        tail = 1
        cnt = 0
        while head < tail:
            p = bfsq[head]
            head += 1
            cnt += 1
            for t in range(4):
                pm = plane_nbr[p, t]
                if visited[pm] != epoch and infig[rep_of_plane[pm]] == 1:
                    visited[pm] = epoch
                    bfsq[tail] = pm
                    tail += 1
        conn = cnt == w
    if w <= n_max and shallow_tally:
        ok = True
        if filt == 1:
            ok = conn
        elif filt == 2:
            ok = nspec > 0
        if ok:
            out[w] += 1

    sp = -1
    if w + minw <= n_max and flen > 0:
        sp = 0
        stk_j[0] = 0
        stk_start[0] = 0
        stk_end[0] = flen
        stk_conn[0] = 1 if conn else 0

    while sp >= 0:
        j = stk_j[sp]
        if j >= stk_end[sp]:
            # Node exhausted: lift this window's bans, pop, undo the parent
            # candidate that spawned it.
            for jj in range(stk_start[sp], stk_end[sp]):
                counter[F[jj]] -= BIG
            sp -= 1
            if sp >= 0:
                c = F[stk_j[sp] - 1]
                for t in range(4):
                    counter[nbr4[c, t]] -= 1
                w -= weights[c]
                infig[c] = 0
                if filt == 2:
                    nspec -= special[c]
                flen = stk_end[sp]
            continue
        stk_j[sp] = j + 1
        c = F[j]
        nw = w + weights[c]
        if nw > n_max:
            counter[c] += BIG  # ban uniformly so the exit sweep stays exact
            continue
        nd = sp + 1
        if split_depth == 0 or nd > split_depth:
            tally = True
        elif nd < split_depth:
            tally = shallow_tally
        else:
            # Entering a depth-split subtree: deterministic global numbering,
            # then either this call owns the whole subtree or skips it.
            idx += 1
            if target == ALL_MINE:
                owned = (idx - 1) % worker_count == worker_id
                if owned and skip.size > 0:
                    pos = np.searchsorted(skip, idx)
                    if pos < skip.size and skip[pos] == idx:
                        owned = False
            else:
                owned = idx == target
            if not owned:
                counter[c] += BIG
                continue
            tally = True
        counter[c] += BIG
        infig[c] = 1
        w = nw
        if filt == 2:
            nspec += special[c]
        conn = True
        ok = True
        if filt == 1:
            if stk_conn[sp] == 1:
                conn = True  # connectivity is monotone under growth
            else:
                epoch += 1
                visited[seed_plane] = epoch
                bfsq[0] = seed_plane
                head = 0
                tail = 1
                cnt = 0
                while head < tail:
                    p = bfsq[head]
                    head += 1
                    cnt += 1
                    for t in range(4):
                        pm = plane_nbr[p, t]
                        if visited[pm] != epoch and infig[rep_of_plane[pm]] == 1:
                            visited[pm] = epoch
                            bfsq[tail] = pm
                            tail += 1
                conn = cnt == w
            ok = conn
        elif filt == 2:
            ok = nspec > 0
        if tally and ok:
            out[w] += 1
        rem = n_max - w
        if rem >= minw:
            fl2 = flen
            for t in range(4):
                m = nbr4[c, t]
                counter[m] += 1
                if counter[m] == 1:
                    F[fl2] = m
                    fl2 += 1
            if (
                shortcut == 1
                and filt == 0
                and uniw > 0
                and rem <= 2 * uniw
                and nd >= split_depth
            ):
                # Uniform-weight closed form for the last two tree levels:
                # children are exactly the candidate window, grandchildren are
                # candidate pairs plus each candidate's fresh neighbors.
                cands = fl2 - (j + 1)
                if uniw <= rem:
                    out[w + uniw] += cands
                if 2 * uniw <= rem:
                    nu = 0
                    for jj in range(j + 1, fl2):
                        m2 = F[jj]
                        for t in range(4):
                            if counter[nbr4[m2, t]] == 0:
                                nu += 1
                    out[w + 2 * uniw] += cands * (cands - 1) // 2 + nu
                for t in range(4):
                    counter[nbr4[c, t]] -= 1
                w -= weights[c]
                infig[c] = 0
                continue
            flen = fl2
            sp += 1
            stk_j[sp] = j + 1
            stk_start[sp] = j + 1
            stk_end[sp] = flen
            stk_conn[sp] = 1 if conn else 0
        else:
            w -= weights[c]
            infig[c] = 0
            if filt == 2:
                nspec -= special[c]

    # Restore the board arrays exactly as found.
    for si in range(seeds.size):
        s = seeds[si]
        for t in range(4):
            counter[nbr4[s, t]] -= 1
    for si in range(seeds.size):
        s = seeds[si]
        counter[s] -= BIG
        infig[s] = 0
    for bi in range(blocked.size):
        counter[blocked[bi]] -= BIG
    return idx


_search_jit = njit(cache=True)(_search_impl) if HAVE_NUMBA else None


def use_jit(jit: bool | None) -> bool:
    if jit is None:
        return HAVE_NUMBA and not os.environ.get("POLYCENSUS_NO_JIT")
    if jit and not HAVE_NUMBA:
        raise RuntimeError("numba is not available; pass jit=False")
    return jit


# ---------------------------------------------------------------------------
# array marshalling


class _Board(NamedTuple):
    ncells: int
    nbr4: np.ndarray
    weights: np.ndarray
    special: np.ndarray
    filt: int
    plane_nbr: np.ndarray
    rep_of_plane: np.ndarray
    nplane: int
    roots: tuple[tuple[np.ndarray, np.ndarray, int, int, int], ...]
    # per root: (seeds, blocked, seed_plane,
    #            uniform growable weight or 0, minimum growable weight)


def _build_board(problem: GrowthProblem) -> _Board:
    m = len(problem.cells)
    nbr4 = np.full((m + 1, 4), m, dtype=np.int32)
    for i, row in enumerate(problem.nbrs):
        if len(row) > 4:
            raise ValueError("more than four neighbors")
        for t, v in enumerate(row):
            nbr4[i, t] = v
    weights = np.zeros(m + 1, dtype=np.int64)
    weights[:m] = problem.weights
    special = np.zeros(m + 1, dtype=np.uint8)
    for i in problem.special:
        special[i] = 1
    filt = _FILT_CODE[problem.leaf_rule]

    if filt == 1:
        if len(problem.orbits) != m:
            raise ValueError("closure rule needs an orbit per cell")
        plane_cells = []
        rep_of = {}
        for i, orbit in enumerate(problem.orbits):
            if len(orbit) != problem.weights[i]:
                raise ValueError("cell weight must equal its orbit size")
            for c in orbit:
                if c in rep_of:
                    raise ValueError("orbits must not overlap")
                rep_of[c] = i
                plane_cells.append(c)
        plane_cells = row_major(plane_cells)
        p = len(plane_cells)
        pindex = {c: k for k, c in enumerate(plane_cells)}
        plane_nbr = np.full((p + 1, 4), p, dtype=np.int32)
        for k, (x, y) in enumerate(plane_cells):
            for t, d in enumerate(((x + 1, y), (x - 1, y), (x, y + 1), (x, y - 1))):
                if d in pindex:
                    plane_nbr[k, t] = pindex[d]
        rep_of_plane = np.full(p + 1, m, dtype=np.int32)
        for c, i in rep_of.items():
            rep_of_plane[pindex[c]] = i
    else:
        p = 0
        plane_nbr = np.zeros((1, 4), dtype=np.int32)
        rep_of_plane = np.full(1, m, dtype=np.int32)
        pindex = {}

    roots = []
    for root in problem.roots:
        if not root.seeds:
            raise ValueError("every root needs at least one seed")
        excluded = set(root.seeds) | set(root.blocked)
        grow_weights = sorted({problem.weights[i] for i in range(m) if i not in excluded})
        uniw = grow_weights[0] if len(grow_weights) == 1 else 0
        minw = grow_weights[0] if grow_weights else 1 << 30
        if filt == 1:
            seed_plane = pindex[problem.orbits[root.seeds[0]][0]]
        else:
            seed_plane = 0
        roots.append(
            (
                np.asarray(root.seeds, dtype=np.int32),
                np.asarray(root.blocked, dtype=np.int32),
                seed_plane,
                uniw,
                minw,
            )
        )
    return _Board(
        ncells=m,
        nbr4=nbr4,
        weights=weights,
        special=special,
        filt=filt,
        plane_nbr=plane_nbr,
        rep_of_plane=rep_of_plane,
        nplane=p,
        roots=tuple(roots),
    )


class _Scratch(NamedTuple):
    counter: np.ndarray
    infig: np.ndarray
    F: np.ndarray
    stk_j: np.ndarray
    stk_start: np.ndarray
    stk_end: np.ndarray
    stk_conn: np.ndarray
    visited: np.ndarray
    bfsq: np.ndarray


def _make_scratch(board: _Board, n_max: int) -> _Scratch:
    m, p = board.ncells, board.nplane
    counter = np.zeros(m + 1, dtype=np.int64)
    counter[m] = BIG  # the padding cell is permanently blocked
    depth = n_max + 3
    return _Scratch(
        counter=counter,
        infig=np.zeros(m + 1, dtype=np.uint8),
        F=np.zeros(m + 8, dtype=np.int32),
        stk_j=np.zeros(depth, dtype=np.int32),
        stk_start=np.zeros(depth, dtype=np.int32),
        stk_end=np.zeros(depth, dtype=np.int32),
        stk_conn=np.zeros(depth, dtype=np.uint8),
        visited=np.zeros(p + 1, dtype=np.int32),
        bfsq=np.zeros(p + 1, dtype=np.int32),
    )


def _run(
    board: _Board,
    n_max: int,
    out: np.ndarray,
    *,
    split_depth: int,
    target: int,
    worker_id: int,
    worker_count: int,
    skip: np.ndarray,
    shortcut: bool,
    jit: bool,
    scratch: _Scratch | None = None,
) -> int:
    search = _search_jit if jit else _search_impl
    if scratch is None:
        scratch = _make_scratch(board, n_max)
    idx = 0
    for seeds, blocked, seed_plane, uniw, minw in board.roots:
        idx = search(
            board.nbr4,
            board.weights,
            board.special,
            board.plane_nbr,
            board.rep_of_plane,
            seeds,
            blocked,
            seed_plane,
            scratch.counter,
            scratch.infig,
            scratch.F,
            scratch.stk_j,
            scratch.stk_start,
            scratch.stk_end,
            scratch.stk_conn,
            scratch.visited,
            scratch.bfsq,
            out,
            n_max,
            board.filt,
            minw,
            uniw,
            1 if shortcut else 0,
            split_depth,
            target,
            worker_id,
            worker_count,
            skip,
            idx,
        )
    return idx


_EMPTY_SKIP = np.zeros(0, dtype=np.int64)


def subtree_count(problem: GrowthProblem, n_max: int, split_depth: int, jit=None) -> int:
    """How many depth-split subtrees the problem's forest has (ids 1..S; id 0
    is the shallow remainder when split_depth > 0)."""
    board = _build_board(problem)
    out = np.zeros(n_max + 1, dtype=np.int64)
    return _run(
        board,
        n_max,
        out,
        split_depth=split_depth,
        target=NO_SUBTREE,
        worker_id=0,
        worker_count=1,
        skip=_EMPTY_SKIP,
        shortcut=False,
        jit=use_jit(jit),
    )


# ---------------------------------------------------------------------------
# checkpoint files
#
# Line format: "subtree_index,n,count" data lines (zero counts omitted),
# closed by a "subtree_index,done,sum-of-counts" marker.  Only subtrees whose
# marker matches are trusted on resume; anything else is recomputed.


def load_checkpoint(path: str) -> dict[int, dict[int, int]]:
    records: dict[int, dict[int, int]] = {}
    pending: dict[int, dict[int, int]] = {}
    try:
        fh = open(path, "r", encoding="ascii")
    except FileNotFoundError:
        return records
    with fh:
        for line in fh:
            parts = line.strip().split(",")
            if len(parts) != 3:
                continue
            try:
                idx = int(parts[0])
            except ValueError:
                continue
            if parts[1] == "done":
                try:
                    checksum = int(parts[2])
                except ValueError:
                    continue
                block = pending.pop(idx, {})
                if sum(block.values()) == checksum:
                    records[idx] = block
                continue
            try:
                n, value = int(parts[1]), int(parts[2])
            except ValueError:
                continue
            pending.setdefault(idx, {})[n] = value
    return records


def _append_checkpoint(fh, idx: int, table: dict[int, int]) -> None:
    lines = [f"{idx},{n},{v}\n" for n, v in sorted(table.items()) if v]
    lines.append(f"{idx},done,{sum(v for v in table.values() if v)}\n")
    fh.write("".join(lines))
    fh.flush()
    os.fsync(fh.fileno())


# ---------------------------------------------------------------------------
# counting drivers


def _owned_ids(split_depth: int, n_subtrees: int, worker_id: int, worker_count: int):
    ids = []
    if split_depth > 0 and worker_id == 0:
        ids.append(0)
    ids.extend(
        i for i in range(1, n_subtrees + 1) if (i - 1) % worker_count == worker_id
    )
    return ids


def _worker_total(problem, n_max, split_depth, worker_id, worker_count, shortcut, jit):
    board = _build_board(problem)
    out = np.zeros(n_max + 1, dtype=np.int64)
    _run(
        board,
        n_max,
        out,
        split_depth=split_depth,
        target=ALL_MINE,
        worker_id=worker_id,
        worker_count=worker_count,
        skip=_EMPTY_SKIP,
        shortcut=shortcut,
        jit=jit,
    )
    return out


def _worker_stream(problem, n_max, split_depth, todo, shortcut, jit, queue):
    board = _build_board(problem)
    scratch = _make_scratch(board, n_max)
    for idx in todo:
        out = np.zeros(n_max + 1, dtype=np.int64)
        _run(
            board,
            n_max,
            out,
            split_depth=split_depth,
            target=idx,
            worker_id=0,
            worker_count=1,
            skip=_EMPTY_SKIP,
            shortcut=shortcut,
            jit=jit,
            scratch=scratch,
        )
        queue.put((idx, {n: int(v) for n, v in enumerate(out) if v}))
    queue.put(None)


def count_problem(
    problem: GrowthProblem,
    n_max: int,
    *,
    workers: int = 1,
    split_depth: int = 0,
    shortcut: bool = True,
    jit: bool | None = None,
    parallel: bool = False,
    checkpoint: str | None = None,
) -> dict[int, int]:
    """Count the problem's admissible figures per weight, 1..n_max.

    `workers`/`split_depth` fix the deterministic subtree partition (the
    result never depends on them); `parallel` chooses whether the workers are
    actual forked processes or are executed in sequence in this process.
    `checkpoint` names a resumable per-subtree record file.
    """
    if n_max < 1:
        raise ValueError("n_max must be at least 1")
    if workers < 1:
        raise ValueError("workers must be at least 1")
    jit = use_jit(jit)
    if checkpoint is not None:
        return _count_checkpointed(
            problem, n_max, workers, split_depth, shortcut, jit, parallel, checkpoint
        )
    total = np.zeros(n_max + 1, dtype=np.int64)
    if parallel and workers > 1:
        # Warm the JIT cache before forking so children reuse it.
        if jit:
            subtree_count(problem, n_max, split_depth, jit=True)
        import multiprocessing

        ctx = multiprocessing.get_context("fork")
        args = [
            (problem, n_max, split_depth, wid, workers, shortcut, jit)
            for wid in range(workers)
        ]
        with ctx.Pool(processes=workers) as pool:
            for part in pool.starmap(_worker_total, args):
                total += part
    else:
        board = _build_board(problem)
        scratch = _make_scratch(board, n_max)
        for wid in range(workers):
            _run(
                board,
                n_max,
                total,
                split_depth=split_depth,
                target=ALL_MINE,
                worker_id=wid,
                worker_count=workers,
                skip=_EMPTY_SKIP,
                shortcut=shortcut,
                jit=jit,
                scratch=scratch,
            )
    result = {n: int(v) for n, v in enumerate(total) if n >= 1 and v}
    assert all(v < 1 << 62 for v in result.values())
    return result


def _count_checkpointed(
    problem, n_max, workers, split_depth, shortcut, jit, parallel, path
):
    n_subtrees = subtree_count(problem, n_max, split_depth, jit=jit)
    records = load_checkpoint(path)
    all_ids = ([0] if split_depth > 0 else []) + list(range(1, n_subtrees + 1))
    todo = [i for i in all_ids if i not in records]
    if todo:
        with open(path, "a", encoding="ascii") as fh:
            if parallel and workers > 1:
                import multiprocessing

                ctx = multiprocessing.get_context("fork")
                queue = ctx.Queue()
                procs = []
                for wid in range(workers):
                    mine = [
                        i
                        for i in _owned_ids(split_depth, n_subtrees, wid, workers)
                        if i in set(todo)
                    ]
                    proc = ctx.Process(
                        target=_worker_stream,
                        args=(problem, n_max, split_depth, mine, shortcut, jit, queue),
                    )
                    proc.start()
                    procs.append(proc)
                finished = 0
                while finished < len(procs):
                    item = queue.get()
                    if item is None:
                        finished += 1
                        continue
                    idx, table = item
                    records[idx] = table
                    _append_checkpoint(fh, idx, table)
                for proc in procs:
                    proc.join()
            else:
                board = _build_board(problem)
                scratch = _make_scratch(board, n_max)
                for idx in todo:
                    out = np.zeros(n_max + 1, dtype=np.int64)
                    _run(
                        board,
                        n_max,
                        out,
                        split_depth=split_depth,
                        target=idx,
                        worker_id=0,
                        worker_count=1,
                        skip=_EMPTY_SKIP,
                        shortcut=shortcut,
                        jit=jit,
                        scratch=scratch,
                    )
                    table = {n: int(v) for n, v in enumerate(out) if v}
                    records[idx] = table
                    _append_checkpoint(fh, idx, table)
    missing = [i for i in all_ids if i not in records]
    if missing:
        raise RuntimeError(f"checkpoint resume left subtrees uncomputed: {missing}")
    result: dict[int, int] = {}
    for i in all_ids:
        for n, v in records[i].items():
            if 1 <= n <= n_max and v:
                result[n] = result.get(n, 0) + v
    return result


# ---------------------------------------------------------------------------
# reference walker (tests and debugging; mirrors the kernel's tree exactly)


def walk_problem(
    problem: GrowthProblem, n_max: int
) -> Iterator[tuple[int, frozenset[int], int, bool]]:
    """Slow recursive enumeration of the same search tree.

    Yields (root_index, figure cell indices, weight, leaf rule verdict) for
    every tree node of weight <= n_max.  Kept free of the kernel's counter
    tricks on purpose, as an independent check of its semantics.
    """
    weights = problem.weights
    nbrs = problem.nbrs
    special = set(problem.special)
    minw = min(weights) if weights else 1

    def admitted(figure: set[int]) -> bool:
        if problem.leaf_rule == "special":
            return bool(figure & special)
        if problem.leaf_rule == "closure":
            plane: set[Cell] = set()
            for i in figure:
                plane.update(problem.orbits[i])
            return is_connected(plane)
        return True

    for ri, root in enumerate(problem.roots):
        figure = set(root.seeds)
        banned = set(root.blocked)
        w0 = sum(weights[i] for i in root.seeds)

        def fresh(c: int) -> list[int]:
            return [
                m
                for m in nbrs[c]
                if m not in figure
                and m not in banned
                and all(q == c or q not in figure for q in nbrs[m])
            ]

        def rec(cands: list[int], w: int):
            tried = []
            for i, c in enumerate(cands):
                nw = w + weights[c]
                if nw > n_max:
                    continue
                figure.add(c)
                yield ri, frozenset(figure), nw, admitted(figure)
                if nw + minw <= n_max:
                    news = fresh(c)
                    yield from rec(cands[i + 1 :] + news, nw)
                figure.remove(c)
                banned.add(c)
                tried.append(c)
            for c in tried:
                banned.discard(c)

        if w0 <= n_max:
            yield ri, frozenset(figure), w0, admitted(figure)
            start = []
            for s in root.seeds:
                for m in nbrs[s]:
                    if m not in figure and m not in banned and m not in start:
                        start.append(m)
            yield from rec(start, w0)


def figures(problem: GrowthProblem, n_max: int) -> Iterator[tuple[int, frozenset[Cell]]]:
    """(weight, normalized plane figure) for every admitted node, via the
    reference walker.  Orbit-less problems use the cells themselves."""
    for _, fig, w, ok in walk_problem(problem, n_max):
        if not ok:
            continue
        plane: set[Cell] = set()
        for i in fig:
            if problem.orbits:
                plane.update(problem.orbits[i])
            else:
                plane.add(problem.cells[i])
        yield w, normalize(plane)


# ---------------------------------------------------------------------------
# public convenience counters


def count_fixed(n_max: int, **kwargs) -> CountTable:
    counts = count_problem(fixed_problem(n_max), n_max, **kwargs)
    return CountTable("fixed", n_max, counts, source="growth")


def count_mirror_growth(kind: str, n_max: int, **kwargs) -> CountTable:
    """Growth-search count of m90/m45 — the cross-check engine for the
    transfer-matrix path, practical to roughly n = 22."""
    counts = count_problem(mirror_problem(kind, n_max), n_max, **kwargs)
    return CountTable(kind, n_max, counts, source="growth")
