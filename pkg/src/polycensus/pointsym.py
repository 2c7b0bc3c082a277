"""Point-symmetry classes: figures fixed by a half turn or quarter turn.

A figure fixed by a rotation is a union of whole orbits of that rotation, so
it is determined by one representative cell per orbit.  Counting therefore
runs on the orbit quotient of the plane: a quotient cell weighs as much as
its orbit, and two quotient cells are adjacent when any cells of their
orbits are.  Each class further splits by how a figure meets the cells
incident to the rotation center:

* cores occupy all of them.  The incident orbits are pre-placed as seeds,
  and since they form an edge-connected block, every figure grown from them
  has a connected plane closure automatically (a quotient path lifts to a
  plane path ending somewhere in the seed block).
* rings leave all of them empty.  A connected symmetric figure avoiding the
  incident cells must enclose them -- an empty escape path from the center
  to infinity, together with its rotated image, would separate the figure
  from its own image -- so it occupies some cell of the straight ray running
  down from the center.  Anchoring each figure at the innermost ray cell it
  occupies counts it exactly once.  Closure connectivity is checked per
  figure here.
* the vertex half turn alone also admits mixed figures occupying exactly
  one diagonal of the central 2x2 block; they enclose the other diagonal and
  sort with the rings.  These grow from the occupied diagonal's
  representative with the other diagonal blocked, keeping figures with
  connected closure, and count twice: the quarter turn about the same vertex
  swaps the two diagonal configurations size-for-size.

The ray anchoring needs only a short ray: a figure whose innermost hit is
the t-th ray cell leaves an enclosed empty column of height about 2t, whose
occupied border is at least 4t - 2 cells, so t never exceeds n_max // 4 + 1.
"""

from __future__ import annotations

from typing import NamedTuple

from polycensus.cells import Cell, CountTable
from polycensus.growth import GrowthProblem, Root, count_problem

POINT_KINDS = ("r180c", "r180m", "r180v", "r90c", "r90v")

SPLITS = ("core", "rings", "total")


def point_map(kind: str, cell: Cell) -> Cell:
    """The class's generating rotation as a map on cells."""
    x, y = cell
    if kind == "r180c":
        return (-x, -y)
    if kind == "r180m":
        return (-x, -1 - y)
    if kind == "r180v":
        return (-1 - x, -1 - y)
    if kind == "r90c":
        return (-y, x)
    if kind == "r90v":
        return (-1 - y, x)
    raise ValueError(f"not a point-symmetry kind: {kind!r}")


def orbit(kind: str, cell: Cell) -> tuple[Cell, ...]:
    cells = {cell}
    c = point_map(kind, cell)
    while c != cell:
        cells.add(c)
        c = point_map(kind, c)
    return tuple(sorted(cells, key=lambda c: (c[1], c[0])))


def rep(kind: str, cell: Cell) -> Cell:
    """Canonical representative: the row-major first cell of the orbit."""
    return orbit(kind, cell)[0]


def center_cells(kind: str) -> tuple[Cell, ...]:
    """The plane cells incident to the rotation center."""
    if kind in ("r180c", "r90c"):
        return ((0, 0),)
    if kind == "r180m":
        return ((0, -1), (0, 0))
    return ((-1, -1), (0, -1), (-1, 0), (0, 0))


class Quotient(NamedTuple):
    cells: tuple[Cell, ...]
    index: dict[Cell, int]
    weights: tuple[int, ...]
    nbrs: tuple[tuple[int, ...], ...]
    orbits: tuple[tuple[Cell, ...], ...]


def quotient(kind: str, n_max: int) -> Quotient:
    """Orbit-quotient board big enough for every figure of weight <= n_max.

    Cells are the orbit representatives inside a centered window, in
    row-major order; adjacency projects the plane 4-neighbor relation.
    """
    radius = n_max + 2
    cells = []
    for y in range(-radius, radius + 1):
        for x in range(-radius, radius + 1):
            if rep(kind, (x, y)) == (x, y):
                cells.append((x, y))
    index = {c: i for i, c in enumerate(cells)}
    orbits = tuple(orbit(kind, c) for c in cells)
    nbrs = []
    for x, y in cells:
        row = set()
        for d in ((x + 1, y), (x - 1, y), (x, y + 1), (x, y - 1)):
            r = rep(kind, d)
            if r != (x, y) and r in index:
                row.add(index[r])
        nbrs.append(tuple(sorted(row)))
    return Quotient(
        tuple(cells), index, tuple(len(o) for o in orbits), tuple(nbrs), orbits
    )


def core_problem(kind: str, n_max: int) -> GrowthProblem:
    """Figures occupying every center-incident cell."""
    q = quotient(kind, n_max)
    seeds = tuple(sorted({q.index[rep(kind, c)] for c in center_cells(kind)}))
    return GrowthProblem(
        name=f"{kind}-core",
        cells=q.cells,
        weights=q.weights,
        nbrs=q.nbrs,
        roots=(Root(seeds=seeds),),
        leaf_rule="all",
        orbits=q.orbits,
    )


def diag_problem(n_max: int) -> GrowthProblem:
    """Vertex-half-turn figures occupying exactly one central diagonal.

    Counts the configuration whose occupied diagonal is {(0,0), (-1,-1)};
    the full mixed population is twice this problem's table.
    """
    kind = "r180v"
    q = quotient(kind, n_max)
    occupied = q.index[rep(kind, (0, 0))]
    empty = q.index[rep(kind, (-1, 0))]
    return GrowthProblem(
        name="r180v-diag",
        cells=q.cells,
        weights=q.weights,
        nbrs=q.nbrs,
        roots=(Root(seeds=(occupied,), blocked=(empty,)),),
        leaf_rule="closure",
        orbits=q.orbits,
    )


def ring_problem(kind: str, n_max: int) -> GrowthProblem:
    """Figures leaving every center-incident cell empty.

    One root per admissible anchor on the downward ray from the center; root
    t blocks the nearer ray cells, so a ring is tallied exactly once, at the
    innermost ray cell it occupies.
    """
    q = quotient(kind, n_max)
    zreps = sorted({q.index[rep(kind, c)] for c in center_cells(kind)})
    anchors = []
    for t in range(1, n_max // 4 + 2):
        i = q.index.get(rep(kind, (0, -t)))
        if i is not None and i not in zreps:
            anchors.append(i)
    roots = []
    for k, i in enumerate(anchors):
        roots.append(Root(seeds=(i,), blocked=tuple(zreps) + tuple(anchors[:k])))
    return GrowthProblem(
        name=f"{kind}-rings",
        cells=q.cells,
        weights=q.weights,
        nbrs=q.nbrs,
        roots=tuple(roots),
        leaf_rule="closure",
        orbits=q.orbits,
    )


def scan_problem(kind: str, n_max: int) -> GrowthProblem:
    """The whole class by brute anchor scan: each figure once, anchored at
    its row-major-first representative.  Cross-check only -- the per-anchor
    trees roam the whole board, so this scales far worse than the
    core/rings/diagonal decomposition."""
    q = quotient(kind, n_max)
    roots = tuple(
        Root(seeds=(i,), blocked=tuple(range(i))) for i in range(len(q.cells))
    )
    return GrowthProblem(
        name=f"{kind}-scan",
        cells=q.cells,
        weights=q.weights,
        nbrs=q.nbrs,
        roots=roots,
        leaf_rule="closure",
        orbits=q.orbits,
    )


def point_tables(kind: str, n_max: int, **kwargs) -> dict[str, CountTable]:
    """Count one class, returning its core, rings, and total tables.

    Keyword arguments go through to `count_problem`; a `checkpoint` path is
    suffixed per sub-population (.core / .diag / .rings).
    """
    if kind not in POINT_KINDS:
        raise ValueError(f"not a point-symmetry kind: {kind!r}")
    checkpoint = kwargs.pop("checkpoint", None)

    def run(problem: GrowthProblem, tag: str) -> dict[int, int]:
        opts = dict(kwargs)
        if checkpoint is not None:
            opts["checkpoint"] = f"{checkpoint}.{tag}"
        return count_problem(problem, n_max, **opts)

    core = run(core_problem(kind, n_max), "core")
    rings = run(ring_problem(kind, n_max), "rings")
    if kind == "r180v":
        for n, v in run(diag_problem(n_max), "diag").items():
            rings[n] = rings.get(n, 0) + 2 * v
    total = dict(core)
    for n, v in rings.items():
        total[n] = total.get(n, 0) + v
    parts = {"core": core, "rings": rings, "total": total}
    return {
        part: CountTable(
            kind if part == "total" else f"{kind}_{part}",
            n_max,
            counts,
            source="growth",
        )
        for part, counts in parts.items()
    }


def count_point_class(
    kind: str, n_max: int, *, split: str = "total", **kwargs
) -> CountTable:
    if split not in SPLITS:
        raise ValueError(f"split must be one of {SPLITS}, not {split!r}")
    return point_tables(kind, n_max, **kwargs)[split]
