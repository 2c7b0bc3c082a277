"""Square-lattice cell sets and the dihedral-group plumbing shared by every
counting backend.

A cell is an ``(x, y)`` pair of ints and a polyomino is a set of cells.  All
counting code works with translation-normalized sets (bounding box anchored at
the origin), so frozenset equality is exactly fixed-polyomino equality.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Mapping

Cell = tuple[int, int]

# Each entry (a, b, c, d) acts on a cell by (x, y) -> (a*x + b*y, c*x + d*y).
# rot90 is the counter-clockwise quarter turn; transpose mirrors about the
# main diagonal y = x, antitranspose about the anti-diagonal.
TRANSFORMS: dict[str, tuple[int, int, int, int]] = {
    "identity": (1, 0, 0, 1),
    "rot90": (0, -1, 1, 0),
    "rot180": (-1, 0, 0, -1),
    "rot270": (0, 1, -1, 0),
    "flip_x": (-1, 0, 0, 1),
    "flip_y": (1, 0, 0, -1),
    "transpose": (0, 1, 1, 0),
    "antitranspose": (0, -1, -1, 0),
}

_NAME_OF_MATRIX = {matrix: name for name, matrix in TRANSFORMS.items()}


def compose(first: str, then: str) -> str:
    """Name of the single transform equivalent to `first` followed by `then`."""
    ga, gb, gc, gd = TRANSFORMS[first]
    ha, hb, hc, hd = TRANSFORMS[then]
    product = (
        ha * ga + hb * gc,
        ha * gb + hb * gd,
        hc * ga + hd * gc,
        hc * gb + hd * gd,
    )
    return _NAME_OF_MATRIX[product]


def inverse(name: str) -> str:
    a, b, c, d = TRANSFORMS[name]
    # Determinant of every entry is +-1, so the inverse is integral.
    det = a * d - b * c
    return _NAME_OF_MATRIX[(d * det, -b * det, -c * det, a * det)]


def normalize(cells: Iterable[Cell]) -> frozenset[Cell]:
    """Translate so the bounding box sits at the origin (min x = min y = 0)."""
    cells = list(cells)
    if not cells:
        return frozenset()
    xmin = min(x for x, _ in cells)
    ymin = min(y for _, y in cells)
    return frozenset((x - xmin, y - ymin) for x, y in cells)


def transform(cells: Iterable[Cell], name: str) -> frozenset[Cell]:
    """Apply a dihedral transform, then re-normalize."""
    a, b, c, d = TRANSFORMS[name]
    return normalize((a * x + b * y, c * x + d * y) for x, y in cells)


def neighbors(cell: Cell) -> tuple[Cell, Cell, Cell, Cell]:
    x, y = cell
    return ((x + 1, y), (x - 1, y), (x, y + 1), (x, y - 1))


def is_connected(cells: Iterable[Cell]) -> bool:
    """Edge-connectivity of a cell set.  The empty set is not connected."""
    remaining = set(cells)
    if not remaining:
        return False
    stack = [remaining.pop()]
    while stack:
        for nb in neighbors(stack.pop()):
            if nb in remaining:
                remaining.remove(nb)
                stack.append(nb)
    return not remaining


class SymmetryClass(str, Enum):
    """The nine directly countable populations.

    `fixed` is the unrestricted population; the other eight are the
    subpopulations fixed by one representative of each nontrivial symmetry,
    split by where the symmetry element sits on the lattice: mirror axis
    through cell centers (m90) or on cell boundaries (m90v), diagonal mirror
    through cell centers (m45), half turn about a cell center / edge midpoint
    / vertex (r180c / r180m / r180v), quarter turn about a cell center /
    vertex (r90c / r90v).
    """

    FIXED = "fixed"
    M90 = "m90"
    M90V = "m90v"
    M45 = "m45"
    R180C = "r180c"
    R180M = "r180m"
    R180V = "r180v"
    R90C = "r90c"
    R90V = "r90v"


#: The symmetry-class members in canonical reporting order.
CLASS_ORDER: tuple[SymmetryClass, ...] = tuple(SymmetryClass)


@dataclass(frozen=True)
class CountTable:
    """One population column: counts for every size n in 1..n_max.

    Sizes absent from `counts` are structural zeros (e.g. odd n for the
    classes whose cells pair up under the symmetry).
    """

    kind: str
    n_max: int
    counts: Mapping[int, int]
    source: str = ""

    def __getitem__(self, n: int) -> int:
        if not 1 <= n <= self.n_max:
            raise KeyError(f"{self.kind}: n={n} outside 1..{self.n_max}")
        return self.counts.get(n, 0)

    def items(self) -> list[tuple[int, int]]:
        return [(n, self[n]) for n in range(1, self.n_max + 1)]


class ResourceLimitError(RuntimeError):
    """A computation tripped its configured memory or size budget.

    `completed_n_max` is the largest size whose counts were already final
    when the budget tripped (0 if none were).
    """

    def __init__(self, message: str, completed_n_max: int = 0):
        super().__init__(message)
        self.completed_n_max = completed_n_max
