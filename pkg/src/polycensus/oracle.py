"""Exhaustive ground truth at small sizes.

Every counting backend in this package is cross-checked against this module,
so it is written for obviousness rather than speed: build each size level by
adding one boundary cell to every shape of the previous level, deduplicate
modulo translation, and detect symmetry by literally applying the transform
and comparing.  Practical up to n = 12 or so.
"""

from __future__ import annotations

from collections import Counter
from typing import Iterator

from polycensus.cells import (
    Cell,
    CountTable,
    TRANSFORMS,
    compose,
    inverse,
    neighbors,
    normalize,
    transform,
)

ROTATIONS = ("identity", "rot90", "rot180", "rot270")

#: Population kinds produced by `oracle_tables`, in reporting order.
ORACLE_KINDS = (
    "fixed",
    "m90",
    "m90v",
    "m45",
    "r180c",
    "r180m",
    "r180v",
    "r90c",
    "r90v",
    "free",
    "one_sided",
)


def iter_levels(n_max: int) -> Iterator[tuple[int, set[frozenset[Cell]]]]:
    """Yield (n, all fixed polyominoes of size n) for n = 1..n_max."""
    if n_max < 1:
        raise ValueError("n_max must be at least 1")
    level = {frozenset({(0, 0)})}
    yield 1, level
    for n in range(2, n_max + 1):
        grown: set[frozenset[Cell]] = set()
        for poly in level:
            for cell in poly:
                for nb in neighbors(cell):
                    if nb not in poly:
                        grown.add(normalize(poly | {nb}))
        level = grown
        yield n, level


def enumerate_fixed(n: int) -> set[frozenset[Cell]]:
    """All fixed polyominoes of exactly size n."""
    for size, level in iter_levels(n):
        if size == n:
            return level
    raise AssertionError("unreachable")


def symmetry_witnesses(poly) -> frozenset[str]:
    """The dihedral transforms that map the shape onto itself."""
    base = normalize(poly)
    return frozenset(name for name in TRANSFORMS if transform(base, name) == base)


def conjugate(witness: str, by: str) -> str:
    """The transform `by . witness . by^-1` (how witnesses move under `by`)."""
    return compose(compose(inverse(by), witness), by)


def classify(poly) -> set[str]:
    """Symmetry-class labels the shape is counted under ('fixed' excluded).

    Each class is pinned to one orientation of its symmetry element — a
    *vertical* mirror axis, the *main* diagonal, a *vertically* adjacent cell
    pair for the edge-midpoint half turn — matching the counting backends.
    Shapes whose only symmetry is the other orientation are the quarter-turn
    images of these and are deliberately not labeled.
    """
    base = normalize(poly)
    width = max(x for x, _ in base) + 1
    height = max(y for _, y in base) + 1
    wit = symmetry_witnesses(base)
    labels: set[str] = set()
    if "flip_x" in wit:
        labels.add("m90" if width % 2 else "m90v")
    if "transpose" in wit:
        labels.add("m45")
    if "rot180" in wit:
        if width % 2 and height % 2:
            labels.add("r180c")
        elif width % 2 and not height % 2:
            labels.add("r180m")
        elif not width % 2 and not height % 2:
            labels.add("r180v")
    if "rot90" in wit:
        labels.add("r90c" if width % 2 else "r90v")
    return labels


def _center_incident(width: int, height: int, label: str) -> tuple[Cell, ...]:
    """Cells touching the symmetry element of a point class, for a normalized
    bounding box (the element always sits at the box center)."""
    if label in ("r180c", "r90c"):
        return (((width - 1) // 2, (height - 1) // 2),)
    if label == "r180m":
        x = (width - 1) // 2
        return ((x, height // 2 - 1), (x, height // 2))
    xs = (width // 2 - 1, width // 2)
    ys = (height // 2 - 1, height // 2)
    return tuple((x, y) for x in xs for y in ys)


def classify_split(poly) -> dict[str, str]:
    """'core' or 'rings' per point-class label.

    A shape is core when it occupies every cell incident to its symmetry
    center, and a ring otherwise (it then encloses the empty ones).  The
    distinction only bites for the vertex half turn, whose central 2x2 block
    can be exactly half-occupied along a diagonal; such shapes are rings.
    """
    base = normalize(poly)
    width = max(x for x, _ in base) + 1
    height = max(y for _, y in base) + 1
    out = {}
    for label in classify(base) & {"r180c", "r180m", "r180v", "r90c", "r90v"}:
        hit = all(c in base for c in _center_incident(width, height, label))
        out[label] = "core" if hit else "rings"
    return out


def canonical_free(poly) -> tuple[Cell, ...]:
    return min(tuple(sorted(transform(poly, name))) for name in TRANSFORMS)


def canonical_one_sided(poly) -> tuple[Cell, ...]:
    return min(tuple(sorted(transform(poly, name))) for name in ROTATIONS)


POINT_LABELS = ("r180c", "r180m", "r180v", "r90c", "r90v")

SPLIT_KINDS = tuple(
    f"{label}_{part}" for label in POINT_LABELS for part in ("core", "rings")
)


def oracle_tables(n_max: int) -> dict[str, CountTable]:
    """Count every population in one enumeration sweep.

    Returns a table per kind in ORACLE_KINDS, plus a core/rings breakdown for
    each point class (keys like "r180m_core").  free/one_sided are counted by
    canonicalization here, independently of the Burnside identities used by
    the fast path, so the two can be checked against each other.
    """
    kinds = ORACLE_KINDS + SPLIT_KINDS
    counts: dict[str, dict[int, int]] = {kind: {} for kind in kinds}
    for n, level in iter_levels(n_max):
        tally: Counter[str] = Counter()
        free_forms = set()
        one_sided_forms = set()
        for poly in level:
            labels = classify(poly)
            for label in labels:
                tally[label] += 1
            if labels & set(POINT_LABELS):
                width = max(x for x, _ in poly) + 1
                height = max(y for _, y in poly) + 1
                for label in labels & set(POINT_LABELS):
                    incident = _center_incident(width, height, label)
                    part = "core" if all(c in poly for c in incident) else "rings"
                    tally[f"{label}_{part}"] += 1
            free_forms.add(canonical_free(poly))
            one_sided_forms.add(canonical_one_sided(poly))
        counts["fixed"][n] = len(level)
        counts["free"][n] = len(free_forms)
        counts["one_sided"][n] = len(one_sided_forms)
        for label in ORACLE_KINDS[1:9] + SPLIT_KINDS:
            counts[label][n] = tally[label]
    return {
        kind: CountTable(kind, n_max, counts[kind], source="oracle")
        for kind in kinds
    }
