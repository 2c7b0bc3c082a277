"""Whole-census assembly and verification against reference tables.

The free and one-sided totals come from averaging the fixed count over the
symmetry group, which turns the eight fixed-class populations into two exact
identities:

    free      = (fixed + 2*fixed_half + 2*m90 + 2*m45 + r180c
                 + 2*r180m + r180v + 2*r90c + 2*r90v) / 8
    one_sided = (fixed + r180c + 2*r180m + r180v + 2*r90c + 2*r90v) / 4

with fixed_half(n) = fixed(n/2) at even n (the population fixed by a
half-turn-with-shift coincides with half-size fixed figures), else 0.  The
divisions must be exact; a remainder means one of the engines is wrong, so
assembly checks them hard rather than rounding.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Callable

from polycensus.cells import CountTable
from polycensus.growth import count_fixed
from polycensus.pointsym import POINT_KINDS, point_tables
from polycensus.transfer import count_mirror_tm

#: every population the census can report, in reporting order
CLASS_KINDS = (
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

#: point-class subpopulations that also have reference columns
SPLIT_COLUMNS = tuple(
    f"{kind}_{part}" for kind in ("r180m", "r180v") for part in ("core", "rings")
)


def m90v_table(fixed: CountTable, n_max: int) -> CountTable:
    """Axis-between-columns mirror figures: cell columns pair up, so these
    are exactly the half-size fixed figures."""
    counts = {n: fixed[n // 2] for n in range(2, n_max + 1, 2) if fixed[n // 2]}
    return CountTable("m90v", n_max, counts, source="identity")


def _eighth(tables: dict[str, CountTable], n: int) -> int:
    half = tables["fixed"][n // 2] if n % 2 == 0 else 0
    return (
        tables["fixed"][n]
        + 2 * half
        + 2 * tables["m90"][n]
        + 2 * tables["m45"][n]
        + tables["r180c"][n]
        + 2 * tables["r180m"][n]
        + tables["r180v"][n]
        + 2 * tables["r90c"][n]
        + 2 * tables["r90v"][n]
    )


def _quarter(tables: dict[str, CountTable], n: int) -> int:
    return (
        tables["fixed"][n]
        + tables["r180c"][n]
        + 2 * tables["r180m"][n]
        + tables["r180v"][n]
        + 2 * tables["r90c"][n]
        + 2 * tables["r90v"][n]
    )


def quotient_tables(tables: dict[str, CountTable], n_max: int) -> dict[str, CountTable]:
    """Assemble free and one_sided from the eight fixed-class tables,
    checking exact divisibility at every size."""
    free = {}
    one_sided = {}
    for n in range(1, n_max + 1):
        num = _eighth(tables, n)
        if num % 8:
            raise ArithmeticError(f"free({n}): symmetry sum {num} not divisible by 8")
        free[n] = num // 8
        num = _quarter(tables, n)
        if num % 4:
            raise ArithmeticError(f"one_sided({n}): symmetry sum {num} not divisible by 4")
        one_sided[n] = num // 4
    return {
        "free": CountTable("free", n_max, free, source="burnside"),
        "one_sided": CountTable("one_sided", n_max, one_sided, source="burnside"),
    }


def full_census(
    n_max: int,
    *,
    progress: Callable[[str], None] | None = None,
    memory_budget: int | None = None,
    **growth_kwargs,
) -> dict[str, CountTable]:
    """Compute every population up to n_max (table per kind in CLASS_KINDS,
    plus the core/rings split columns).

    growth_kwargs (workers, split_depth, checkpoint, jit, ...) go to the
    growth engine; the mirror sweeps take only the memory budget and jit.
    """

    def note(msg: str) -> None:
        if progress:
            progress(msg)

    jit = growth_kwargs.get("jit")
    tables: dict[str, CountTable] = {}
    note("fixed: growth search")
    checkpoint = growth_kwargs.pop("checkpoint", None)
    tables["fixed"] = count_fixed(
        n_max,
        checkpoint=None if checkpoint is None else f"{checkpoint}.fixed",
        **growth_kwargs,
    )
    tables["m90v"] = m90v_table(tables["fixed"], n_max)
    for kind in ("m90", "m45"):
        note(f"{kind}: boundary sweep")
        tables[kind] = count_mirror_tm(kind, n_max, memory_budget=memory_budget, jit=jit)
    for kind in POINT_KINDS:
        note(f"{kind}: growth search on the quotient board")
        parts = point_tables(
            kind,
            n_max,
            checkpoint=None if checkpoint is None else f"{checkpoint}.{kind}",
            **growth_kwargs,
        )
        tables[kind] = parts["total"]
        tables[f"{kind}_core"] = parts["core"]
        tables[f"{kind}_rings"] = parts["rings"]
    note("free/one_sided: symmetry-group average")
    tables.update(quotient_tables(tables, n_max))
    return tables


# ---------------------------------------------------------------------------
# reference data


def load_reference(path: str | None = None) -> dict[str, dict[int, tuple[int, str]]]:
    """Published and derived count tables: kind -> {n: (value, provenance)}.

    `path` substitutes an external CSV with the same columns for the
    packaged one.
    """
    out: dict[str, dict[int, tuple[int, str]]] = {}
    source = (
        resources.files("polycensus").joinpath("data/reference.csv")
        if path is None
        else Path(path)
    )
    with source.open(newline="") as fh:
        for row in csv.DictReader(fh):
            out.setdefault(row["kind"], {})[int(row["n"])] = (
                int(row["value"]),
                row["provenance"],
            )
    return out


@dataclass
class Verification:
    """Outcome of checking computed tables against the reference data."""

    checked: int = 0
    mismatches: list[tuple[str, int, int, int]] = field(default_factory=list)
    unreferenced: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.mismatches


def verify_tables(
    tables: dict[str, CountTable],
    reference: dict[str, dict[int, tuple[int, str]]] | None = None,
) -> Verification:
    """Compare computed tables with every reference value in range.

    Kinds lacking reference data (the quarter-turn classes have none) are
    reported as unreferenced, not failed: the Burnside divisibility checks
    and the free/one_sided comparisons still constrain them.
    """
    if reference is None:
        reference = load_reference()
    report = Verification()
    for kind, table in sorted(tables.items()):
        rows = reference.get(kind)
        if rows is None:
            report.unreferenced.append(kind)
            continue
        for n, (want, _) in sorted(rows.items()):
            if n > table.n_max:
                continue
            got = table[n]
            report.checked += 1
            if got != want:
                report.mismatches.append((kind, n, got, want))
    return report
