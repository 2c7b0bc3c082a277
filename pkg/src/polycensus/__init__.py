"""polycensus: verified counting of polyominoes by symmetry class."""

from polycensus.aggregate import (
    CLASS_KINDS,
    full_census,
    load_reference,
    quotient_tables,
    verify_tables,
)
from polycensus.cells import (
    Cell,
    CountTable,
    ResourceLimitError,
    SymmetryClass,
    TRANSFORMS,
    compose,
    is_connected,
    normalize,
    transform,
)
from polycensus.growth import count_fixed, count_problem
from polycensus.oracle import oracle_tables
from polycensus.pointsym import POINT_KINDS, point_tables
from polycensus.transfer import count_m45, count_m90, count_mirror_tm

__version__ = "0.1.0"

__all__ = [
    "CLASS_KINDS",
    "Cell",
    "CountTable",
    "POINT_KINDS",
    "ResourceLimitError",
    "SymmetryClass",
    "TRANSFORMS",
    "compose",
    "count_fixed",
    "count_m45",
    "count_m90",
    "count_mirror_tm",
    "count_problem",
    "full_census",
    "is_connected",
    "load_reference",
    "normalize",
    "oracle_tables",
    "point_tables",
    "quotient_tables",
    "transform",
    "verify_tables",
]
