"""Command-line front end.

Four commands: `count` one population, `table` the assembled free/one-sided
census, `verify` everything against the reference tables, `oracle` the
brute-force cross-check.  Counts are emitted as decimal strings in csv and
json output because they overflow double precision long before the engines
run out of steam.

Exit codes: 0 success, 1 a verification mismatch, 2 bad usage or unreadable
input, 3 a memory budget tripped.

Checkpoint files (growth-backed runs only) are line-delimited
`subtree_index,n,value` records, appended as each partition unit finishes;
rerunning with the same path skips the recorded subtrees.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from dataclasses import dataclass

from polycensus.aggregate import (
    CLASS_KINDS,
    full_census,
    load_reference,
    m90v_table,
    verify_tables,
)
from polycensus.cells import CountTable, ResourceLimitError
from polycensus.growth import count_fixed
from polycensus.oracle import oracle_tables
from polycensus.pointsym import POINT_KINDS, point_tables
from polycensus.transfer import TM_KINDS, count_mirror_tm

#: growth searches cost roughly 4x per extra cell; past this they need --force
GROWTH_CEILING = 22
#: the oracle holds every shape of every size in memory; past this, --force
ORACLE_CEILING = 12

FORMATS = ("text", "csv", "json")
SPLITS = ("core", "rings", "total")

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_USAGE = 2
EXIT_RESOURCE = 3


@dataclass
class RunConfig:
    """One resolved invocation: what to run and with which resources."""

    command: str
    kind: str | None
    n_max: int
    threads: int
    split_depth: int
    fmt: str
    memory_budget: int | None
    reference: str | None = None
    checkpoint: str | None = None
    split: str | None = None
    force: bool = False

    def __post_init__(self) -> None:
        if self.n_max < 1:
            raise ValueError("n must be at least 1")
        if self.threads < 1:
            raise ValueError("threads must be at least 1")
        if self.fmt not in FORMATS:
            raise ValueError(f"format must be one of {FORMATS}")

    @property
    def growth_kwargs(self) -> dict:
        return {
            "workers": self.threads,
            "split_depth": self.split_depth,
            "parallel": self.threads > 1,
        }


class _Usage(Exception):
    """Bad invocation detected after argparse; message goes to stderr."""


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return value


def _env_int(name: str) -> int | None:
    raw = os.environ.get(name)
    if raw is None or raw == "":
        return None
    try:
        return int(raw)
    except ValueError:
        raise _Usage(f"environment variable {name} is not an integer: {raw!r}")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="polycensus",
        description="Count polyominoes by symmetry class, with cross-checked engines.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--n", type=_positive, required=True, metavar="N",
                       help="largest size to count")
        p.add_argument("--threads", type=_positive, default=None,
                       help="worker count (default: POLYCENSUS_THREADS or 1)")
        p.add_argument("--split-depth", type=int, default=None, metavar="D",
                       help="subtree partition depth for growth searches")
        p.add_argument("--format", choices=FORMATS, default="text")
        p.add_argument("--memory-budget", type=_positive, default=None, metavar="BYTES",
                       help="state-store cap for the boundary sweeps "
                            "(default: POLYCENSUS_MEMORY_BUDGET or the engine default)")
        p.add_argument("--force", action="store_true",
                       help="run past the desk-scale guardrails")

    p = sub.add_parser("count", help="count one symmetry class")
    p.add_argument("--class", dest="kind", required=True, choices=CLASS_KINDS,
                   help="population to count")
    p.add_argument("--split", choices=SPLITS, default=None,
                   help="sub-population of a point class")
    p.add_argument("--checkpoint", metavar="PATH",
                   help="resumable per-subtree record file (growth engines)")
    common(p)

    p = sub.add_parser("table", help="assembled free/one-sided census")
    p.add_argument("--checkpoint", metavar="PATH",
                   help="resumable record file, suffixed per engine stage")
    common(p)

    p = sub.add_parser("verify", help="run everything and compare with references")
    p.add_argument("--reference", metavar="PATH",
                   help="alternative reference CSV (kind,n,value,provenance)")
    common(p)

    p = sub.add_parser("oracle", help="brute-force tables for every class")
    common(p)

    return parser


def _resolve(args: argparse.Namespace) -> RunConfig:
    threads = args.threads
    if threads is None:
        threads = _env_int("POLYCENSUS_THREADS") or 1
        if threads < 1:
            raise _Usage("POLYCENSUS_THREADS must be at least 1")
    budget = args.memory_budget
    if budget is None:
        budget = _env_int("POLYCENSUS_MEMORY_BUDGET")
    split_depth = args.split_depth
    if split_depth is None:
        split_depth = 4 if threads > 1 else 0
    if split_depth < 0:
        raise _Usage("--split-depth must be nonnegative")
    try:
        return RunConfig(
            command=args.command,
            kind=getattr(args, "kind", None),
            n_max=args.n,
            threads=threads,
            split_depth=split_depth,
            fmt=args.format,
            memory_budget=budget,
            reference=getattr(args, "reference", None),
            checkpoint=getattr(args, "checkpoint", None),
            split=getattr(args, "split", None),
            force=args.force,
        )
    except ValueError as exc:
        raise _Usage(str(exc))


def _guard_growth(config: RunConfig, growth_n: int) -> None:
    if growth_n > GROWTH_CEILING and not config.force:
        raise _Usage(
            f"growth search at n={growth_n} exceeds the desk-scale ceiling "
            f"({GROWTH_CEILING}); pass --force to run it anyway"
        )


# ---------------------------------------------------------------------------
# output


def _emit_table(table: CountTable, config: RunConfig, seconds: float, out) -> None:
    if config.fmt == "json":
        doc = {
            "class": table.kind,
            "entries": [{"n": n, "value": str(v)} for n, v in table.items()],
            "engine": table.source,
            "threads": config.threads,
            "seconds": round(seconds, 3),
        }
        json.dump(doc, out, indent=2)
        out.write("\n")
    elif config.fmt == "csv":
        out.write("kind,n,value\n")
        for n, v in table.items():
            out.write(f"{table.kind},{n},{v}\n")
    else:
        out.write(f"class {table.kind}  engine {table.source}  threads {config.threads}\n")
        out.write(f"# seconds {seconds:.3f}\n")
        nw = max(2, len(str(table.n_max)))
        vw = max(len(str(v)) for _, v in table.items())
        for n, v in table.items():
            out.write(f"{n:>{nw}}  {v:>{vw}}\n")


def _emit_census(
    rows: list[tuple[int, int, int]], config: RunConfig, seconds: float, out
) -> None:
    if config.fmt == "json":
        doc = {
            "n_max": config.n_max,
            "rows": [
                {"n": n, "free": str(f), "one_sided": str(o)} for n, f, o in rows
            ],
            "threads": config.threads,
            "seconds": round(seconds, 3),
        }
        json.dump(doc, out, indent=2)
        out.write("\n")
    elif config.fmt == "csv":
        out.write("n,free,one_sided\n")
        for n, f, o in rows:
            out.write(f"{n},{f},{o}\n")
    else:
        out.write(f"free / one-sided census to n={config.n_max}  threads {config.threads}\n")
        out.write(f"# seconds {seconds:.3f}\n")
        nw = max(2, len(str(config.n_max)))
        fw = max(len("free"), max(len(str(f)) for _, f, _ in rows))
        ow = max(len("one-sided"), max(len(str(o)) for _, _, o in rows))
        out.write(f"{'n':>{nw}}  {'free':>{fw}}  {'one-sided':>{ow}}\n")
        for n, f, o in rows:
            out.write(f"{n:>{nw}}  {f:>{fw}}  {o:>{ow}}\n")


# ---------------------------------------------------------------------------
# commands


def cmd_count(config: RunConfig, out) -> int:
    kind = config.kind
    if config.split and kind not in POINT_KINDS:
        raise _Usage(f"--split applies to the point classes {POINT_KINDS}, not {kind}")
    if config.checkpoint and kind in TM_KINDS:
        raise _Usage("--checkpoint applies to growth-backed classes; "
                     f"the {kind} sweep restarts cheaply")
    t0 = time.perf_counter()
    if kind in TM_KINDS:
        table = count_mirror_tm(kind, config.n_max, memory_budget=config.memory_budget)
    elif kind == "fixed":
        _guard_growth(config, config.n_max)
        table = count_fixed(
            config.n_max, checkpoint=config.checkpoint, **config.growth_kwargs
        )
    elif kind == "m90v":
        half = config.n_max // 2
        _guard_growth(config, half)
        fixed = count_fixed(
            max(half, 1), checkpoint=config.checkpoint, **config.growth_kwargs
        )
        table = m90v_table(fixed, config.n_max)
    elif kind in POINT_KINDS:
        _guard_growth(config, config.n_max)
        parts = point_tables(
            kind, config.n_max, checkpoint=config.checkpoint, **config.growth_kwargs
        )
        table = parts[config.split or "total"]
    else:  # free / one_sided need every engine
        _guard_growth(config, config.n_max)
        tables = full_census(
            config.n_max,
            memory_budget=config.memory_budget,
            checkpoint=config.checkpoint,
            **config.growth_kwargs,
        )
        table = tables[kind]
    _emit_table(table, config, time.perf_counter() - t0, out)
    return EXIT_OK


def cmd_table(config: RunConfig, out) -> int:
    _guard_growth(config, config.n_max)
    t0 = time.perf_counter()
    tables = full_census(
        config.n_max,
        progress=lambda msg: print(msg, file=sys.stderr),
        memory_budget=config.memory_budget,
        checkpoint=config.checkpoint,
        **config.growth_kwargs,
    )
    rows = [
        (n, tables["free"][n], tables["one_sided"][n])
        for n in range(1, config.n_max + 1)
    ]
    _emit_census(rows, config, time.perf_counter() - t0, out)
    return EXIT_OK


def cmd_verify(config: RunConfig, out) -> int:
    _guard_growth(config, config.n_max)
    try:
        reference = load_reference(config.reference)
    except OSError as exc:
        raise _Usage(f"cannot read reference table: {exc}")
    tables = full_census(
        config.n_max,
        progress=lambda msg: print(msg, file=sys.stderr),
        memory_budget=config.memory_budget,
        **config.growth_kwargs,
    )
    report = verify_tables(tables, reference)
    for kind in sorted(tables):
        rows = reference.get(kind)
        if rows is None:
            out.write(f"{kind}: missing from reference, skipped\n")
            continue
        for n in sorted(rows):
            if n > config.n_max:
                continue
            want = rows[n][0]
            got = tables[kind][n]
            verdict = "ok" if got == want else "MISMATCH"
            out.write(f"{kind} {n}: computed {got} reference {want} {verdict}\n")
    out.write(
        f"checked {report.checked} values: "
        f"{len(report.mismatches)} mismatches, "
        f"{len(report.unreferenced)} kinds without references\n"
    )
    return EXIT_OK if report.ok else EXIT_MISMATCH


def cmd_oracle(config: RunConfig, out) -> int:
    if config.n_max > ORACLE_CEILING and not config.force:
        raise _Usage(
            f"the oracle enumerates every shape; n={config.n_max} exceeds "
            f"{ORACLE_CEILING} (pass --force if you mean it)"
        )
    t0 = time.perf_counter()
    tables = oracle_tables(config.n_max)
    seconds = time.perf_counter() - t0
    if config.fmt == "json":
        doc = {
            "n_max": config.n_max,
            "tables": {
                kind: [{"n": n, "value": str(v)} for n, v in table.items()]
                for kind, table in sorted(tables.items())
            },
            "seconds": round(seconds, 3),
        }
        json.dump(doc, out, indent=2)
        out.write("\n")
    elif config.fmt == "csv":
        out.write("kind,n,value\n")
        for kind, table in sorted(tables.items()):
            for n, v in table.items():
                out.write(f"{kind},{n},{v}\n")
    else:
        out.write(f"oracle tables to n={config.n_max}\n")
        out.write(f"# seconds {seconds:.3f}\n")
        for kind, table in sorted(tables.items()):
            row = "  ".join(str(table[n]) for n in range(1, config.n_max + 1))
            out.write(f"{kind:>12}  {row}\n")
    return EXIT_OK


_COMMANDS = {
    "count": cmd_count,
    "table": cmd_table,
    "verify": cmd_verify,
    "oracle": cmd_oracle,
}


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        config = _resolve(args)
        return _COMMANDS[args.command](config, sys.stdout)
    except _Usage as exc:
        print(f"polycensus: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ResourceLimitError as exc:
        print(
            f"polycensus: {exc} (complete through n={exc.completed_n_max}; "
            "raise --memory-budget to go further)",
            file=sys.stderr,
        )
        return EXIT_RESOURCE


if __name__ == "__main__":
    sys.exit(main())
