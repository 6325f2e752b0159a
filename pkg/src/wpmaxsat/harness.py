"""Benchmark harness: run algorithms over a directory of WCNF files and
summarise solved counts, percentages and time per instance family.

A family is the first directory level below the benchmark root; files
placed directly in the root form a family named after the root itself.
"""

from __future__ import annotations

import csv
import io
import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Optional, Sequence

from .solvers import SolverConfig, Status, solve
from .wcnf import WcnfParseError, atomic_write, read_wcnf

log = logging.getLogger(__name__)

CSV_HEADER = ["solver", "family", "solved", "total", "percent", "total_seconds"]
SOLVED = ("Optimum", "HardUnsat")


@dataclass
class BenchmarkRun:
    path: str
    family: str
    algorithm: str
    limit: Optional[float]
    status: str  # Optimum, HardUnsat, Timeout or Error
    cost: Optional[int] = None
    elapsed: float = 0.0
    message: str = ""

    @property
    def solved(self) -> bool:
        return self.status in SOLVED


def discover(root) -> List[tuple]:
    """``(family, path)`` pairs for every ``*.wcnf`` file under ``root``, sorted."""
    root = Path(root)
    found = []
    for path in sorted(root.rglob("*.wcnf")):
        rel = path.relative_to(root)
        family = rel.parts[0] if len(rel.parts) > 1 else root.name
        found.append((family, str(path)))
    return found


def run_one(job) -> BenchmarkRun:
    family, path, algorithm, options = job
    started = time.monotonic()
    run = BenchmarkRun(path, family, algorithm, options.get("timeout"), "Error")
    try:
        inst = read_wcnf(path)
        report = solve(inst, SolverConfig(algorithm=algorithm, **options))
        run.status = report.status.value
        run.cost = report.cost if report.status is Status.OPTIMUM else None
    except (OSError, WcnfParseError, ValueError) as exc:
        run.message = str(exc)
    run.elapsed = time.monotonic() - started
    return run


def run_benchmark(root, algorithms: Sequence[str], jobs: int = 1, **options) -> List[BenchmarkRun]:
    """Every algorithm on every instance; results come back in (algorithm, path) order.

    ``options`` are passed to :class:`SolverConfig` (timeout, max_conflicts,
    bound_step, seed, ...).
    """
    work = [(fam, path, algo, options) for algo in algorithms for fam, path in discover(root)]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            runs = list(pool.map(run_one, work))
    else:
        runs = [run_one(w) for w in work]
    errors: Dict[str, List[BenchmarkRun]] = {}
    for r in runs:
        if r.status == "Error":
            errors.setdefault(r.algorithm, []).append(r)
            log.info("%s on %s: %s", r.algorithm, r.path, r.message)
    for algo, bad in errors.items():
        log.warning("%s: %d instance(s) counted as Error, e.g. %s: %s",
                    algo, len(bad), Path(bad[0].path).name, bad[0].message)
    return runs


@dataclass
class Cell:
    solved: int = 0
    total: int = 0
    seconds: float = 0.0

    @property
    def percent(self) -> float:
        return round(100.0 * self.solved / self.total, 1) if self.total else 0.0


class ComparisonTable:
    """Solved counts per solver and family, with a Total column."""

    def __init__(self, runs: Sequence[BenchmarkRun]):
        self.solvers: List[str] = []
        self.families: List[str] = []
        self.cells: Dict[tuple, Cell] = {}
        for r in runs:
            if r.algorithm not in self.solvers:
                self.solvers.append(r.algorithm)
            if r.family not in self.families:
                self.families.append(r.family)
        self.families.sort()
        for r in runs:
            for fam in (r.family, "Total"):
                cell = self.cells.setdefault((r.algorithm, fam), Cell())
                cell.total += 1
                cell.solved += r.solved
                cell.seconds += r.elapsed

    def cell(self, solver: str, family: str) -> Cell:
        return self.cells.get((solver, family), Cell())

    def to_csv(self, timing: bool = True) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_HEADER)
        for s in self.solvers:
            for fam in self.families + ["Total"]:
                c = self.cell(s, fam)
                w.writerow([s, fam, c.solved, c.total, f"{c.percent:.1f}",
                            f"{c.seconds:.2f}" if timing else "NA"])
        return buf.getvalue()

    def _render(self, title: str, columns: List[str], value) -> str:
        rows = [["Solver"] + columns] + [[s] + [value(s, f) for f in columns] for s in self.solvers]
        widths = [max(len(r[i]) for r in rows) for i in range(len(rows[0]))]
        lines = [title]
        for k, r in enumerate(rows):
            lines.append("  ".join(x.ljust(widths[0]) if i == 0 else x.rjust(widths[i])
                                   for i, x in enumerate(r)).rstrip())
            if k == 0:
                lines.append("-" * len(lines[-1]))
        return "\n".join(lines)

    def to_text(self, timing: bool = True) -> str:
        parts = [
            self._render("Number of instances solved", self.families,
                         lambda s, f: str(self.cell(s, f).solved)),
            self._render("Percentages of instances solved", self.families + ["Total"],
                         lambda s, f: _pct(self.cell(s, f).percent)),
        ]
        if timing:
            parts.append(self._render("Time in seconds", self.families + ["Total"],
                                      lambda s, f: f"{self.cell(s, f).seconds:.2f}"))
        return "\n\n".join(parts) + "\n"


def _pct(p: float) -> str:
    text = f"{p:.1f}"
    return (text[:-2] if text.endswith(".0") else text) + "%"


def runs_csv(runs: Sequence[BenchmarkRun], timing: bool = True) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["solver", "family", "instance", "status", "cost", "seconds"])
    for r in runs:
        w.writerow([r.algorithm, r.family, Path(r.path).name, r.status,
                    "" if r.cost is None else r.cost, f"{r.elapsed:.3f}" if timing else "NA"])
    return buf.getvalue()


def write_outputs(table: ComparisonTable, csv_path=None, runs=None, runs_path=None, timing=True) -> None:
    if csv_path is not None:
        atomic_write(csv_path, table.to_csv(timing))
    if runs_path is not None and runs is not None:
        atomic_write(runs_path, runs_csv(runs, timing))
