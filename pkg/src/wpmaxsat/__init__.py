"""Weighted partial MaxSAT: WCNF parsing, a CDCL engine, PB encodings and
fourteen SAT-based MaxSAT algorithms with a benchmark harness."""

from .solvers import ALGORITHMS, SolveReport, SolverConfig, Status, solve
from .wcnf import WcnfInstance, parse_wcnf, read_wcnf

__all__ = ["ALGORITHMS", "SolveReport", "SolverConfig", "Status", "WcnfInstance", "parse_wcnf", "read_wcnf",
           "solve"]
