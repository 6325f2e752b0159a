"""Random WPMax2SAT / WPMax3SAT instance generator.

Each clause picks ``width`` distinct variables uniformly and negates each
with probability 1/2.  A fixed fraction of the clauses (chosen uniformly)
is made hard; the rest get integer weights drawn uniformly from
``[min_weight, max_weight]``.  Instance ``i`` of a batch is seeded from
``(seed, family, i)`` so single files can be regenerated on their own.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from pathlib import Path
from typing import List

from .wcnf import WcnfInstance, write_wcnf

FAMILIES = {"wpmax2sat": 2, "wpmax3sat": 3}


@dataclass
class GeneratorSpec:
    family: str = "wpmax2sat"
    count: int = 10
    num_vars: int = 10
    num_clauses: int = 30
    min_weight: int = 1
    max_weight: int = 20
    hard_fraction: float = 0.2
    seed: int = 0

    def validate(self) -> None:
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}; choose from {', '.join(FAMILIES)}")
        if FAMILIES[self.family] > self.num_vars:
            raise ValueError(f"clause width {FAMILIES[self.family]} exceeds the {self.num_vars} variables")
        if not 1 <= self.min_weight <= self.max_weight:
            raise ValueError("weights must satisfy 1 <= min_weight <= max_weight")
        if not 0.0 <= self.hard_fraction <= 1.0:
            raise ValueError("hard_fraction must lie in [0, 1]")
        if self.count < 0 or self.num_clauses < 0:
            raise ValueError("count and num_clauses must be non-negative")


def random_instance(spec: GeneratorSpec, index: int) -> WcnfInstance:
    spec.validate()
    rng = random.Random(f"{spec.seed}:{spec.family}:{index}")
    width = FAMILIES[spec.family]
    clauses = []
    for _ in range(spec.num_clauses):
        vs = rng.sample(range(1, spec.num_vars + 1), width)
        clauses.append([v if rng.random() < 0.5 else -v for v in vs])
    n_hard = round(spec.hard_fraction * spec.num_clauses)
    hard_idx = set(rng.sample(range(spec.num_clauses), n_hard))
    soft, hard = [], []
    for j, c in enumerate(clauses):
        if j in hard_idx:
            hard.append(c)
        else:
            soft.append((c, rng.randint(spec.min_weight, spec.max_weight)))
    return WcnfInstance.build(spec.num_vars, soft, hard)


def generate(spec: GeneratorSpec, out_dir) -> List[Path]:
    """Write ``spec.count`` instances into ``out_dir``; returns the paths."""
    spec.validate()
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = []
    for i in range(spec.count):
        path = out / f"{spec.family}-{spec.seed}-{i:03d}.wcnf"
        write_wcnf(random_instance(spec, i), path)
        paths.append(path)
    return paths
