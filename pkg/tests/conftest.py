import random
from pathlib import Path

import pytest

from wpmaxsat.wcnf import WcnfInstance, read_wcnf

WORKED_DIR = Path(__file__).resolve().parent.parent / "benchmarks" / "worked"


def worked(name: str) -> WcnfInstance:
    return read_wcnf(WORKED_DIR / f"{name}.wcnf")


def random_instance(rng: random.Random, max_vars=12, max_clauses=30, max_weight=20,
                    hard_range=(0.1, 0.3), max_width=3) -> WcnfInstance:
    """Small random WPMaxSAT instance in the oracle-checkable range."""
    n = rng.randint(1, max_vars)
    m = rng.randint(1, max_clauses)
    n_hard = round(m * rng.uniform(*hard_range))
    soft, hard = [], []
    for j in range(m):
        width = rng.randint(1, min(max_width, n))
        vs = rng.sample(range(1, n + 1), width)
        clause = [v if rng.random() < 0.5 else -v for v in vs]
        if j < n_hard:
            hard.append(clause)
        else:
            soft.append((clause, rng.randint(1, max_weight)))
    return WcnfInstance.build(n, soft, hard)


@pytest.fixture
def rng():
    return random.Random(20240601)
