"""Monte Carlo harness for rejection-frequency and power experiments.

Each replication is a pure function of (master seed, cell index,
replication index): replication r of cell c uses the RNG stream
``c * M + r``, and results are aggregated in index order, so output is
byte-identical for a fixed seed no matter how many workers run.
"""

from __future__ import annotations

import math
import multiprocessing
from dataclasses import dataclass, field

from .dgp import Ar1Spec, simulate_ar1
from .rng import (
    NormalParams,
    RngStream,
    SkewStudentParams,
    StableParams,
    StudentParams,
)
from .stats import dm_test
from .subsampling import SubsampleConfig, abs_test, epa_test

KNOWN_TESTS = ("DM", "Alg1", "AlgC1")
NOISE_FAMILIES = ("stable-sym", "stable-asym", "student", "skew-student", "normal")


def make_noise(family: str, kappa: float, p_plus: float = 0.9):
    """Noise specification for a simulation design.

    The asymmetric stable design places the S0 location at
    beta * tan(pi*kappa/2) so the noise has mean zero for kappa > 1.
    """
    if family == "stable-sym":
        return StableParams(kappa, 0.0, 1.0, 0.0)
    if family == "stable-asym":
        if kappa == 1.0:
            raise ValueError("asymmetric stable design is undefined at kappa=1")
        beta = 2.0 * p_plus - 1.0
        return StableParams(kappa, beta, 1.0, beta * math.tan(math.pi * kappa / 2.0))
    if family == "student":
        return StudentParams(kappa)
    if family == "skew-student":
        return SkewStudentParams(kappa, p_plus)
    if family == "normal":
        return NormalParams()
    raise ValueError(f"unknown noise family {family!r}; expected one of {NOISE_FAMILIES}")


@dataclass(frozen=True)
class ExperimentConfig:
    """Declarative description of a rejection-frequency experiment grid."""

    kappas: tuple[float, ...]
    sample_sizes: tuple[int, ...]
    deltas: tuple[float, ...] = (0.0,)
    noise: str = "stable-sym"
    p_plus: float = 0.9
    phi: float = 0.5
    replications: int = 2000
    level: float = 0.05
    tests: tuple[str, ...] = ("DM", "Alg1")
    seed: int = 0
    burn_in: int = 10_000
    block: int | None = None
    dm_lag: int | str = "auto"
    workers: int = 1

    def __post_init__(self) -> None:
        if self.replications < 1:
            raise ValueError(f"replications must be >= 1, got {self.replications}")
        if not self.kappas:
            raise ValueError("kappa grid is empty")
        if not self.sample_sizes:
            raise ValueError("sample size grid is empty")
        unknown = set(self.tests) - set(KNOWN_TESTS)
        if unknown:
            raise ValueError(f"unknown tests {sorted(unknown)}; expected {KNOWN_TESTS}")
        for kappa in self.kappas:
            make_noise(self.noise, kappa, self.p_plus)  # validates the pair


@dataclass(frozen=True)
class _Cell:
    kappa: float
    n: int
    delta: float
    noise: str
    p_plus: float
    phi: float
    burn_in: int
    level: float
    tests: tuple[str, ...]
    block: int | None
    dm_lag: int | str
    seed: int
    base_stream: int
    replications: int = field(default=0)


def _run_replication(task: tuple[_Cell, int]) -> tuple[bool, ...]:
    cell, rep = task
    spec = Ar1Spec(
        delta=cell.delta,
        phi=cell.phi,
        noise=make_noise(cell.noise, cell.kappa, cell.p_plus),
        n=cell.n,
        stream=RngStream(cell.seed, cell.base_stream + rep),
        burn_in=cell.burn_in,
    )
    x = simulate_ar1(spec).values
    sub_cfg = SubsampleConfig(block=cell.block, level=cell.level)
    outcomes = []
    for test in cell.tests:
        if test == "DM":
            outcomes.append(dm_test(x, level=cell.level, lag=cell.dm_lag).reject)
        elif test == "Alg1":
            outcomes.append(epa_test(x, sub_cfg).reject)
        elif test == "AlgC1":
            outcomes.append(abs_test(x, sub_cfg).reject)
    return tuple(outcomes)


def _map_ordered(fn, tasks, workers: int):
    if workers <= 1 or len(tasks) < 2:
        return [fn(t) for t in tasks]
    chunk = max(1, len(tasks) // (workers * 8))
    with multiprocessing.Pool(workers) as pool:
        return pool.map(fn, tasks, chunksize=chunk)


def run_rejection_experiment(cfg: ExperimentConfig) -> list[dict]:
    """Rejection frequencies over the (kappa, n, delta) grid.

    Returns one row per (cell, test) with the rejection percentage, its
    binomial Monte Carlo standard error, and the provenance fields.
    """
    rows = []
    m = cfg.replications
    cells = [
        (kappa, n, delta)
        for kappa in cfg.kappas
        for n in cfg.sample_sizes
        for delta in cfg.deltas
    ]
    for cell_index, (kappa, n, delta) in enumerate(cells):
        cell = _Cell(
            kappa=kappa,
            n=n,
            delta=delta,
            noise=cfg.noise,
            p_plus=cfg.p_plus,
            phi=cfg.phi,
            burn_in=cfg.burn_in,
            level=cfg.level,
            tests=cfg.tests,
            block=cfg.block,
            dm_lag=cfg.dm_lag,
            seed=cfg.seed,
            base_stream=cell_index * m,
            replications=m,
        )
        tasks = [(cell, rep) for rep in range(m)]
        outcomes = _map_ordered(_run_replication, tasks, cfg.workers)
        for t_idx, test in enumerate(cfg.tests):
            count = sum(outcome[t_idx] for outcome in outcomes)
            p = count / m
            rows.append({
                "kappa": kappa,
                "n": n,
                "delta": delta,
                "test": test,
                "reject_pct": 100.0 * p,
                "mc_se": 100.0 * math.sqrt(p * (1.0 - p) / m),
                "M": m,
                "seed": cfg.seed,
            })
    return rows


def run_power_experiment(cfg: ExperimentConfig) -> list[dict]:
    """Power curves over a grid of mean shifts (same engine, delta-major).

    The delta = 0 column reproduces the size experiment; the implied
    process mean is 2 * delta at the default phi = 0.5.
    """
    if all(d == 0.0 for d in cfg.deltas):
        raise ValueError("power experiment needs at least one non-zero delta")
    return run_rejection_experiment(cfg)
