"""Seeded Monte Carlo over stochastic oracle runs.

Each run gets an independent seed derived from (base_seed, run index), so
results do not depend on execution order and runs can be distributed across
worker processes. Aggregates are compared against the worst-case oracle run
of the same configuration.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from ..icm import CostModel, IcmCircuit
from ..layout import validate_schedule
from ..reliability import ReliabilityParams, extra_online
from ..schedulers import (
    HeraldOracle,
    SchedulerLimits,
    StochasticOracle,
    WorstCaseOracle,
    derive_seed,
    schedule_alaps,
    schedule_alapt,
    schedule_asap,
)

_COUNTER_FIELDS = ("trials", "batches", "failures", "exhausted_batches", "pool_hits", "pool_stored")


def run_policy(
    c: IcmCircuit,
    cm: CostModel,
    rel: ReliabilityParams,
    algo: str,
    strategy: str = "rus",
    oracle: HeraldOracle | None = None,
    limits: SchedulerLimits | None = None,
    matrix_rows: int | None = None,
    use_pool: bool = True,
    collect_events: bool = True,
):
    """Dispatch one scheduler invocation by policy name."""
    if algo == "asap":
        return schedule_asap(c, cm, rel, layout="column", limits=limits,
                             collect_events=collect_events)
    if algo == "asap-matrix":
        return schedule_asap(c, cm, rel, layout="matrix", matrix_rows=matrix_rows or 1,
                             limits=limits, collect_events=collect_events)
    if oracle is None:
        oracle = WorstCaseOracle(extra_online(rel).n_t)
    if algo == "alapt":
        return schedule_alapt(c, cm, rel, oracle, limits=limits, use_pool=use_pool,
                              collect_events=collect_events)
    if algo == "alaps":
        return schedule_alaps(c, cm, rel, oracle, limits=limits, strategy=strategy,
                              use_pool=use_pool, collect_events=collect_events)
    raise ValueError(f"unknown algo {algo!r}")


def _run_block(args):
    c, cm, rel, algo, strategy, base_seed, start, count = args
    t = np.empty(count, dtype=np.int64)
    s = np.empty(count, dtype=np.int64)
    bb = np.empty(count, dtype=np.int64)
    counters = dict.fromkeys(_COUNTER_FIELDS, 0)
    for j in range(count):
        oracle = StochasticOracle(derive_seed(base_seed, start + j), rel.p_f)
        _, m, trace = run_policy(
            c, cm, rel, algo, strategy, oracle, collect_events=False
        )
        t[j], s[j], bb[j] = m.T, m.S, m.BB
        tc = trace.counts
        counters["trials"] += tc.trials
        counters["batches"] += tc.batches
        counters["failures"] += tc.failures
        counters["exhausted_batches"] += tc.exhausted_batches
        counters["pool_hits"] += tc.pool_hits
        counters["pool_stored"] += tc.pool_stored
    return t, s, bb, counters


def _describe(arr: np.ndarray) -> dict:
    p50, p90, p99 = np.percentile(arr, [50, 90, 99])
    return {
        "mean": float(arr.mean()),
        "min": int(arr.min()),
        "p50": float(p50),
        "p90": float(p90),
        "p99": float(p99),
        "max": int(arr.max()),
    }


@dataclass
class MonteCarloStats:
    runs: int
    base_seed: int
    algo: str
    strategy: str
    injected_per_run: int
    T: dict
    S: dict
    BB: dict
    totals: dict
    mean_trials_per_init: float
    exhaustion_frequency: float
    worst_case: dict
    mean_bb_le_worst: bool
    samples: dict = field(default_factory=dict, repr=False)

    def to_json_dict(self) -> dict:
        return {
            "runs": self.runs,
            "base_seed": self.base_seed,
            "algo": self.algo,
            "strategy": self.strategy,
            "injected_per_run": self.injected_per_run,
            "T": self.T,
            "S": self.S,
            "BB": self.BB,
            "totals": self.totals,
            "mean_trials_per_init": self.mean_trials_per_init,
            "exhaustion_frequency": self.exhaustion_frequency,
            "worst_case": self.worst_case,
            "mean_bb_le_worst": self.mean_bb_le_worst,
        }


def monte_carlo(
    c: IcmCircuit,
    cm: CostModel,
    rel: ReliabilityParams,
    algo: str = "alaps",
    strategy: str = "rus",
    runs: int = 1000,
    base_seed: int = 0,
    workers: int = 1,
    keep_samples: bool = False,
) -> MonteCarloStats:
    if runs < 1:
        raise ValueError("runs must be >= 1")
    # sanity-check the configuration once, with full validation
    first_oracle = StochasticOracle(derive_seed(base_seed, 0), rel.p_f)
    schedule, _, _ = run_policy(c, cm, rel, algo, strategy, first_oracle)
    problems = validate_schedule(schedule, c, cm)
    if problems:
        raise AssertionError(f"scheduler produced an invalid schedule: {problems[:3]}")

    blocks = []
    if workers > 1 and runs >= 4 * workers:
        size = (runs + workers - 1) // workers
        spans = [(i, min(size, runs - i)) for i in range(0, runs, size)]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            blocks = list(
                pool.map(
                    _run_block,
                    [(c, cm, rel, algo, strategy, base_seed, start, count)
                     for start, count in spans],
                )
            )
    else:
        blocks = [_run_block((c, cm, rel, algo, strategy, base_seed, 0, runs))]

    t = np.concatenate([b[0] for b in blocks])
    s = np.concatenate([b[1] for b in blocks])
    bb = np.concatenate([b[2] for b in blocks])
    totals = dict.fromkeys(_COUNTER_FIELDS, 0)
    for b in blocks:
        for key in _COUNTER_FIELDS:
            totals[key] += b[3][key]

    n_inj = sum(1 for op in c.ops if op.kind.is_injected)
    mean_trials = totals["trials"] / (runs * n_inj) if n_inj else 0.0
    exhaustion = (
        totals["exhausted_batches"] / totals["batches"] if totals["batches"] else 0.0
    )

    _, worst_metrics, _ = run_policy(c, cm, rel, algo, strategy, oracle=None)
    worst = {"T": worst_metrics.T, "S": worst_metrics.S, "BB": worst_metrics.BB}

    stats = MonteCarloStats(
        runs=runs,
        base_seed=base_seed,
        algo=algo,
        strategy=strategy,
        injected_per_run=n_inj,
        T=_describe(t),
        S=_describe(s),
        BB=_describe(bb),
        totals=totals,
        mean_trials_per_init=mean_trials,
        exhaustion_frequency=exhaustion,
        worst_case=worst,
        mean_bb_le_worst=bool(bb.mean() <= worst["BB"]),
        samples={"T": t, "S": s, "BB": bb} if keep_samples else {},
    )
    return stats
