"""Seeded Monte Carlo trials and threshold sweeps.

A sweep is a pure function of its :class:`SweepConfig`: per-trial seeds are
derived from (master seed, c index, trial index) and records are sorted by
(c index, trial) before writing, so the output does not depend on the
number of workers.  ``runtime_ms`` is recorded as 0 unless timing is
requested, which keeps repeated sweeps byte-identical.
"""

from __future__ import annotations

import csv
import json
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import Iterable, NamedTuple, Optional, Sequence

import numpy as np
from scipy.stats import binomtest

from .analysis.bottleneck import bottleneck_report
from .errors import ParameterError
from .graph import GenParams, generate_double_graph
from .jigsaw import run_jigsaw

CSV_FIELDS = ("n", "p1", "p2", "c", "trial", "seed", "percolated", "rounds",
              "max_cluster", "red_edges", "blue_edges", "runtime_ms")
SPLITS = ("symmetric", "asymmetric")


@dataclass(frozen=True)
class TrialRecord:
    n: int
    p1: float
    p2: float
    c: float
    trial: int
    seed: int
    percolated: bool
    rounds: int
    max_cluster: int
    red_edges: int
    blue_edges: int
    runtime_ms: float = 0.0

    def row(self) -> list:
        return [getattr(self, f) for f in CSV_FIELDS]


def run_trial(n: int, p1: float, p2: float, seed: int, c: float = math.nan,
              trial: int = 0, timing: bool = False) -> TrialRecord:
    start = time.perf_counter()
    g = generate_double_graph(GenParams(n, p1, p2, seed))
    res = run_jigsaw(g)
    elapsed = (time.perf_counter() - start) * 1e3 if timing else 0.0
    return TrialRecord(n, p1, p2, c, trial, int(seed), bool(res.percolated), res.rounds,
                       res.max_cluster, len(g.red), len(g.blue), round(elapsed, 3))


def trial_seed(master: int, c_index: int, trial: int) -> int:
    ss = np.random.SeedSequence(int(master), spawn_key=(int(c_index), int(trial)))
    return int(ss.generate_state(1, np.uint64)[0])


def split_probabilities(n: int, c: float, split: str = "symmetric") -> tuple[float, float, bool]:
    """(p1, p2, warn) with p1 p2 = c / (4 n ln n).

    ``warn`` is set when p2 falls below the connectivity floor (ln n - ln ln n)/n.
    The asymmetric split takes p1 = n^(-1/2).
    """
    if n < 3:
        raise ParameterError("threshold parametrisation needs n >= 3")
    if c < 0:
        raise ParameterError(f"c must be non-negative, got {c}")
    product = c / (4 * n * math.log(n))
    if split == "symmetric":
        p1 = p2 = math.sqrt(product)
    elif split == "asymmetric":
        p1 = n ** -0.5
        p2 = product / p1
    else:
        raise ParameterError(f"unknown split {split!r}; expected one of {SPLITS}")
    if not (0 <= p1 <= 1 and 0 <= p2 <= 1):
        raise ParameterError(f"c={c} gives probabilities outside [0, 1]: ({p1}, {p2})")
    floor = (math.log(n) - math.log(math.log(n))) / n
    return p1, p2, p2 < floor


class Estimate(NamedTuple):
    fraction: float
    ci_low: float
    ci_high: float
    records: list


def wilson_interval(successes: int, trials: int, level: float = 0.95) -> tuple[float, float]:
    ci = binomtest(successes, trials).proportion_ci(confidence_level=level, method="wilson")
    return float(ci.low), float(ci.high)


def _run_task(task) -> TrialRecord:
    return run_trial(*task)


def _execute(tasks: list, workers: int) -> list[TrialRecord]:
    if workers <= 1 or len(tasks) <= 1:
        return [_run_task(t) for t in tasks]
    chunk = max(1, len(tasks) // (4 * workers))
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_run_task, tasks, chunksize=chunk))


def estimate_percolation_probability(n: int, c: float, trials: int, seed: int,
                                     split: str = "symmetric", p1: Optional[float] = None,
                                     p2: Optional[float] = None, workers: int = 1) -> Estimate:
    """Empirical percolation frequency with a Wilson 95% interval.

    Explicit ``p1``/``p2`` override the threshold parametrisation by c.
    """
    if trials < 1:
        raise ParameterError("trials must be at least 1")
    if p1 is None or p2 is None:
        q1, q2, _ = split_probabilities(n, c, split)
        p1 = q1 if p1 is None else p1
        p2 = q2 if p2 is None else p2
    tasks = [(n, p1, p2, trial_seed(seed, 0, t), c, t) for t in range(trials)]
    records = _execute(tasks, workers)
    hits = sum(r.percolated for r in records)
    lo, hi = wilson_interval(hits, trials)
    return Estimate(hits / trials, lo, hi, records)


@dataclass
class SweepConfig:
    n: int
    c_values: Sequence[float]
    trials: int
    seed: int = 0
    split: str = "symmetric"
    out: Optional[str] = None
    fmt: str = "csv"
    workers: int = 1
    timing: bool = False

    def __post_init__(self):
        if self.trials < 1:
            raise ParameterError("trials must be at least 1")
        if self.fmt not in ("csv", "json"):
            raise ParameterError(f"format must be csv or json, got {self.fmt!r}")
        self.c_values = [float(c) for c in self.c_values]
        if len(set(self.c_values)) != len(self.c_values):
            raise ParameterError("c values must be distinct")
        self.splits = [split_probabilities(self.n, c, self.split) for c in self.c_values]

    @property
    def warnings(self) -> list[str]:
        return [f"c={c}: p2={p2:.4g} is below the connectivity floor"
                for c, (_, p2, warn) in zip(self.c_values, self.splits) if warn]


@dataclass(frozen=True)
class SummaryRow:
    n: int
    c: float
    p1: float
    p2: float
    trials: int
    fraction: float
    ci_low: float
    ci_high: float
    mean_rounds: float
    p95_rounds: float
    mean_max_cluster: float
    below_connectivity_floor: bool


SUMMARY_FIELDS = tuple(f.name for f in fields(SummaryRow))


@dataclass
class SweepResult:
    config: SweepConfig
    records: list[TrialRecord]
    summaries: list[SummaryRow] = field(default_factory=list)


def summarize(n: int, c: float, p1: float, p2: float, warn: bool, records: list[TrialRecord]) -> SummaryRow:
    hits = sum(r.percolated for r in records)
    lo, hi = wilson_interval(hits, len(records))
    rounds = np.array([r.rounds for r in records], dtype=float)
    sizes = np.array([r.max_cluster for r in records], dtype=float)
    return SummaryRow(n, c, p1, p2, len(records), hits / len(records), lo, hi,
                      float(rounds.mean()), float(np.percentile(rounds, 95)),
                      float(sizes.mean()), bool(warn))


def run_sweep(config: SweepConfig) -> SweepResult:
    tasks = []
    for ci, (c, (p1, p2, _)) in enumerate(zip(config.c_values, config.splits)):
        for t in range(config.trials):
            tasks.append((config.n, p1, p2, trial_seed(config.seed, ci, t), c, t, config.timing))
    records = _execute(tasks, config.workers)
    index = {c: i for i, c in enumerate(config.c_values)}
    records.sort(key=lambda r: (index[r.c], r.trial))
    summaries = []
    for ci, (c, (p1, p2, warn)) in enumerate(zip(config.c_values, config.splits)):
        chunk = records[ci * config.trials:(ci + 1) * config.trials]
        summaries.append(summarize(config.n, c, p1, p2, warn, chunk))
    result = SweepResult(config, records, summaries)
    if config.out is not None:
        write_records(records, config.out, config.fmt)
        write_summaries(summaries, summary_path(config.out), config.fmt)
    return result


def summary_path(out) -> Path:
    out = Path(out)
    return out.with_name(out.stem + ".summary" + out.suffix)


def _write_table(rows: Iterable[list], header: Sequence[str], dest, fmt: str) -> None:
    """Write to a path, or to an already open text stream."""
    if hasattr(dest, "write"):
        _write_stream(rows, header, dest, fmt)
        return
    with Path(dest).open("w", newline="") as fh:
        _write_stream(rows, header, fh, fmt)


def _write_stream(rows, header, fh, fmt: str) -> None:
    if fmt == "csv":
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)
    else:
        for row in rows:
            fh.write(json.dumps(dict(zip(header, row))) + "\n")


def write_records(records: Sequence[TrialRecord], path, fmt: str = "csv") -> None:
    """CSV with the fixed header, or JSON lines with the same field names."""
    _write_table((r.row() for r in records), CSV_FIELDS, path, fmt)


def write_summaries(rows: Sequence[SummaryRow], path, fmt: str = "csv") -> None:
    _write_table(([getattr(s, f) for f in SUMMARY_FIELDS] for s in rows), SUMMARY_FIELDS, path, fmt)


def read_records(path) -> list[TrialRecord]:
    with open(path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    casts = {"n": int, "trial": int, "seed": int, "rounds": int, "max_cluster": int,
             "red_edges": int, "blue_edges": int, "percolated": lambda s: s == "True"}
    return [TrialRecord(**{k: casts.get(k, float)(v) for k, v in row.items()}) for row in rows]


def monotone_up_to_one_inversion(summaries: Sequence[SummaryRow]) -> bool:
    """Fractions non-decreasing in c, allowing one adjacent dip whose 95% intervals overlap."""
    rows = sorted(summaries, key=lambda s: s.c)
    dips = [(a, b) for a, b in zip(rows, rows[1:]) if b.fraction < a.fraction]
    if not dips:
        return True
    if len(dips) > 1:
        return False
    a, b = dips[0]
    return b.ci_high >= a.ci_low


@dataclass
class BottleneckComparison:
    n: int
    c: float
    trials: int
    root: Optional[float]
    median_max_cluster: float
    median_ratio: Optional[float]  # median max_cluster / root
    ratio_quartiles: Optional[tuple[float, float]]
    k0: int
    fraction_above_k0: float

    @property
    def within_factor_two(self) -> bool:
        return self.median_ratio is not None and 0.5 <= self.median_ratio <= 2.0

    def as_dict(self) -> dict:
        d = asdict(self)
        d["within_factor_two"] = self.within_factor_two
        return d


def bottleneck_compare(n: int, c: float, trials: int, seed: int, workers: int = 1,
                       split: str = "symmetric") -> BottleneckComparison:
    """Largest subcritical cluster against the bottleneck root at N = n p1 p2."""
    if not 0 < c < 1:
        raise ParameterError(f"the bottleneck prediction needs 0 < c < 1, got {c}")
    p1, p2, _ = split_probabilities(n, c, split)
    est = estimate_percolation_probability(n, c, trials, seed, p1=p1, p2=p2, workers=workers)
    sizes = np.array([r.max_cluster for r in est.records], dtype=float)
    report = bottleneck_report(n * p1 * p2, n)
    k0 = math.ceil(2 * math.log(n))
    ratio = quart = None
    if report.found:
        ratios = sizes / report.root
        ratio = float(np.median(ratios))
        quart = (float(np.percentile(ratios, 25)), float(np.percentile(ratios, 75)))
    return BottleneckComparison(n, c, trials, report.root, float(np.median(sizes)), ratio, quart,
                                k0, float(np.mean(sizes > k0)))
