import csv
import io
import json
import math

import numpy as np
import pytest

from jigsawperc.errors import ParameterError
from jigsawperc.harness import (
    CSV_FIELDS,
    SUMMARY_FIELDS,
    SummaryRow,
    SweepConfig,
    bottleneck_compare,
    estimate_percolation_probability,
    monotone_up_to_one_inversion,
    read_records,
    run_sweep,
    run_trial,
    split_probabilities,
    summary_path,
    trial_seed,
    wilson_interval,
    write_records,
)

import shared


def test_trial_complete():
    r = run_trial(10, 1.0, 1.0, seed=0)
    assert r.percolated and r.rounds == 1 and r.max_cluster == 10
    assert r.red_edges == r.blue_edges == 45


def test_trial_empty():
    r = run_trial(10, 0.0, 0.0, seed=0)
    assert not r.percolated and r.rounds == 0 and r.max_cluster == 1


def test_trial_deterministic():
    a = run_trial(1000, 0.03, 0.03, seed=42)
    b = run_trial(1000, 0.03, 0.03, seed=42)
    assert a == b
    assert a.runtime_ms == 0.0
    assert run_trial(200, 0.05, 0.05, seed=1, timing=True).runtime_ms > 0


def test_trial_seed_distinct():
    seeds = {trial_seed(7, ci, t) for ci in range(5) for t in range(200)}
    assert len(seeds) == 1000
    assert trial_seed(7, 1, 2) == trial_seed(7, 1, 2)
    assert all(0 <= s < 2**64 for s in seeds)


def test_split_probabilities():
    n = 16384
    p1, p2, warn = split_probabilities(n, 1.0)
    assert p1 == p2 and p1 * p2 == pytest.approx(1 / (4 * n * math.log(n)))
    assert not warn
    p1, p2, warn = split_probabilities(n, 1.0, "asymmetric")
    assert p1 == pytest.approx(n ** -0.5) and p1 * p2 == pytest.approx(1 / (4 * n * math.log(n)))
    assert warn  # p2 drops under the connectivity floor
    with pytest.raises(ParameterError):
        split_probabilities(n, 1.0, "diagonal")
    with pytest.raises(ParameterError):
        split_probabilities(n, -1.0)


def test_forced_fractions():
    assert estimate_percolation_probability(50, 1.0, 10, seed=0, p1=0.0, p2=0.0).fraction == 0
    est = estimate_percolation_probability(50, 1.0, 10, seed=0, p1=1.0, p2=1.0)
    assert est.fraction == 1 and est.ci_high == pytest.approx(1.0)


def test_wilson_matches_formula():
    k, n, z = 37, 120, 1.959963984540054
    p = k / n
    centre = (p + z * z / (2 * n)) / (1 + z * z / n)
    half = z / (1 + z * z / n) * math.sqrt(p * (1 - p) / n + z * z / (4 * n * n))
    lo, hi = wilson_interval(k, n)
    assert lo == pytest.approx(centre - half, abs=1e-9)
    assert hi == pytest.approx(centre + half, abs=1e-9)


def test_empty_sweep_is_header_only(tmp_path):
    out = tmp_path / "s.csv"
    result = run_sweep(SweepConfig(n=100, c_values=[], trials=3, out=str(out)))
    assert result.records == [] and result.summaries == []
    assert out.read_text() == ",".join(CSV_FIELDS) + "\n"
    assert summary_path(out).read_text() == ",".join(SUMMARY_FIELDS) + "\n"


def test_single_trial_sweep(tmp_path):
    out = tmp_path / "s.csv"
    run_sweep(SweepConfig(n=200, c_values=[2.0], trials=1, seed=3, out=str(out)))
    rows = list(csv.reader(out.open()))
    assert rows[0] == list(CSV_FIELDS) and len(rows) == 2
    summary = list(csv.reader(summary_path(out).open()))
    assert len(summary) == 2
    rec = read_records(out)[0]
    assert rec.c == 2.0 and rec.trial == 0 and rec.seed == trial_seed(3, 0, 0)


def test_json_lines(tmp_path):
    out = tmp_path / "s.json"
    res = run_sweep(SweepConfig(n=200, c_values=[1.0, 3.0], trials=3, seed=1, out=str(out), fmt="json"))
    lines = out.read_text().splitlines()
    assert len(lines) == 6
    objs = [json.loads(line) for line in lines]
    assert all(list(o) == list(CSV_FIELDS) for o in objs)
    assert [o["seed"] for o in objs] == [r.seed for r in res.records]


def test_record_sanity():
    res = run_sweep(SweepConfig(n=300, c_values=[0.5, 8.0], trials=10, seed=9))
    for r in res.records:
        assert r.percolated == (r.max_cluster == r.n)
        assert r.rounds <= r.n - 1


def test_workers_do_not_change_output():
    cfg = dict(n=500, c_values=[0.5, 2.0, 6.0], trials=6, seed=77)
    outs = []
    for w in (1, 2, 3):
        buf = io.StringIO()
        res = run_sweep(SweepConfig(workers=w, **cfg))
        write_records(res.records, buf)
        outs.append((buf.getvalue(), res.summaries))
    assert outs[0] == outs[1] == outs[2]


def test_sweep_config_validation():
    with pytest.raises(ParameterError):
        SweepConfig(n=100, c_values=[1.0, 1.0], trials=1)
    with pytest.raises(ParameterError):
        SweepConfig(n=100, c_values=[1.0], trials=0)
    with pytest.raises(ParameterError):
        SweepConfig(n=100, c_values=[1.0], trials=1, fmt="xml")
    cfg = SweepConfig(n=1000, c_values=[1.0], trials=1, split="asymmetric")
    assert cfg.warnings


def _row(c, frac, lo, hi):
    return SummaryRow(100, c, 0, 0, 100, frac, lo, hi, 0, 0, 0, False)


def test_monotone_helper():
    assert monotone_up_to_one_inversion([_row(1, 0.1, 0, 0.2), _row(2, 0.5, 0.4, 0.6)])
    assert monotone_up_to_one_inversion([_row(1, 0.5, 0.4, 0.6), _row(2, 0.45, 0.35, 0.55)])
    assert not monotone_up_to_one_inversion([_row(1, 0.9, 0.85, 0.95), _row(2, 0.1, 0.05, 0.15)])
    assert not monotone_up_to_one_inversion(
        [_row(1, 0.5, 0.4, 0.6), _row(2, 0.45, 0.35, 0.55), _row(3, 0.4, 0.3, 0.5)])


def test_bottleneck_compare_rejects_supercritical():
    with pytest.raises(ParameterError):
        bottleneck_compare(1000, 1.5, 5, seed=0)


@pytest.mark.slow
def test_bottleneck_ratio_at_half():
    rep = bottleneck_compare(16384, 0.5, 300, seed=5)
    print(rep.as_dict())
    assert rep.root < 2 * math.log(16384)
    assert rep.within_factor_two


@pytest.mark.slow
def test_subcritical_rarely_exceeds_k0():
    rep = bottleneck_compare(16384, 0.25, 300, seed=6)
    print(f"fraction of trials with max_cluster > k0={rep.k0}: {rep.fraction_above_k0:.3f}")
    assert rep.fraction_above_k0 <= 0.05


@pytest.mark.slow
def test_round_count_soft():
    res = shared.threshold_sweep()
    top = [s for s in res.summaries if s.c == 4.0][0]
    print(f"p95 rounds at c=4: {top.p95_rounds} (10 ln n = {10 * math.log(16384):.1f})")
    assert top.p95_rounds <= 10 * math.log(16384)
