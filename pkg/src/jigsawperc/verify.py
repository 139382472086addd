"""The desk-scale verification suite behind ``jigsawperc verify``."""

from __future__ import annotations

import itertools
import math
from fractions import Fraction
from typing import NamedTuple

from .analysis import bottleneck, distributions, identities
from .enumeration import DEFAULT_MPRIME_CAP, bound_suite, tree_pair_sweep


class CheckRow(NamedTuple):
    name: str
    passed: bool
    detail: str


def _identity_rows(quick: bool) -> list[CheckRow]:
    rows = []
    m_max = 40 if quick else 200
    bad = [(j, m) for j in range(3, 9) for m in range(j, m_max + 1)
           if not identities.partial_sum_identity_check(j, m).holds]
    rows.append(CheckRow("partial-sum identity", not bad, f"j=3..8, m=j..{m_max}; failures {bad[:5]}"))

    closed = {3: Fraction(1, 4), 4: Fraction(1, 60)}
    ok = all(identities.infinite_sum_closed_form(j) == v for j, v in closed.items())
    ok = ok and all(identities.infinite_sum_bound_holds(j) for j in range(3, 31))
    rows.append(CheckRow("infinite-sum closed form", ok, "1/4 at j=3, 1/60 at j=4; e^2 bound for j=3..30"))

    grid = itertools.product(range(-6, 7), range(-6, 7), range(0, 7))
    bad = [g for g in grid if not identities.chu_vandermonde_check(*g).holds]
    rows.append(CheckRow("Chu-Vandermonde", not bad, f"a,b in -6..6, c in 0..6; failures {bad[:5]}"))

    bad = [n for n in range(1, 101) if not identities.stirling_bounds_check(n).holds]
    rows.append(CheckRow("Stirling bounds", not bad, f"n=1..100; failures {bad}"))
    return rows


def _domination_rows() -> list[CheckRow]:
    cells = distributions.binomial_domination_grid()
    bad = [c.params for c in cells if not c.holds]
    rows = [CheckRow("Bi dominates cutoff Poisson", not bad, f"{len(cells)} cells; failures {bad[:5]}")]
    cells = distributions.poisson_sum_grid()
    bad = [c.params for c in cells if not c.holds]
    rows.append(CheckRow("cutoff Poisson sums", not bad, f"{len(cells)} cells; failures {bad[:5]}"))
    return rows


def _bottleneck_rows() -> list[CheckRow]:
    errs = {}
    for n in (10**3, 10**4, 10**6):
        root = bottleneck.bottleneck_root(bottleneck.threshold_N(n), n)
        errs[n] = abs(root - 2 * math.log(n))
    worst = max(errs.values())
    return [CheckRow("bottleneck root at threshold", worst <= 1e-9, f"max |x - 2 ln n| = {worst:.2e}")]


def _bound_rows(tree_cap: int) -> list[CheckRow]:
    reports = bound_suite(tree_cap=tree_cap, mprime_cap=min(tree_cap, DEFAULT_MPRIME_CAP))
    rows = []
    groups = {
        "Cayley bound P_k <= k^(2k-4)": [r for r in reports if r.which == "cayley"],
        "M'(k,l) lemma bound": [r for r in reports if r.which == "lemma_Mprime"],
        "M(k,l,r) theorem bound": [r for r in reports if r.which == "theorem_Mklr"],
    }
    for name, group in groups.items():
        bad = [(r.k, r.l, r.r, r.exact_count) for r in group if not r.bound_satisfied]
        rows.append(CheckRow(name, not bad, f"{len(group)} cells; failures {bad}"))
    group = groups["M(k,l,r) theorem bound"]
    bad = [(r.k, r.l, r.r, r.exact_count, int(r.secondary_bound)) for r in group if not r.secondary_satisfied]
    rows.append(CheckRow("M(k,l,r) partition inequality", not bad,
                         f"{len(group)} cells; failures (k,l,r,count,bound) {bad}"))
    bad = [k for k in range(1, tree_cap + 1) if tree_pair_sweep(k).no_input]
    rows.append(CheckRow("percolating configs admit an input", not bad, f"k=1..{tree_cap}; failures {bad}"))
    return rows


def run_verification(tree_cap: int = 6, quick: bool = False) -> list[CheckRow]:
    return _identity_rows(quick) + _domination_rows() + _bottleneck_rows() + _bound_rows(tree_cap)
