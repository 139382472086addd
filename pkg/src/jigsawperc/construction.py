"""The supercritical construction algorithm with round instrumentation.

Each round grows a percolating set X from a single vertex.  Step t reveals
the fresh red neighbours Q_t of x_t, moves those with a blue edge back to
x_1..x_t into X (B_t), parks the rest in the frontier R, and moves frontier
vertices with a blue edge to x_t into X (C_t).  C_t is taken against the
frontier as it stood before the step, R_{t-1}.  Vertices joining X in one step
are appended in increasing label order.  A round ends when t exceeds the
size of X (death) or X reaches k1 vertices (success); its set X_T is then
removed from the pool and the next round starts.

Every revealed vertex pair can be logged in a per-colour bitmap over the
C(n, 2) pairs, which turns the query-once property into a checkable count.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import CapacityError, ParameterError
from .graph import BLUE, RED, DoubleGraph, GenParams, generate_double_graph, num_pairs, pair_index
from .jigsaw import run_jigsaw

# bitmap query logging costs C(n, 2) bytes per colour
MAX_TRACKED_N = 50_000

_OUTSIDE, _FREE, _IN_X, _IN_R = -1, 0, 1, 2


@dataclass(frozen=True)
class SupercriticalParams:
    n: float
    p1: float
    p2: float
    epsilon: float
    omega: float
    delta: float
    eps_star: float
    k0: int
    k1: float  # an int, or inf when p1_1 = 0
    rho: int
    p1_1: float
    p1_2: float
    p2_1: float
    p2_2: float
    pool_size: int

    @property
    def mean_degree(self) -> float:
        """n * p1_1, the scale of |Q_t|."""
        return self.n * self.p1_1


def derive_params(n, p1: float, p2: float, epsilon: float) -> SupercriticalParams:
    """Derived constants for a run at (n, p1, p2) with slack epsilon.

    Sizes are rounded conservatively: k0 = ceil(2 ln n), k1 = ceil(1/(omega p1_1)),
    rho = floor(n p1_1 / omega) and pool size n - ceil(n^(1 - delta)).
    """
    if not n >= 16:
        raise ParameterError(f"n must be at least 16 so that ln ln n > 0, got {n}")
    if not 0 < epsilon <= 1:
        raise ParameterError(f"epsilon must lie in (0, 1], got {epsilon}")
    for name, p in (("p1", p1), ("p2", p2)):
        if not 0 <= p <= 1:
            raise ParameterError(f"{name} must lie in [0, 1], got {p}")
    logn = math.log(n)
    omega = math.log(logn)
    delta = epsilon / 20
    p1_1 = (1 - epsilon / 2) * p1
    p1_2 = epsilon / 2 * p1
    k0 = math.ceil(2 * logn)
    k1 = math.ceil(1 / (omega * p1_1)) if p1_1 > 0 else math.inf
    if not k0 < k1:
        raise ParameterError(f"need k0 < k1, got k0={k0}, k1={k1}; n is too small for these probabilities")
    return SupercriticalParams(
        n=n, p1=p1, p2=p2, epsilon=epsilon, omega=omega, delta=delta,
        eps_star=epsilon / 10, k0=k0, k1=k1,
        rho=math.floor(n * p1_1 / omega),
        p1_1=p1_1, p1_2=p1_2, p2_1=p2, p2_2=0.0,
        pool_size=int(n - math.ceil(n ** (1 - delta))),
    )


@dataclass(frozen=True)
class StepRecord:
    t: int
    x: int
    Q: np.ndarray
    B: np.ndarray
    C: np.ndarray
    s: int  # |X_t|
    r_size: int  # |R_t|, counted from the frontier itself


@dataclass
class ConstructionRoundState:
    round: int
    pool_size: int
    X: np.ndarray  # x_1, ..., x_s in the order they joined
    R: np.ndarray  # final frontier R_T, sorted
    steps: list[StepRecord] = field(repr=False)
    k1: float = math.inf

    @property
    def T(self) -> int:
        return len(self.steps)

    @property
    def survived_to_k1(self) -> bool:
        return len(self.X) >= self.k1


class QueryLog:
    """Per-colour bitmap of revealed pairs with duplicate counting."""

    def __init__(self, n: int):
        if n > MAX_TRACKED_N:
            raise CapacityError(f"query tracking is limited to n <= {MAX_TRACKED_N}")
        self.n = n
        self.seen = {RED: np.zeros(num_pairs(n), dtype=bool), BLUE: np.zeros(num_pairs(n), dtype=bool)}
        self.queries = {RED: 0, BLUE: 0}
        self.duplicates = 0

    def record(self, colour: int, u, v) -> None:
        u, v = np.broadcast_arrays(np.asarray(u, dtype=np.int64), np.asarray(v, dtype=np.int64))
        if u.size == 0:
            return
        idx = pair_index(np.minimum(u, v), np.maximum(u, v), self.n).ravel()
        seen = self.seen[colour]
        self.duplicates += int(seen[idx].sum()) + idx.size - np.unique(idx).size
        seen[idx] = True
        self.queries[colour] += idx.size


@dataclass
class ConstructionRun:
    rounds: list[ConstructionRoundState]
    queries: Optional[QueryLog] = None

    @property
    def L(self) -> int:
        return len(self.rounds)

    @property
    def total_steps(self) -> int:
        return sum(r.T for r in self.rounds)


def run_construction(g: DoubleGraph, params: SupercriticalParams, track_queries: bool = True,
                     max_rounds: Optional[int] = None) -> ConstructionRun:
    """Run rounds until the pool V'_l drops below its target size.

    ``g`` is expected to carry red edges at probability p1_1.  ``max_rounds``
    truncates the run (useful for statistics at large n).
    """
    n = g.n
    if int(params.n) != n:
        raise ParameterError(f"params were derived for n={params.n}, graph has n={n}")
    red_ptr, red_idx = g.adjacency(RED)
    blue_ptr, blue_idx = g.adjacency(BLUE)
    log = QueryLog(n) if track_queries else None

    available = np.ones(n + 1, dtype=bool)
    available[0] = False
    remaining = n
    status = np.empty(n + 1, dtype=np.int8)
    blue_touch = np.zeros(n + 1, dtype=bool)
    target = params.pool_size
    rounds = []

    while remaining >= target and remaining > 0:
        if max_rounds is not None and len(rounds) >= max_rounds:
            break
        pool = np.flatnonzero(available)[:target]
        status.fill(_OUTSIDE)
        status[pool] = _FREE
        blue_touch.fill(False)
        order = [int(pool[0])]
        status[order[0]] = _IN_X
        steps = []
        t = 1
        while t <= len(order) and len(order) < params.k1:
            x = order[t - 1]
            reds = red_idx[red_ptr[x]:red_ptr[x + 1]]
            blues = blue_idx[blue_ptr[x]:blue_ptr[x + 1]]
            if log is not None:
                log.record(RED, x, np.flatnonzero(status == _FREE))
                log.record(BLUE, x, np.flatnonzero(status == _IN_R))
            blue_touch[blues] = True
            Q = np.sort(reds[status[reds] == _FREE])
            B = Q[blue_touch[Q]]
            C = np.sort(blues[status[blues] == _IN_R])
            if log is not None:
                xs = np.asarray(order[:t], dtype=np.int64)
                log.record(BLUE, Q[:, None], xs[None, :])
            status[Q] = _IN_R
            joined = np.sort(np.concatenate([B, C]))
            status[joined] = _IN_X
            order.extend(joined.tolist())
            r_size = int(np.count_nonzero(status == _IN_R))
            steps.append(StepRecord(t, x, Q, B, C, len(order), r_size))
            t += 1
        X = np.asarray(order, dtype=np.int64)
        rounds.append(ConstructionRoundState(
            round=len(rounds) + 1, pool_size=len(pool), X=X,
            R=np.flatnonzero(status == _IN_R), steps=steps, k1=params.k1,
        ))
        available[X] = False
        remaining -= len(X)
    return ConstructionRun(rounds, log)


@dataclass(frozen=True)
class EventHReport:
    q_flags: tuple[bool, ...]
    b_flags: tuple[bool, ...]
    c_flags: tuple[bool, ...]
    r_flags: tuple[bool, ...]

    @property
    def step_flags(self) -> tuple[bool, ...]:
        return tuple(all(f) for f in zip(self.q_flags, self.b_flags, self.c_flags, self.r_flags))

    @property
    def holds(self) -> bool:
        return all(self.step_flags)


def check_event_H(state: ConstructionRoundState, params: SupercriticalParams) -> EventHReport:
    """Evaluate the per-step concentration events Q_t, B_t, C_t, R_t and their conjunction."""
    mu = params.mean_degree
    e = params.eps_star
    q, b, c, r = [], [], [], []
    for step in state.steps:
        q.append((1 - e / 2) * mu <= len(step.Q) <= (1 + e / 2) * mu)
        b.append(len(step.B) < e / 4 * mu)
        c.append(len(step.C) < e / 4 * mu)
        r.append((1 - e) * step.t * mu <= step.r_size <= (1 + e) * step.t * mu)
    return EventHReport(tuple(q), tuple(b), tuple(c), tuple(r))


@dataclass
class PipelineReport:
    params: SupercriticalParams
    rounds: int
    reached_k1: bool
    lemma_event: bool  # some round reached k1 with |R_T| >= T n p1_1 / 2
    best_round: Optional[int]
    best_frontier_ratio: Optional[float]  # |R_T| / (T n p1_1 / 2) in that round
    percolated: bool
    warnings: list[str] = field(default_factory=list)


def stage_seed(seed: int, stage: int) -> int:
    """Child seed for one stage of a pipeline run."""
    ss = np.random.SeedSequence(int(seed), spawn_key=(int(stage),))
    return int(ss.generate_state(1, np.uint64)[0])


def check_preconditions(n: int, p1: float, p2: float, epsilon: float) -> list[str]:
    problems = []
    need = (1 + epsilon) / (4 * n * math.log(n))
    if p1 * p2 < need * (1 - 1e-12):
        problems.append(f"p1*p2 = {p1 * p2:.6g} is below (1+eps)/(4 n ln n) = {need:.6g}")
    floor = math.log(n) / n
    if min(p1, p2) < floor:
        problems.append(f"min(p1, p2) = {min(p1, p2):.6g} is below ln n / n = {floor:.6g}")
    return problems


def supercritical_pipeline(n: int, p1: float, p2: float, epsilon: float, seed: int,
                           force: bool = False, track_queries: bool = False,
                           max_rounds: Optional[int] = None) -> PipelineReport:
    """Construction on G(n, p1_1, p2), then the full process on a fresh G(n, p1, p2)."""
    problems = check_preconditions(n, p1, p2, epsilon)
    if problems and not force:
        raise ParameterError("; ".join(problems))
    for msg in problems:
        warnings.warn(msg, stacklevel=2)
    params = derive_params(n, p1, p2, epsilon)

    g1 = generate_double_graph(GenParams(n, params.p1_1, p2, stage_seed(seed, 0)))
    run = run_construction(g1, params, track_queries=track_queries, max_rounds=max_rounds)
    best, best_ratio, lemma = None, None, False
    for state in run.rounds:
        if not state.survived_to_k1:
            continue
        need = state.T * params.mean_degree / 2
        ratio = len(state.R) / need if need > 0 else math.inf
        if best_ratio is None or ratio > best_ratio:
            best, best_ratio = state.round, ratio
        lemma = lemma or len(state.R) >= need

    g2 = generate_double_graph(GenParams(n, p1, p2, stage_seed(seed, 1)))
    return PipelineReport(
        params=params, rounds=run.L, reached_k1=best is not None, lemma_event=lemma,
        best_round=best, best_frontier_ratio=best_ratio,
        percolated=run_jigsaw(g2).percolated, warnings=problems,
    )
