"""Seeded generators of test instances shared by several test modules."""

from __future__ import annotations

import itertools
import random

from statesched.cumulative import CumVec
from statesched.dualcurve import DualCurve
from statesched.minplus import SpectralMatrix, to_spectral, CumulativeMatrix
from statesched.scheduler import SlotView, System, is_schedulable
from statesched.worstcase import EnumBounds, TableService, queued_vectors
from statesched.cumulative import dominates


def random_curve(rng: random.Random, rate: int, length: int = 4) -> CumVec:
    """Cumulative vector with increments at most ``rate`` (so x_j <= rate * j)."""
    incs = [rng.randint(0, rate) for _ in range(rng.randint(1, length))]
    tail = rng.choice([0, rate]) if rate else 0
    return CumVec.from_increments(incs, tail)


def random_dual_system(rng: random.Random, max_flows: int = 3, max_capacity: int = 4) -> System:
    """Schedulable dual-curve system with a random (reachable) state."""
    while True:
        c = rng.randint(1, max_capacity)
        n = rng.randint(1, max_flows)
        shares = [0] * n
        for _ in range(c):
            shares[rng.randrange(n)] += 1
        flows = []
        for r in shares:
            v = random_curve(rng, r)
            flows.append(DualCurve(v, v, 0))
        sys = System.of(flows, c)
        if not is_schedulable(sys):
            continue
        for _ in range(rng.randint(0, 4)):
            sys = random_step(rng, sys)
        return sys


def random_step(rng: random.Random, sys: System, max_arrival: int = 3) -> System:
    arrivals = [rng.randint(0, max_arrival) for _ in range(sys.n)]
    view = SlotView(sys, arrivals)
    lo, hi = view.baseline.mu_range()
    d = view.max_slack(rng.randint(lo, hi))
    return sys.step(arrivals, d)


def corpus(size: int = 50, seed: int = 2024) -> list[tuple[System, tuple]]:
    """(system, arrivals) pairs: dual-curve, at most 3 flows, capacity at most 4."""
    rng = random.Random(seed)
    out = []
    for _ in range(size):
        sys = random_dual_system(rng)
        arrivals = tuple(rng.randint(0, 3) for _ in range(sys.n))
        out.append((sys, arrivals))
    return out


def random_spectral(rng: random.Random, g: int, top: int = 4, b: int | None = None) -> SpectralMatrix:
    """Random spectral matrix: the spectral form of a random cumulative matrix."""
    rows = []
    for i in range(g + 1):
        row, acc = [], 0
        for j in range(g + 1):
            if j > i:
                acc += rng.randint(0, top // 2 + 1)
            row.append(min(acc, top) if j > i else 0)
        rows.append(row)
    if b is None:
        b = rng.randint(0, 2)
    return to_spectral(CumulativeMatrix(rows), b)


def random_table(rng: random.Random, bounds: EnumBounds, b: int = 0) -> TableService:
    """Causal-free random table service with psi(q) <= q on the universe."""
    out = {}
    H = bounds.horizon
    for q in queued_vectors(bounds, b):
        vals, acc = [0], 0
        for j in range(1, H + 2):
            acc = min(q[j], acc + rng.randint(0, 2))
            acc = max(acc, vals[-1])
            vals.append(acc)
        psi = CumVec(tuple(vals), 0)
        assert dominates(q, psi)
        out[tuple(q.values(H + 1))] = psi
    return TableService(out, b)


def valid_schedules(view: SlotView, total: int | None = None):
    """Every valid schedule (d <= q, sum d <= c), optionally with a fixed total."""
    ranges = [range(q + 1) for q in view.queues]
    for d in itertools.product(*ranges):
        s = sum(d)
        if s > view.capacity or (total is not None and s != total):
            continue
        yield d


def definitionally_feasible(view: SlotView, d) -> bool:
    """d is feasible iff d >= p and the system updated by d stays schedulable."""
    if any(x < p for x, p in zip(d, view.obligations)):
        return False
    return is_schedulable(view.system.step(view.arrivals, d))
