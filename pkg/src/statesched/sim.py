"""Slot-by-slot simulator with admission control and an online auditor.

Each slot runs the same cycle: process admission requests, draw arrivals,
select a schedule with the configured policy, check it, update every flow's
service state and record the outcome.  The auditor checks causality,
capacity, the per-flow obligation ``d >= p``, feasibility, schedulability of
the updated system, deadlines, and that every flow has received at least
what the service it was admitted with promised.

Trace CSV columns, in order::

    t, flow, a, d, b, p, deadline, mu, beta_omega, schedulable, slack

``b`` is the backlog after the slot, ``p`` the obligation of the slot,
``deadline`` the earliest absolute deadline among the flow's queued tasks
(empty when none is queued), ``slack`` the smallest spare capacity
``k*c - sum lam_0k`` of the updated system.
"""

from __future__ import annotations

import csv
import io
import json
import random
from collections import deque
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Mapping, Sequence

import numpy as np

from .cumulative import INF, CumVec, tau
from .dualcurve import DualCurve
from .errors import DomainError, InfeasibleError, PreconditionError, UnknownInputError
from .minplus import MinPlusService
from .scheduler import (
    Flow,
    Policy,
    SlotView,
    System,
    Verdict,
    capacity_slack,
    parse_policy,
    schedulability,
)
from .serialization import service_from_json
from .worstcase import ServiceState

TRACE_COLUMNS = ("t", "flow", "a", "d", "b", "p", "deadline", "mu", "beta_omega", "schedulable", "slack")

VIOLATION_KINDS = (
    "causality",
    "capacity",
    "obligation",
    "infeasible",
    "schedulability",
    "dominance",
    "deadline_tightened",
    "deadline_moved",
)


# ---------------------------------------------------------------------------
# Traffic


@dataclass
class ScriptTraffic:
    """Arrival counts listed slot by slot; nothing arrives after the list."""

    counts: Sequence[int]

    def draw(self, t: int) -> int:
        return int(self.counts[t]) if t < len(self.counts) else 0


@dataclass
class PeriodicTraffic:
    """``count`` tasks every ``period`` slots starting at ``offset``."""

    period: int
    count: int = 1
    offset: int = 0
    limit: int | None = None

    def draw(self, t: int) -> int:
        if t < self.offset or (t - self.offset) % self.period:
            return 0
        if self.limit is not None and (t - self.offset) // self.period >= self.limit:
            return 0
        return self.count


@dataclass
class RandomTraffic:
    """Seeded bursts: with probability ``prob`` a uniform draw from 1..max_burst."""

    max_burst: int
    prob: float = 0.5
    seed: str = "0"
    _rng: random.Random = field(init=False, repr=False)

    def __post_init__(self):
        self._rng = random.Random(self.seed)

    def draw(self, t: int) -> int:
        if self._rng.random() >= self.prob:
            return 0
        return self._rng.randint(1, self.max_burst)


def traffic_from_json(obj: Mapping[str, Any] | None, seed: str) -> Any:
    if obj is None:
        return ScriptTraffic(())
    kind = obj.get("type")
    if kind == "script":
        return ScriptTraffic([int(x) for x in obj["counts"]])
    if kind == "periodic":
        limit = obj.get("limit")
        return PeriodicTraffic(int(obj["period"]), int(obj.get("count", 1)), int(obj.get("offset", 0)),
                               None if limit is None else int(limit))
    if kind == "random":
        return RandomTraffic(int(obj["max_burst"]), float(obj.get("prob", 0.5)), seed)
    raise DomainError(f"unknown traffic type {kind!r}")


# ---------------------------------------------------------------------------
# Scenario


@dataclass
class FlowSpec:
    id: str
    service: ServiceState
    traffic: Any
    admit_at: int = 0


@dataclass
class ScenarioConfig:
    capacity: int
    horizon: int
    flows: list
    policy: str = "max_slack"
    seed: int = 0
    trace_path: str | None = None
    metrics_path: str | None = None

    @classmethod
    def from_json(cls, obj: Mapping[str, Any], seed: int | None = None) -> "ScenarioConfig":
        try:
            seed = int(obj.get("seed", 0)) if seed is None else seed
            flows = []
            for i, f in enumerate(obj["flows"]):
                fid = str(f.get("id", i))
                flows.append(FlowSpec(fid, service_from_json(f["service"]),
                                      traffic_from_json(f.get("traffic"), f"{seed}:{fid}"),
                                      int(f.get("admit_at", 0))))
            for ev in obj.get("admissions", ()):
                f = ev["flow"]
                fid = str(f["id"])
                flows.append(FlowSpec(fid, service_from_json(f["service"]),
                                      traffic_from_json(f.get("traffic"), f"{seed}:{fid}"),
                                      int(ev["slot"])))
            cfg = cls(
                capacity=int(obj["capacity"]),
                horizon=int(obj.get("horizon", 100)),
                flows=flows,
                policy=str(obj.get("policy", "max_slack")),
                seed=seed,
                trace_path=obj.get("trace"),
                metrics_path=obj.get("metrics"),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise DomainError(f"malformed scenario: {exc}") from exc
        cfg.validate()
        return cfg

    def validate(self) -> None:
        ids = [f.id for f in self.flows]
        if len(set(ids)) != len(ids):
            raise DomainError("flow ids must be unique")
        parse_policy(self.policy)
        if self.capacity < 0 or self.horizon < 0:
            raise DomainError("capacity and horizon must be non-negative")


def admit(sys: System, flow: Flow) -> tuple[bool, Verdict]:
    """Accepts the flow when the system stays schedulable with it included."""
    verdict = schedulability(sys.with_flow(flow))
    return verdict.schedulable, verdict


# ---------------------------------------------------------------------------
# Auditing


class _Promise:
    """Service a flow was admitted with, checked against realized departures."""

    def __init__(self, service: ServiceState):
        self.service = service
        self.queued = [0]
        self.total = service.b
        self.departed = [0]
        self.checkable = True

    def record(self, a: int, d: int) -> None:
        self.total += a
        self.queued.append(self.total)
        self.departed.append(self.departed[-1] + d)

    def promised(self) -> int | None:
        """psi_j of the admitted service on the arrivals seen so far, j = slots elapsed."""
        s, qs = self.service, self.queued
        j = len(qs) - 1
        if isinstance(s, DualCurve):
            q = np.asarray(qs[1:], dtype=float)
            v = np.asarray(s.v.values(j), dtype=float)[::-1]
            return _as_count(min(s.u[j], float((q + v).min())))
        if isinstance(s, MinPlusService):
            M = s.matrix
            return _as_count(min(qs[i] + M[i, j] for i in range(min(j, M.g) + 1)))
        try:
            return _as_count(s.eval(CumVec(tuple(qs), 0))[j])
        except UnknownInputError:
            self.checkable = False
            return None

    def holds(self) -> bool:
        want = self.promised() if self.checkable else None
        return want is None or self.departed[-1] >= want


def _as_count(v):
    return INF if v == INF else int(v)


@dataclass
class SimResult:
    trace: list
    metrics: dict
    system: System

    def trace_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(TRACE_COLUMNS)
        for row in self.trace:
            w.writerow([_cell(row[c]) for c in TRACE_COLUMNS])
        return buf.getvalue()

    def metrics_json(self) -> str:
        return json.dumps(self.metrics, indent=2, sort_keys=True) + "\n"

    def write(self, trace_path, metrics_path) -> None:
        Path(trace_path).write_text(self.trace_csv())
        Path(metrics_path).write_text(self.metrics_json())

    @property
    def violations(self) -> int:
        return sum(self.metrics["violations"].values())


def _cell(v):
    if v is None:
        return ""
    if v == INF:
        return "inf"
    if isinstance(v, bool):
        return int(v)
    return v


def _json_num(v):
    return "inf" if v == INF else v


def run(config: ScenarioConfig, policy: str | Policy | None = None, strict: bool = True) -> SimResult:
    """Runs the scenario for ``config.horizon`` slots.

    With ``strict`` an infeasible policy output aborts the run with
    :class:`InfeasibleError`; otherwise it is only counted.
    """
    pol = policy if isinstance(policy, Policy) else parse_policy(policy or config.policy)
    pending = sorted((f for f in config.flows if f.admit_at > 0), key=lambda f: f.admit_at)
    initial = [f for f in config.flows if f.admit_at <= 0]
    sys = System(tuple(Flow(f.id, f.service) for f in initial), config.capacity)
    verdict = schedulability(sys)
    if not verdict:
        raise PreconditionError(f"initial system is not schedulable: {verdict.to_json()}")

    traffic = {f.id: f.traffic for f in config.flows}
    promises = {f.id: _Promise(f.service) for f in initial}
    queues: dict[str, deque] = {f.id: deque([None] * f.service.b) for f in initial}
    rigid = {f.id: f.service.deadline_rigid is True for f in initial}

    violations = dict.fromkeys(VIOLATION_KINDS, 0)
    trace, admissions, slacks = [], [], []
    max_backlog, max_flow_backlog = 0, {f.id: 0 for f in initial}
    max_delay, misses, fallbacks = 0, 0, 0

    for t in range(config.horizon):
        while pending and pending[0].admit_at <= t:
            spec = pending.pop(0)
            flow = Flow(spec.id, spec.service)
            ok, why = admit(sys, flow)
            admissions.append({"slot": t, "flow": spec.id, "accepted": ok, **({} if ok else why.to_json())})
            if ok:
                sys = sys.with_flow(flow)
                promises[spec.id] = _Promise(spec.service)
                queues[spec.id] = deque([None] * spec.service.b)
                rigid[spec.id] = spec.service.deadline_rigid is True
                max_flow_backlog[spec.id] = 0

        ids = sys.ids
        arrivals = [traffic[i].draw(t) for i in ids]
        view = SlotView(sys, arrivals)
        mu = view.default_mu()
        beta_all = view.baseline(view.baseline.full) if sys.n else 0
        d, note = view.select(pol, mu) if sys.n else ((), None)
        if note:
            fallbacks += 1

        # audit the decision before applying it
        for fid, x, q, p in zip(ids, d, view.queues, view.obligations):
            if x > q:
                violations["causality"] += 1
            if x < p:
                violations["obligation"] += 1
        if sum(d) > sys.capacity:
            violations["capacity"] += 1
        bad = view.violated(d) if sys.n else None
        if bad is not None:
            violations["infeasible"] += 1
            if strict:
                raise InfeasibleError(f"slot {t}: policy {pol} chose infeasible schedule {d}", (t, bad))

        # deadlines of the queued tasks under this slot's obligations
        earliest = {}
        for k, fid in enumerate(ids):
            queue = queues[fid]
            queue.extend([None] * arrivals[k])
            pvec = view.p_vectors[k]
            first = None
            for h, task in enumerate(queue, start=1):
                due = t + tau(pvec, h)
                if task is None:
                    queue[h - 1] = task = [t, due]
                elif due != task[1]:
                    if due < task[1]:
                        violations["deadline_tightened"] += 1
                    elif rigid[fid]:
                        violations["deadline_moved"] += 1
                    task[1] = due
                first = due if first is None else min(first, due)
            earliest[fid] = first

        sys = sys.step(arrivals, d)
        verdict = schedulability(sys)
        if not verdict:
            violations["schedulability"] += 1
        slack = capacity_slack(sys)
        slacks.append(_json_num(slack))

        total_b = 0
        for k, fid in enumerate(ids):
            queue = queues[fid]
            for _ in range(d[k]):
                arrived, due = queue.popleft()
                max_delay = max(max_delay, t - arrived)
                if t > due:
                    misses += 1
            for task in queue:
                if task[1] == t:  # due now, still queued
                    misses += 1
            promise = promises[fid]
            promise.record(arrivals[k], d[k])
            if not promise.holds():
                violations["dominance"] += 1
            b = sys.flows[k].service.b
            total_b += b
            max_flow_backlog[fid] = max(max_flow_backlog[fid], b)
            trace.append({
                "t": t, "flow": fid, "a": arrivals[k], "d": d[k], "b": b,
                "p": view.obligations[k], "deadline": earliest[fid], "mu": mu,
                "beta_omega": beta_all, "schedulable": verdict.schedulable, "slack": slack,
            })
        max_backlog = max(max_backlog, total_b)

    metrics = {
        "slots": config.horizon,
        "policy": str(pol),
        "seed": config.seed,
        "capacity": config.capacity,
        "max_backlog": max_backlog,
        "max_backlog_per_flow": max_flow_backlog,
        "max_delay": max_delay,
        "deadline_misses": misses,
        "fair_fallbacks": fallbacks,
        "violations": violations,
        "admissions": admissions,
        "slack": slacks,
        "dominance_unchecked": sorted(fid for fid, p in promises.items() if not p.checkable),
    }
    return SimResult(trace, metrics, sys)


def tandem_run(first: ServiceState, second: ServiceState, arrivals: Sequence[int],
               rng: random.Random | None = None) -> list[int]:
    """Cumulative departures of two servers in series fed by ``arrivals``.

    Tasks leaving the first server join the second in the same slot.  Each
    server serves at least its obligation and, when ``rng`` is given, a
    random extra amount up to its queue; otherwise exactly the obligation.
    Returns the cumulative departures of the second server, index 0 first.
    """
    out = [0]
    for a in arrivals:
        q1 = first.b + a
        d1 = _pick(first.immediate(q1), q1, rng)
        first = first.update(a, d1)
        q2 = second.b + d1
        d2 = _pick(second.immediate(q2), q2, rng)
        second = second.update(d1, d2)
        out.append(out[-1] + d2)
    return out


def _pick(p, q: int, rng) -> int:
    p = int(min(p, q))
    return p if rng is None else rng.randint(p, q)


__all__ = [
    "ScriptTraffic",
    "PeriodicTraffic",
    "RandomTraffic",
    "FlowSpec",
    "ScenarioConfig",
    "SimResult",
    "TRACE_COLUMNS",
    "admit",
    "run",
    "tandem_run",
    "traffic_from_json",
]
