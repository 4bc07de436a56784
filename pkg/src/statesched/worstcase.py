"""Generic worst-case services and brute-force oracles.

A worst-case service maps each queued arrival vector ``q`` (arrivals shifted
up by the current backlog ``b``) to the minimum departure vector the server
promises.  Every concrete kind subclasses :class:`ServiceState` and supplies
the closed forms it knows: evaluation, the immediate obligation ``p``, the
state update after one slot, and the rows of its spectrum.

The oracles in this module recompute the same quantities by enumerating a
bounded universe of arrival patterns (:class:`EnumBounds`).  They are the
ground truth the closed forms are tested against.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, Mapping

import numpy as np

from .cumulative import (
    INF,
    CumVec,
    ExtNat,
    cap,
    combine,
    dominates,
    ext_from_json,
    ext_to_json,
    minus_const,
    monus,
    seq_value,
    shift_left,
    shift_right,
    tau,
)
from .errors import (
    CausalityError,
    DomainError,
    ImmediateGuaranteeError,
    PreconditionError,
    UnknownInputError,
)

# ---------------------------------------------------------------------------
# Spectra


@dataclass(frozen=True)
class Spectrum:
    """Finite table of spectral values ``lam[i][j]`` for ``0 <= i, j <= g``.

    Entries past the horizon follow the finite-service convention:
    ``lam[i][j] = lam[i][g]`` for ``j >= g`` and ``0`` for ``i >= g``.
    ``exact`` is False when the values come from an enumeration that may
    miss the true maximizer.
    """

    entries: tuple
    exact: bool = True

    @property
    def g(self) -> int:
        return len(self.entries) - 1

    def __getitem__(self, ij) -> ExtNat:
        i, j = ij
        g = self.g
        if i >= j or i >= g:
            return 0
        return self.entries[i][min(j, g)]

    def row(self, i: int) -> CumVec:
        """k -> lam[i][i+k] as a cumulative vector."""
        if i >= self.g:
            return CumVec.zero()
        return CumVec(tuple(self.entries[i][i:]), 0)

    def as_lists(self) -> list:
        return [list(r) for r in self.entries]

    def law_violations(self, b: int) -> list[str]:
        """Checks the four basic properties every spectrum must satisfy."""
        g, out = self.g, []
        lam = self.entries
        for i in range(g + 1):
            for j in range(g + 1):
                v = lam[i][j]
                if i >= j and v != 0:
                    out.append(f"lam[{i}][{j}]={v} on or below the diagonal")
                if j < g and v > lam[i][j + 1]:
                    out.append(f"row {i} decreases at {j}")
                if i < g and v < lam[i + 1][j]:
                    out.append(f"column {j} increases at {i}")
                bound = monus(lam[0][j], b if i > 0 else 0)
                if v > bound:
                    out.append(f"lam[{i}][{j}]={v} exceeds (lam[0][{j}] - b)^+ = {bound}")
        return out


def spectrum_from_rows(rows_fn, g: int, exact: bool = True) -> Spectrum:
    entries = []
    for i in range(g + 1):
        row = rows_fn(i)
        entries.append(tuple(0 if j <= i else row[j - i] for j in range(g + 1)))
    return Spectrum(tuple(entries), exact)


# ---------------------------------------------------------------------------
# Enumeration universe


@dataclass(frozen=True)
class EnumBounds:
    """Finite universe of queued arrival vectors.

    Arrivals ``a_1 .. a_H`` each range over ``0 .. max_arrival`` (plus the
    single value ``burst`` when given, which stands in for an unbounded
    burst).  Past slot ``H`` nothing arrives.
    """

    horizon: int
    max_arrival: int
    burst: int | None = None

    def alphabet(self) -> list[int]:
        vals = list(range(self.max_arrival + 1))
        if self.burst is not None and self.burst not in vals:
            vals.append(self.burst)
        return vals


def queued_array(bounds: EnumBounds, b: int, first: int | None = None) -> np.ndarray:
    """All queued vectors of the universe as rows ``q_0 .. q_H`` (int64).

    ``first`` fixes ``q_1`` (the universe conditioned on the current queue).
    """
    H = bounds.horizon
    alpha = bounds.alphabet()
    if first is not None:
        if first < b:
            return np.zeros((0, H + 1), dtype=np.int64)
        slots = [[first - b]] + [alpha] * (H - 1)
    else:
        slots = [alpha] * H
    arr = np.array(list(itertools.product(*slots)), dtype=np.int64).reshape(-1, H)
    q = np.zeros((arr.shape[0], H + 1), dtype=np.int64)
    q[:, 1:] = b + np.cumsum(arr, axis=1)
    return q


def queued_vectors(bounds: EnumBounds, b: int, first: int | None = None) -> Iterator[CumVec]:
    for row in queued_array(bounds, b, first):
        yield CumVec(tuple(int(v) for v in row), 0)


# ---------------------------------------------------------------------------
# Service states


class ServiceState:
    """Base class for worst-case service states paired with a backlog ``b``."""

    kind: str = "abstract"
    b: int
    deadline_rigid: bool | None = None

    # -- to be supplied by subclasses ------------------------------------
    def _eval(self, q: CumVec) -> CumVec:
        raise NotImplementedError

    def immediate(self, q: int) -> ExtNat:
        """p: tasks that must depart this slot when ``q`` tasks are queued."""
        raise NotImplementedError

    def _update(self, q: int, d: int) -> "ServiceState":
        raise NotImplementedError

    def spectrum_row(self, i: int) -> CumVec:
        """k -> lam_{i, i+k}."""
        raise NotImplementedError

    @property
    def row_threshold(self) -> int:
        """Rows from this index on are non-decreasing in ``i`` toward the limit row."""
        raise NotImplementedError

    def spectrum_row_limit(self) -> CumVec:
        raise NotImplementedError

    def cond_rows(self, q: int) -> tuple[CumVec, CumVec]:
        """Conditional spectral rows ``(j -> lamhat_0j, j -> lamhat_1j)``."""
        raise NotImplementedError

    def to_json(self) -> dict:
        raise NotImplementedError

    # -- shared behaviour ---------------------------------------------------
    def eval(self, q: CumVec) -> CumVec:
        if q[1] < self.b:
            raise DomainError(f"q_1 = {q[1]} is below the backlog b = {self.b}")
        return self._eval(q)

    def update(self, a: int, d: int) -> "ServiceState":
        """State after ``a`` arrivals and ``d`` departures in the current slot."""
        q = a + self.b
        if d > q:
            raise CausalityError(f"d = {d} exceeds q = {q}")
        p = self.immediate(q)
        if d < p:
            raise ImmediateGuaranteeError(f"d = {d} is below the obligation p = {p}")
        return self._update(q, d)

    def p_vector(self, q: int) -> CumVec:
        """j -> min{lamhat_0j, q}: tasks due within j slots in the worst case."""
        return combine(self.cond_rows(q)[0], CumVec.delta(q), "min")

    def spectrum(self, g: int) -> Spectrum:
        return spectrum_from_rows(self.spectrum_row, g)

    def oracle_exact(self, bounds: EnumBounds) -> bool:
        return False

    def with_backlog(self, b: int) -> "ServiceState":
        raise NotImplementedError


def evaluate(s: ServiceState, q: CumVec) -> CumVec:
    return s.eval(q)


def update(s: ServiceState, a: int, d: int) -> ServiceState:
    return s.update(a, d)


@dataclass(frozen=True)
class UniformBacklog(ServiceState):
    """Keeps the backlog at or below ``bbar``: psi(q) = (q - bbar*delta)^+."""

    bbar: int
    b: int = 0
    kind = "uniform_backlog"
    deadline_rigid = False

    def _eval(self, q):
        return minus_const(q, self.bbar)

    def immediate(self, q):
        return monus(q, self.bbar)

    def _update(self, q, d):
        return UniformBacklog(self.bbar, q - d)

    def spectrum_row(self, i):
        return CumVec.eps()

    @property
    def row_threshold(self):
        return 0

    def spectrum_row_limit(self):
        return CumVec.eps()

    def cond_rows(self, q):
        first = monus(q, self.bbar)
        row0 = CumVec((0, first), INF)
        return row0, minus_const(row0, q)

    def to_json(self):
        return {"kind": self.kind, "bbar": self.bbar, "b": self.b}

    def with_backlog(self, b):
        return UniformBacklog(self.bbar, b)


@dataclass(frozen=True)
class UniformDelay(ServiceState):
    """Delays every task by at most ``theta`` slots: psi(q) = R^theta (q - b delta) + r.

    ``r`` describes how the ``b`` tasks already queued are served and must
    satisfy ``R^theta b delta <= r <= b delta``.
    """

    theta: int
    r: CumVec = field(default_factory=CumVec.zero)
    b: int = 0
    kind = "uniform_delay"
    deadline_rigid = True

    def __post_init__(self):
        lo = shift_right(CumVec.delta(self.b), self.theta)
        if not (dominates(self.r, lo) and dominates(CumVec.delta(self.b), self.r)):
            raise DomainError(f"r = {self.r} must lie between R^theta b delta and b delta")

    @classmethod
    def fresh(cls, theta: int, b: int = 0) -> "UniformDelay":
        """The latest-possible schedule for the backlog: r = R^theta b delta."""
        return cls(theta, shift_right(CumVec.delta(b), theta), b)

    def _eval(self, q):
        arrivals = minus_const(q, self.b)
        return combine(shift_right(arrivals, self.theta), self.r, "add")

    def immediate(self, q):
        if self.theta == 0:
            return q
        return self.r[1]

    def _update(self, q, d):
        a = q - self.b
        step = shift_right(CumVec.delta(a), self.theta)
        rdot = shift_left(minus_const(combine(step, self.r, "add"), d))
        return UniformDelay(self.theta, rdot, q - d)

    def spectrum_row(self, i):
        shift = self.b if i > 0 else 0
        head = [0] + [monus(self.r[i + k], shift) for k in range(1, self.theta + 1)]
        return CumVec(tuple(head), INF)

    @property
    def row_threshold(self):
        return 1

    def spectrum_row_limit(self):
        return self.spectrum_row(1)

    def cond_rows(self, q):
        theta = self.theta
        vals = [self.r[j] for j in range(theta + 1)] + [self.r[theta + 1] + (q - self.b)]
        row0 = CumVec(tuple(vals), INF)
        return row0, minus_const(row0, q)

    def to_json(self):
        return {"kind": self.kind, "theta": self.theta, "r": self.r.to_json(), "b": self.b}


def _key_of(q: CumVec, horizon: int) -> tuple:
    if q.tail_inc != 0 or len(q.prefix) > horizon + 1:
        raise UnknownInputError(f"{q} lies outside a table of horizon {horizon}")
    return tuple(q.values(horizon + 1))


@dataclass(frozen=True, eq=False)
class TableService(ServiceState):
    """Service given explicitly on a finite set of queued vectors.

    Keys are the entries ``q_0 .. q_H`` of a queued vector that is constant
    after index ``H``; values are the promised departure vectors.
    """

    entries: Mapping[tuple, CumVec]
    b: int = 0
    kind = "table"
    deadline_rigid = None

    def __post_init__(self):
        entries = dict(self.entries)
        if not entries:
            raise DomainError("empty table")
        lengths = {len(k) for k in entries}
        if len(lengths) != 1 or min(lengths) < 2:
            raise DomainError("table keys must share one horizon >= 1")
        for key, psi in entries.items():
            q = CumVec(tuple(key), 0)
            if q[1] < self.b:
                raise DomainError(f"table key {key} is below the backlog {self.b}")
            if not dominates(q, psi):
                raise DomainError(f"table entry for {key} promises more than q")
        object.__setattr__(self, "entries", entries)
        object.__setattr__(self, "_cond_cache", {})

    @property
    def horizon(self) -> int:
        return len(next(iter(self.entries))) - 1

    @cached_property
    def out_horizon(self) -> int:
        return max(self.horizon, max(len(p.prefix) - 1 for p in self.entries.values()))

    def _eval(self, q):
        key = _key_of(q, self.horizon)
        try:
            return self.entries[key]
        except KeyError:
            raise UnknownInputError(f"no table entry for {list(key)}") from None

    def keys_with_first(self, q: int) -> list[tuple]:
        return [k for k in self.entries if k[1] == q]

    def immediate(self, q):
        keys = self.keys_with_first(q)
        if not keys:
            raise UnknownInputError(f"no table entry with q_1 = {q}")
        return max(self.entries[k][1] for k in keys)

    def _update(self, q, d):
        new_h = max(self.horizon - 1, 1)
        out = {}
        for key in self.keys_with_first(q):
            qv = CumVec(key, 0)
            qdot = (0,) + tuple(qv[j + 1] - d for j in range(1, new_h + 1))
            out[qdot] = shift_left(minus_const(self.entries[key], d))
        return TableService(out, q - d)

    @cached_property
    def _spectrum(self) -> Spectrum:
        return _table_spectrum(self, None)

    def spectrum(self, g):
        if g == self._spectrum.g:
            return self._spectrum
        return spectrum_from_rows(self.spectrum_row, g)

    def spectrum_row(self, i):
        return self._spectrum.row(i)

    @property
    def row_threshold(self):
        return self._spectrum.g

    def spectrum_row_limit(self):
        return CumVec.zero()

    def cond_rows(self, q):
        spec = self._cond_cache.get(q)
        if spec is None:
            if not self.keys_with_first(q):
                raise UnknownInputError(f"no table entry with q_1 = {q}")
            spec = _table_spectrum(self, q)
            self._cond_cache[q] = spec
        return spec.row(0), CumVec(tuple(spec.entries[1]), 0)

    def cond_spectrum(self, q, g=None):
        self.cond_rows(q)
        return self._cond_cache[q]

    def oracle_exact(self, bounds):
        return True

    def to_json(self):
        return {
            "kind": self.kind,
            "b": self.b,
            "entries": [
                {"q_prefix": list(k), "psi": v.to_json()} for k, v in sorted(self.entries.items())
            ],
        }


def _table_spectrum(t: TableService, first: int | None) -> Spectrum:
    g = t.out_horizon
    keys = list(t.entries) if first is None else t.keys_with_first(first)
    if not keys:
        return Spectrum(tuple((0,) * (g + 1) for _ in range(g + 1)))
    qs = np.array([CumVec(k, 0).values(g + 1) for k in keys], dtype=float)
    ps = np.array([t.entries[k].values(g + 1) for k in keys], dtype=float)
    return _spectrum_from_arrays(qs, ps, g, exact=True)


def _spectrum_from_arrays(qs: np.ndarray, ps: np.ndarray, g: int, exact: bool) -> Spectrum:
    """lam[i][j] = max over rows of (ps[:, j] - qs[:, i])^+, with 0 on/below the diagonal."""
    if qs.shape[0] == 0:
        return Spectrum(tuple((0,) * (g + 1) for _ in range(g + 1)), exact)
    diff = ps[:, None, :] - qs[:, :, None]
    with np.errstate(invalid="ignore"):
        lam = np.nanmax(np.where(np.isnan(diff), 0.0, diff), axis=0)
    lam = np.maximum(lam, 0.0)
    lam = np.triu(lam, k=1)
    entries = tuple(
        tuple(INF if v == np.inf else int(v) for v in row) for row in lam[: g + 1, : g + 1]
    )
    return Spectrum(entries, exact)


# ---------------------------------------------------------------------------
# Oracles


def _psi_array(s: ServiceState, qs: np.ndarray, width: int) -> np.ndarray:
    batch = getattr(s, "eval_batch", None)
    if batch is not None:
        return batch(qs, width)
    out = np.empty((qs.shape[0], width), dtype=float)
    for n, row in enumerate(qs):
        psi = s.eval(CumVec(tuple(int(v) for v in row), 0))
        out[n] = psi.values(width)
    return out


def _extend(qs: np.ndarray, width: int) -> np.ndarray:
    if qs.shape[1] >= width:
        return qs[:, :width].astype(float)
    pad = np.repeat(qs[:, -1:], width - qs.shape[1], axis=1)
    return np.concatenate([qs, pad], axis=1).astype(float)


def spectrum_oracle(s: ServiceState, bounds: EnumBounds | None = None) -> Spectrum:
    """lam_ij = max over the universe of (psi_j(q) - q_i)^+, by enumeration."""
    if isinstance(s, TableService):
        return _table_spectrum(s, None)
    g = bounds.horizon
    qs = queued_array(bounds, s.b)
    ps = _psi_array(s, qs, g + 1)
    return _spectrum_from_arrays(_extend(qs, g + 1), ps, g, s.oracle_exact(bounds))


def cond_spectrum_oracle(s: ServiceState, q: int, bounds: EnumBounds | None = None) -> Spectrum:
    """Same as :func:`spectrum_oracle` over queued vectors with ``q_1 = q``."""
    if isinstance(s, TableService):
        return _table_spectrum(s, q)
    g = bounds.horizon
    qs = queued_array(bounds, s.b, first=q)
    ps = _psi_array(s, qs, g + 1)
    return _spectrum_from_arrays(_extend(qs, g + 1), ps, g, s.oracle_exact(bounds))


def immediate_oracle(s: ServiceState, q: int, bounds: EnumBounds) -> ExtNat:
    """p = max over q' with q'_1 = q of psi_1(q')."""
    if isinstance(s, TableService):
        return s.immediate(q)
    qs = queued_array(bounds, s.b, first=q)
    if qs.shape[0] == 0:
        return 0
    ps = _psi_array(s, qs, 2)
    v = ps[:, 1].max()
    return INF if v == np.inf else int(v)


def _domain(s: ServiceState, bounds: EnumBounds | None) -> list[CumVec]:
    if isinstance(s, TableService):
        return [CumVec(k, 0) for k in s.entries]
    return list(queued_vectors(bounds, s.b))


def causal_closure(s: TableService) -> TableService:
    """The smallest causal service dominating ``s`` on its domain.

    psi^C_j(q) = max over 0 < i <= j and over q' agreeing with q up to index
    i of psi_i(q').
    """
    H = s.horizon
    keys = list(s.entries)
    width = s.out_horizon + 2
    out = {}
    for key in keys:
        best = []
        for i in range(1, H + 1):
            best.append(max(s.entries[k][i] for k in keys if k[: i + 1] == key[: i + 1]))
        psi = s.entries[key]
        vals = [0]
        run = 0
        for j in range(1, width):
            cand = best[j - 1] if j <= H else psi[j]
            run = max(run, cand)
            vals.append(run)
        out[key] = CumVec(tuple(vals), psi.tail_inc)
    return TableService(out, s.b)


def is_causal(s: TableService) -> bool:
    """psi_j(q) depends on q_1 .. q_j alone (within the table)."""
    keys = list(s.entries)
    H = s.horizon
    for j in range(1, H + 1):
        seen: dict[tuple, ExtNat] = {}
        for k in keys:
            v = s.entries[k][j]
            if seen.setdefault(k[: j + 1], v) != v:
                return False
    return True


def perf_bounds(s: ServiceState, q: CumVec) -> tuple[ExtNat, ExtNat]:
    """(max backlog, max delay) that the service allows for the input ``q``."""
    psi = s.eval(q)
    return backlog_bound(q, psi), delay_bound(q, psi)


def backlog_bound(q: CumVec, psi: CumVec) -> ExtNat:
    if q.tail_inc != INF and q.tail_inc > psi.tail_inc:
        return INF
    width = max(len(q.prefix), len(psi.prefix)) + 1
    best = 0
    for j in range(width):
        a, b = q[j], psi[j]
        if a == INF:
            if b != INF:
                return INF
            continue
        best = max(best, a - b)
    return best


def delay_bound(q: CumVec, psi: CumVec) -> ExtNat:
    if q.tail_inc == INF:
        if psi.tail_inc != INF:
            return INF
        h_max = max(v for v in q.prefix + psi.prefix) + 1
    elif q.tail_inc == 0:
        h_max = q.limit
    else:
        if psi.tail_inc < q.tail_inc:
            return INF
        h_max = max(q.prefix[-1], psi.prefix[-1]) + q.tail_inc + 1
    best = 0
    for h in range(1, int(h_max) + 1):
        tp, tq = tau(psi, h), tau(q, h)
        if tq == INF:
            break
        if tp == INF:
            return INF
        best = max(best, tp - tq)
    return best


def _cap_key(v: CumVec, h: int):
    c = cap(v, h)
    return (c.prefix, c.tail_inc)


def is_deadline_rigid_oracle(s: ServiceState, bounds: EnumBounds | None = None) -> bool:
    """Checks: min{q, h} = min{q', h} implies min{psi(q), h} = min{psi(q'), h}."""
    qs = _domain(s, bounds)
    psis = [s.eval(q) for q in qs]
    h_max = max(int(q.limit) for q in qs) + 1
    for h in range(1, h_max + 1):
        seen: dict = {}
        for q, psi in zip(qs, psis):
            key = _cap_key(q, h)
            val = _cap_key(psi, h)
            if seen.setdefault(key, val) != val:
                return False
    return True


def is_monotone_oracle(s: ServiceState, bounds: EnumBounds | None = None) -> bool:
    """Checks q <= q' implies psi(q) <= psi(q') over all pairs of the universe."""
    qs = _domain(s, bounds)
    psis = [s.eval(q) for q in qs]
    for q, pq in zip(qs, psis):
        for q2, pq2 in zip(qs, psis):
            if dominates(q2, q) and not dominates(pq2, pq):
                return False
    return True


def compose_tandem_oracle(
    second: ServiceState, first: ServiceState, bounds: EnumBounds, check: bool = True
) -> TableService:
    """Tabulates the service of two servers in tandem.

    The first server holds ``first.b`` tasks, the second ``second.b``; the
    combined service is psi(q) = psi_2(psi_1(q - b_2 delta) + b_2 delta).
    Both services must be monotone.
    """
    if check:
        for name, svc in (("first", first), ("second", second)):
            if not is_monotone_oracle(svc, bounds):
                raise PreconditionError(f"{name} service is not monotone")
    b2 = second.b
    out = {}
    for q in queued_vectors(bounds, first.b + b2):
        inner = first.eval(minus_const(q, b2))
        out[tuple(q.values(bounds.horizon + 1))] = second.eval(combine(inner, CumVec.delta(b2), "add"))
    return TableService(out, first.b + b2)


def tabulate(s: ServiceState, bounds: EnumBounds) -> TableService:
    """Table service equal to ``s`` on the enumeration universe."""
    out = {}
    for q in queued_vectors(bounds, s.b):
        out[tuple(q.values(bounds.horizon + 1))] = s.eval(q)
    return TableService(out, s.b)


def single_task_table(delay: int, bounds: EnumBounds) -> TableService:
    """Service for a flow that only ever carries one task, due ``delay`` slots late.

    psi(R^i delta) = R^{i+delay} delta and psi(q) = 0 for every other q.
    """
    out = {}
    for q in queued_vectors(bounds, 0):
        key = tuple(q.values(bounds.horizon + 1))
        if q.limit == 1:
            first = key.index(1)
            out[key] = shift_right(CumVec.delta(), first - 1 + delay)
        else:
            out[key] = CumVec.zero()
    return TableService(out, 0)


def table_from_json(obj: Mapping) -> TableService:
    entries = {}
    for item in obj["entries"]:
        key = tuple(ext_from_json(v) for v in item["q_prefix"])
        entries[key] = CumVec.from_json(item["psi"])
    return TableService(entries, int(obj.get("b", 0)))


def check_feasible_on(s: ServiceState, qs: Iterable[CumVec]) -> bool:
    """psi(q) <= q for every q given."""
    return all(dominates(q, s.eval(q)) for q in qs)


__all__ = [
    "EnumBounds",
    "Spectrum",
    "ServiceState",
    "UniformBacklog",
    "UniformDelay",
    "TableService",
    "evaluate",
    "update",
    "spectrum_oracle",
    "cond_spectrum_oracle",
    "immediate_oracle",
    "causal_closure",
    "is_causal",
    "perf_bounds",
    "is_deadline_rigid_oracle",
    "is_monotone_oracle",
    "compose_tandem_oracle",
    "tabulate",
    "single_task_table",
    "queued_vectors",
    "queued_array",
    "seq_value",
    "ext_to_json",
]
