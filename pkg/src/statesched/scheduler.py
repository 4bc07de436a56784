"""System-level scheduling engine.

A :class:`System` is a set of flows sharing a server of constant capacity
``c`` tasks per slot.  This module decides whether the system can keep all
of its promises (schedulability), measures how much capacity each subset of
flows needs (``rho``, ``eta``), and, for the arrivals of the current slot,
computes the baseline set function whose permutohedron holds every
feasible schedule.  Concrete schedules (max-slack, EDF, priority vertices,
fair, weighted excess sharing) are selected from that region.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Sequence

from .cumulative import (
    INF,
    CumVec,
    ExtNat,
    Seq,
    first_violation,
    seq_drop,
    seq_pointwise,
    seq_argmax,
    seq_values,
    sup_ratio,
    tau,
    vsum,
)
from .errors import (
    CausalityError,
    DomainError,
    InconsistentStateError,
    InfeasibleError,
    RepresentationError,
)
from .polymatroid import (
    SetFn,
    centroid,
    mask_of,
    members,
    membership,
    subset_sums,
    vertex,
    violated_subset,
)
from .worstcase import ServiceState

WITNESS_SEARCH_LIMIT = 100_000


@dataclass(frozen=True)
class Flow:
    id: str
    service: ServiceState


@dataclass(frozen=True)
class System:
    """Flows sharing a server that completes up to ``capacity`` tasks per slot."""

    flows: tuple
    capacity: int

    def __post_init__(self):
        object.__setattr__(self, "flows", tuple(self.flows))
        if self.capacity < 0:
            raise DomainError("capacity must be non-negative")
        ids = [f.id for f in self.flows]
        if len(set(ids)) != len(ids):
            raise DomainError("flow ids must be unique")

    @classmethod
    def of(cls, services: Sequence[ServiceState], capacity: int) -> "System":
        return cls(tuple(Flow(str(i), s) for i, s in enumerate(services)), capacity)

    @property
    def n(self) -> int:
        return len(self.flows)

    @property
    def services(self) -> list[ServiceState]:
        return [f.service for f in self.flows]

    @property
    def ids(self) -> list[str]:
        return [f.id for f in self.flows]

    @property
    def backlogs(self) -> list[int]:
        return [f.service.b for f in self.flows]

    @property
    def full(self) -> int:
        return (1 << self.n) - 1

    def index(self, flow_id: str) -> int:
        return self.ids.index(flow_id)

    def with_flow(self, flow: Flow) -> "System":
        return System(self.flows + (flow,), self.capacity)

    def subsystem(self, mask: int) -> "System":
        return System(tuple(f for i, f in enumerate(self.flows) if mask >> i & 1), self.capacity)

    def step(self, arrivals: Sequence[int], departures: Sequence[int]) -> "System":
        """System after one slot with the given arrivals and departures."""
        _check_valid(self, arrivals, departures)
        flows = tuple(
            Flow(f.id, f.service.update(a, d)) for f, a, d in zip(self.flows, arrivals, departures)
        )
        return System(flows, self.capacity)


def _check_valid(sys: System, arrivals, departures) -> None:
    if len(arrivals) != sys.n or len(departures) != sys.n:
        raise DomainError("one arrival and one departure count per flow are required")
    for f, a, d in zip(sys.flows, arrivals, departures):
        if a < 0 or d < 0:
            raise DomainError("arrivals and departures must be non-negative")
        if d > a + f.service.b:
            raise CausalityError(f"flow {f.id}: d = {d} exceeds q = {a + f.service.b}")
    if sum(departures) > sys.capacity:
        raise DomainError(f"total departures {sum(departures)} exceed capacity {sys.capacity}")


# ---------------------------------------------------------------------------
# Schedulability and capacity requirements


@dataclass(frozen=True)
class Verdict:
    """Outcome of the schedulability test.

    On failure ``window`` is a violating window ``(i, j)`` with the summed
    spectral value ``demand`` above ``(j - i) * c``; ``at_tail`` marks a
    failure only visible in the limit of the rows (no finite witness found).
    """

    schedulable: bool
    window: tuple | None = None
    demand: ExtNat | None = None
    at_tail: bool = False

    def __bool__(self) -> bool:
        return self.schedulable

    def to_json(self) -> dict:
        out = {"schedulable": self.schedulable}
        if self.window is not None:
            out["window"] = list(self.window)
            out["demand"] = "inf" if self.demand == INF else self.demand
        if self.at_tail:
            out["at_tail"] = True
        return out


def _row_sum(services, i: int) -> CumVec:
    return vsum(s.spectrum_row(i) for s in services)


def _limit_sum(services) -> CumVec:
    return vsum(s.spectrum_row_limit() for s in services)


def _threshold(services) -> int:
    return max((s.row_threshold for s in services), default=0)


def schedulability(sys: System) -> Verdict:
    """Checks that the summed spectrum fits the capacity on every window."""
    services = sys.services
    if not services:
        return Verdict(True)
    cvec = CumVec.rate(sys.capacity)
    for i in range(_threshold(services)):
        row = _row_sum(services, i)
        k = first_violation(row, cvec)
        if k is not None:
            return Verdict(False, (i, i + k), row[k])
    limit = _limit_sum(services)
    k = first_violation(limit, cvec)
    if k is None:
        return Verdict(True)
    # rows grow toward the limit, so some finite row breaks the same window
    start = _threshold(services)
    for i in range(start, start + WITNESS_SEARCH_LIMIT):
        row = _row_sum(services, i)
        if row[k] > k * sys.capacity:
            return Verdict(False, (i, i + k), row[k])
    return Verdict(False, None, limit[k], at_tail=True)


def is_schedulable(sys: System) -> bool:
    return schedulability(sys).schedulable


def rho(sys: System, mask: int | None = None) -> Fraction | float:
    """Largest per-slot capacity the flows in ``mask`` need over any window."""
    if mask is None:
        mask = sys.full
    services = [s for i, s in enumerate(sys.services) if mask >> i & 1]
    if not services:
        return Fraction(0)
    best = sup_ratio(_limit_sum(services))
    for i in range(_threshold(services)):
        best = max(best, sup_ratio(_row_sum(services, i)))
    return best


def _gain(numer, denom) -> Fraction:
    if numer == INF or denom == INF:
        raise InconsistentStateError("multiplexing gain undefined for unbounded requirements")
    if denom == 0:
        return Fraction(1)
    return Fraction(numer) / Fraction(denom)


def eta(sys: System) -> Fraction:
    """Multiplexing gain: summed standalone needs over the shared need."""
    singles = sum(rho(sys, 1 << i) for i in range(sys.n))
    return _gain(singles, rho(sys))


def eta_partition(sys: System, partition: Sequence[int]) -> Fraction:
    """Gain retained when flows are only multiplexed within the classes."""
    _check_partition(sys.n, partition)
    singles = sum(rho(sys, 1 << i) for i in range(sys.n))
    return _gain(singles, sum(rho(sys, cls) for cls in partition))


def _check_partition(n: int, partition: Sequence[int]) -> None:
    seen = 0
    for cls in partition:
        if cls == 0 or cls & seen:
            raise DomainError("partition classes must be non-empty and disjoint")
        seen |= cls
    if seen != (1 << n) - 1:
        raise DomainError("partition must cover every flow")


# ---------------------------------------------------------------------------
# Per-slot view


@dataclass(frozen=True)
class Baseline:
    """Baseline values and their maximizing indices for every subset of flows."""

    n: int
    capacity: int
    queues: tuple
    values: tuple
    witnesses: tuple

    @cached_property
    def setfn(self) -> SetFn:
        return SetFn(self.n, self.values)

    @cached_property
    def queue_sums(self) -> list:
        return subset_sums(self.queues)

    @property
    def full(self) -> int:
        return (1 << self.n) - 1

    def __call__(self, mask: int) -> int:
        return self.values[mask]

    def mu_range(self) -> tuple[int, int]:
        return self.values[self.full], min(self.capacity, self.queue_sums[self.full])


@dataclass(frozen=True)
class Task:
    flow: int
    index: int
    deadline: ExtNat


class SlotView:
    """Everything the scheduler needs for one slot, computed lazily once."""

    def __init__(self, sys: System, arrivals: Sequence[int]):
        if len(arrivals) != sys.n:
            raise DomainError("one arrival count per flow is required")
        if any(a < 0 for a in arrivals):
            raise DomainError("arrivals must be non-negative")
        self.system = sys
        self.arrivals = tuple(arrivals)
        self.queues = tuple(a + s.b for a, s in zip(arrivals, sys.services))

    @property
    def n(self) -> int:
        return self.system.n

    @property
    def capacity(self) -> int:
        return self.system.capacity

    @property
    def total_queue(self) -> int:
        return sum(self.queues)

    @cached_property
    def cond_rows(self) -> list[tuple[CumVec, CumVec]]:
        return [s.cond_rows(q) for s, q in zip(self.system.services, self.queues)]

    @cached_property
    def p_vectors(self) -> list[CumVec]:
        return [s.p_vector(q) for s, q in zip(self.system.services, self.queues)]

    @property
    def obligations(self) -> list[ExtNat]:
        return [p[1] for p in self.p_vectors]

    def default_mu(self) -> int:
        """Work-conserving total: serve as much as capacity and queues allow."""
        return min(self.capacity, self.total_queue)

    # -- baseline -----------------------------------------------------------
    def _maximands(self) -> list[Seq]:
        """Per subset, the sequence j -> p_{j+1} + lamhat_{1,j+1} - j*c."""
        n, c = self.n, self.capacity
        lam1 = vsum(rows[1] for rows in self.cond_rows)
        base = seq_pointwise(seq_drop(lam1, 1), Seq((0,), c), "sub")
        shifted = [seq_drop(p, 1) for p in self.p_vectors]
        out = [base] * (1 << n)
        for mask in range(1, 1 << n):
            low = mask & -mask
            out[mask] = seq_pointwise(out[mask ^ low], shifted[low.bit_length() - 1], "add")
        return out

    def compute_baseline(self, prune: bool = True) -> Baseline:
        """Baseline values, largest subsets first.

        With ``prune`` the maximizing index of a subset is searched only up
        to the smallest maximizing index among its one-larger supersets,
        which is where it is guaranteed to lie.
        """
        n = self.n
        full = (1 << n) - 1
        seqs = self._maximands()
        values = [0] * (1 << n)
        wit = [0] * (1 << n)
        for mask in sorted(range(1 << n), key=lambda m: -bin(m).count("1")):
            x = seqs[mask]
            bound = None
            if prune and mask != full:
                bound = min(wit[mask | 1 << i] for i in range(n) if not mask >> i & 1)
            if bound is None:
                try:
                    j, v = seq_argmax(x)
                except RepresentationError as exc:
                    raise InconsistentStateError(
                        "baseline maximand is unbounded; the system is not schedulable"
                    ) from exc
            else:
                vals = seq_values(x, bound + 1)
                v = max(vals)
                j = vals.index(v)
            if v == INF:
                raise InconsistentStateError("baseline is infinite; the system is not schedulable")
            values[mask], wit[mask] = int(v), j
        return Baseline(n, self.capacity, self.queues, tuple(values), tuple(wit))

    @cached_property
    def baseline(self) -> Baseline:
        return self.compute_baseline()

    def baseline_mu(self, mu: int) -> SetFn:
        return baseline_mu(self.baseline, mu)

    # -- feasibility --------------------------------------------------------
    def is_valid(self, d: Sequence[int]) -> bool:
        return (
            len(d) == self.n
            and all(0 <= x <= q for x, q in zip(d, self.queues))
            and sum(d) <= self.capacity
        )

    def violated(self, d: Sequence[int]) -> int | None:
        """A subset whose baseline ``d`` undercuts, or None when d is feasible."""
        sums = subset_sums(d)
        for mask in range(1, 1 << self.n):
            if sums[mask] < self.baseline(mask):
                return mask
        return None

    def is_feasible(self, d: Sequence[int]) -> bool:
        return self.is_valid(d) and self.violated(d) is None

    def base_point_below(self, d: Sequence[int]) -> tuple | None:
        """A point of P(beta) dominated by ``d``, or None when none exists.

        Greedy descent: lower each coordinate as far as every subset
        constraint containing it permits.
        """
        beta = self.baseline
        n = self.n
        cur = list(d)
        sums = subset_sums(cur)
        for i in range(n):
            bit = 1 << i
            room = min(sums[m] - beta(m) for m in range(1 << n) if m & bit)
            if room < 0:
                return None
            cut = min(room, cur[i])
            if cut:
                cur[i] -= cut
                for m in range(1 << n):
                    if m & bit:
                        sums[m] -= cut
        if sums[(1 << n) - 1] != beta(beta.full):
            return None
        return tuple(cur)

    def is_feasible_by_dominance(self, d: Sequence[int]) -> bool:
        return self.is_valid(d) and self.base_point_below(d) is not None

    # -- schedules ------------------------------------------------------------
    def check_mu(self, mu: int) -> None:
        lo, hi = self.baseline.mu_range()
        if not lo <= mu <= hi:
            raise InfeasibleError(f"mu = {mu} outside the feasible range [{lo}, {hi}]", (lo, hi))

    def max_slack(self, mu: int | None = None) -> tuple:
        """Max-slack schedule serving ``mu`` tasks in total."""
        if mu is None:
            mu = self.default_mu()
        return _box_fill(list(range(self.n)), self.p_vectors, self.queues, mu)

    def intra_class_max_slack(self, nu: Sequence[int], partition: Sequence[int]) -> tuple:
        """Max-slack inside each class, the class totals ``nu`` being given."""
        _check_partition(self.n, partition)
        if len(nu) != len(partition):
            raise DomainError("one class total per class is required")
        out = [0] * self.n
        for cls, total in zip(partition, nu):
            flows = members(cls)
            part = _box_fill(flows, [self.p_vectors[i] for i in flows], [self.queues[i] for i in flows], total)
            for i, x in zip(flows, part):
                out[i] = x
        return tuple(out)

    def class_violation(self, nu: Sequence[int], partition: Sequence[int]) -> int | None:
        """Violated class subset (bitmask over classes) or None when feasible."""
        _check_partition(self.n, partition)
        mu = sum(nu)
        self.check_mu(mu)
        return violated_subset(baseline_class(self.baseline_mu(mu), partition), nu)

    def class_feasible(self, nu: Sequence[int], partition: Sequence[int]) -> bool:
        try:
            return self.class_violation(nu, partition) is None
        except InfeasibleError:
            return False

    def tasks(self) -> list[Task]:
        """Queued tasks with their deadline offsets in EDF order."""
        out = []
        for i, (p, q) in enumerate(zip(self.p_vectors, self.queues)):
            for h in range(1, q + 1):
                out.append(Task(i, h, tau(p, h)))
        out.sort(key=lambda t: (t.deadline, self.system.flows[t.flow].id, t.index))
        return out

    def edf(self, mu: int | None = None) -> tuple:
        if mu is None:
            mu = self.default_mu()
        counts = [0] * self.n
        for task in self.tasks()[:mu]:
            counts[task.flow] += 1
        return tuple(counts)

    def vertex(self, order: Sequence[int], mu: int | None = None) -> tuple:
        if mu is None:
            mu = self.default_mu()
        self.check_mu(mu)
        return vertex(self.baseline_mu(mu), order)

    def fair(self, mu: int | None = None) -> tuple[tuple, str | None]:
        """Integral schedule near the centroid of the feasible region.

        Returns the schedule and a note when the rounding fell back to max-slack.
        """
        if mu is None:
            mu = self.default_mu()
        self.check_mu(mu)
        chi = self.baseline_mu(mu)
        target = centroid(chi)
        point = round_into(chi, target, self.queues)
        if point is None:
            return self.max_slack(mu), "fair rounding failed; used max-slack"
        return point, None

    def gps_excess(self, weights: Sequence, mu: int | None = None) -> tuple:
        """Serve the max-slack base point, then share the rest by weight."""
        if mu is None:
            mu = self.default_mu()
        self.check_mu(mu)
        if len(weights) != self.n or any(w < 0 for w in weights):
            raise DomainError("one non-negative weight per flow is required")
        beta_all = self.baseline(self.baseline.full)
        base = list(self.max_slack(beta_all))
        room = [q - x for q, x in zip(self.queues, base)]
        extra = share_by_weight(mu - beta_all, weights, room)
        return tuple(x + e for x, e in zip(base, extra))

    def select(self, policy: "Policy", mu: int | None = None) -> tuple[tuple, str | None]:
        if mu is None:
            mu = self.default_mu()
        if policy.name == "max_slack":
            self.check_mu(mu)
            return self.max_slack(mu), None
        if policy.name == "edf":
            self.check_mu(mu)
            return self.edf(mu), None
        if policy.name == "vertex":
            return self.vertex(policy.order_for(self.n), mu), None
        if policy.name == "fair":
            return self.fair(mu)
        if policy.name == "gps":
            return self.gps_excess(policy.weights_for(self.n), mu), None
        raise DomainError(f"unknown policy {policy.name!r}")

    # -- after the slot ---------------------------------------------------------
    def next_capacity_slack(self, d: Sequence[int]) -> ExtNat:
        """min over k >= 1 of k*c minus the updated summed first spectral row."""
        nxt = self.system.step(self.arrivals, d)
        return capacity_slack(nxt)


def capacity_slack(sys: System) -> ExtNat:
    """min over k >= 1 of (k*c - summed lam_{0k}); negative when unschedulable at row 0."""
    if sys.n == 0:
        return INF
    row = _row_sum(sys.services, 0)
    diff = seq_pointwise(Seq((0,), sys.capacity), row, "sub") if row.tail_inc != INF else None
    if diff is None:
        return -INF
    if diff.tail_inc < 0:
        return -INF
    vals = seq_values(diff, len(diff.prefix) + 1)[1:]
    return min(vals)


def _box_fill(flows: Sequence[int], pvecs: Sequence[CumVec], queues: Sequence[int], mu: int) -> tuple:
    """Fill the max-slack box of the given flows up to a total of ``mu``."""
    if mu > sum(queues):
        raise InfeasibleError(f"mu = {mu} exceeds the queued total {sum(queues)}", (0, sum(queues)))
    total = vsum(pvecs)
    j = tau(total, mu + 1)
    if j == INF:
        lo = [p.limit for p in pvecs]
        hi = list(queues)
    else:
        lo = [p[j] for p in pvecs]
        hi = [p[j + 1] for p in pvecs]
    out = [int(x) for x in lo]
    rest = mu - sum(out)
    if rest < 0:
        raise InfeasibleError(f"mu = {mu} is below the box floor {sum(out)}", (sum(out), None))
    for k in range(len(flows)):
        take = min(rest, int(hi[k]) - out[k])
        out[k] += take
        rest -= take
    if rest:
        raise InfeasibleError(f"mu = {mu} does not fit the box", None)
    return tuple(out)


def share_by_weight(total: int, weights: Sequence, room: Sequence[int]) -> list[int]:
    """Integral weighted split of ``total`` capped per flow by ``room``.

    Proportional shares are rounded by largest remainder (ties to the lower
    index); capacity freed by capped flows is re-shared among the others.
    """
    n = len(weights)
    out = [0] * n
    rest = min(total, sum(room))
    while rest > 0:
        open_ = [i for i in range(n) if out[i] < room[i]]
        w = {i: Fraction(weights[i]) for i in open_}
        wsum = sum(w.values())
        if wsum == 0:
            w = {i: Fraction(1) for i in open_}
            wsum = Fraction(len(open_))
        shares = {i: rest * w[i] / wsum for i in open_}
        grant = {i: min(math.floor(shares[i]), room[i] - out[i]) for i in open_}
        left = rest - sum(grant.values())
        order = sorted(open_, key=lambda i: (-(shares[i] - math.floor(shares[i])), i))
        for i in order:
            if left == 0:
                break
            if grant[i] < room[i] - out[i] and w[i] > 0:
                grant[i] += 1
                left -= 1
        given = sum(grant.values())
        if given == 0:
            # only zero-weight flows have room; serve them in index order
            for i in open_:
                take = min(rest, room[i] - out[i])
                out[i] += take
                rest -= take
            break
        for i, x in grant.items():
            out[i] += x
        rest -= given
    return out


def round_into(chi: SetFn, target: Sequence[Fraction], queues: Sequence[int]) -> tuple | None:
    """Integral member of P(chi) close to ``target``.

    Tries the largest-remainder rounding first, then the closest member (L1,
    ties broken lexicographically) within one unit of the rounding box.
    """
    n = chi.n
    total = chi(chi.full)
    floors = [math.floor(x) for x in target]
    rest = total - sum(floors)
    order = sorted(range(n), key=lambda i: (-(target[i] - floors[i]), i))
    guess = list(floors)
    for i in order[:rest]:
        guess[i] += 1
    if membership(chi, guess):
        return tuple(guess)
    ranges = [range(max(0, f - 1), min(q, math.ceil(x) + 1) + 1) for f, x, q in zip(floors, target, queues)]
    best = None
    for cand in itertools.product(*ranges):
        if sum(cand) != total or not membership(chi, cand):
            continue
        key = (sum(abs(c - x) for c, x in zip(cand, target)), cand)
        if best is None or key < best:
            best = key
    return None if best is None else best[1]


# ---------------------------------------------------------------------------
# Set-function views


def baseline_mu(beta: Baseline, mu: int) -> SetFn:
    """max{beta(G), mu - q(complement of G)}: the region of schedules totalling ``mu``."""
    lo, hi = beta.mu_range()
    if not lo <= mu <= hi:
        raise InfeasibleError(f"mu = {mu} outside the feasible range [{lo}, {hi}]", (lo, hi))
    full = beta.full
    qs = beta.queue_sums
    return SetFn.from_callable(beta.n, lambda m: max(beta(m), mu - qs[full ^ m]) if m else 0)


def baseline_class(chi: SetFn, partition: Sequence[int]) -> SetFn:
    """The set function sampled on unions of classes, one element per class."""
    _check_partition(chi.n, partition)

    def value(cmask: int) -> int:
        flows = 0
        for k, cls in enumerate(partition):
            if cmask >> k & 1:
                flows |= cls
        return chi(flows)

    return SetFn.from_callable(len(partition), value)


def alpha(view: SlotView, mask: int) -> ExtNat:
    """max over j of (lamhat_{0,j+1} of the subset - j*c); a cross-check for the baseline."""
    rows = [view.cond_rows[i][0] for i in members(mask)]
    x = seq_pointwise(seq_drop(vsum(rows), 1), Seq((0,), view.capacity), "sub")
    return seq_argmax(x)[1]


# ---------------------------------------------------------------------------
# Policies


@dataclass(frozen=True)
class Policy:
    name: str
    order: tuple | None = None
    weights: tuple | None = None

    def order_for(self, n: int) -> tuple:
        """Priority order over n flows; flows not listed follow in index order."""
        listed = [i for i in (self.order or ()) if i < n]
        if len(set(listed)) != len(listed):
            raise DomainError(f"repeated flow in priority order {self.order}")
        return tuple(listed) + tuple(i for i in range(n) if i not in listed)

    def weights_for(self, n: int) -> tuple:
        """Weights for n flows; flows beyond the given list weigh 1."""
        given = tuple(self.weights or ())[:n]
        return given + (1,) * (n - len(given))

    def __str__(self) -> str:
        if self.name == "vertex" and self.order is not None:
            return "vertex:" + ",".join(map(str, self.order))
        if self.name == "gps" and self.weights is not None:
            return "gps:" + ",".join(map(str, self.weights))
        return self.name


POLICY_NAMES = ("max_slack", "edf", "vertex", "fair", "gps")


def parse_policy(text: str) -> Policy:
    """Parses ``max_slack``, ``edf``, ``fair``, ``vertex[:i,j,..]`` or ``gps[:w1,w2,..]``."""
    name, _, arg = text.partition(":")
    name = name.strip().replace("-", "_")
    if name == "gps_excess":
        name = "gps"
    if name not in POLICY_NAMES:
        raise DomainError(f"unknown policy {text!r}")
    if not arg:
        return Policy(name)
    items = [x.strip() for x in arg.split(",") if x.strip()]
    try:
        if name == "vertex":
            return Policy(name, order=tuple(int(x) for x in items))
        if name == "gps":
            return Policy(name, weights=tuple(Fraction(x) for x in items))
    except ValueError:
        raise DomainError(f"malformed policy argument in {text!r}") from None
    raise DomainError(f"policy {name!r} takes no argument")


# ---------------------------------------------------------------------------
# Functional entry points


def baseline(sys: System, arrivals: Sequence[int], prune: bool = True) -> Baseline:
    return SlotView(sys, arrivals).compute_baseline(prune)


def is_feasible(sys: System, arrivals: Sequence[int], d: Sequence[int]) -> bool:
    return SlotView(sys, arrivals).is_feasible(d)


def max_slack(sys: System, arrivals: Sequence[int], mu: int | None = None) -> tuple:
    return SlotView(sys, arrivals).max_slack(mu)


def intra_class_max_slack(sys: System, arrivals: Sequence[int], nu, partition) -> tuple:
    return SlotView(sys, arrivals).intra_class_max_slack(nu, partition)


def class_feasible(sys: System, arrivals: Sequence[int], nu, partition) -> bool:
    return SlotView(sys, arrivals).class_feasible(nu, partition)


def edf_order(sys: System, arrivals: Sequence[int]) -> list[Task]:
    return SlotView(sys, arrivals).tasks()


def select_schedule(sys: System, arrivals: Sequence[int], mu: int | None, policy) -> tuple:
    if isinstance(policy, str):
        policy = parse_policy(policy)
    return SlotView(sys, arrivals).select(policy, mu)[0]


__all__ = [
    "Flow",
    "System",
    "Verdict",
    "Baseline",
    "Task",
    "SlotView",
    "Policy",
    "schedulability",
    "is_schedulable",
    "rho",
    "eta",
    "eta_partition",
    "baseline",
    "baseline_mu",
    "baseline_class",
    "alpha",
    "is_feasible",
    "max_slack",
    "intra_class_max_slack",
    "class_feasible",
    "edf_order",
    "select_schedule",
    "parse_policy",
    "share_by_weight",
    "round_into",
    "capacity_slack",
    "mask_of",
]
