"""Acceptance criteria, one test each; every test logs a PASS/FAIL line."""

import itertools
import random
import time
from fractions import Fraction

import pytest

from acceptance_log import criterion
from corpus import corpus, random_curve, random_dual_system, random_spectral, random_table, valid_schedules
from statesched import dualcurve, minplus
from statesched.cumulative import CumVec, dominates
from statesched.dualcurve import DualCurve
from statesched.minplus import MinPlusService, spectral_hull, step_matrix
from statesched.polymatroid import (
    is_supermodular_exhaustive,
    membership,
    random_supermodular,
    subset_sums,
    vertex,
)
from statesched.scheduler import SlotView, System, baseline_class, eta, eta_partition, is_schedulable, rho
from statesched.sim import FlowSpec, RandomTraffic, ScenarioConfig, run, tandem_run
from statesched.worstcase import (
    EnumBounds,
    compose_tandem_oracle,
    queued_vectors,
    single_task_table,
    spectrum_oracle,
    tabulate,
)

CORPUS = corpus()


def single_task_system(thetas, capacity):
    return System.of([MinPlusService.from_spectral(step_matrix(t, 4)) for t in thetas], capacity)


def set_partitions(items):
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in set_partitions(rest):
        for k in range(len(part)):
            yield part[:k] + [[first] + part[k]] + part[k + 1:]
        yield [[first]] + part


def as_masks(partition):
    return [sum(1 << i for i in cls) for cls in partition]


def updated_row0(sys, a, d, width=12):
    services = sys.step(a, d).services
    return [sum(s.spectrum_row(0)[j] for s in services) for j in range(width)]


def test_criterion_1_staggered_single_tasks():
    with criterion(1, "single-task flows with delays 0,1,2: rho 1,1/2,1/3; rho total 1; eta 11/6"):
        start = time.perf_counter()
        sys = single_task_system((0, 1, 2), 1)
        assert [rho(sys, 1 << i) for i in range(3)] == [Fraction(1), Fraction(1, 2), Fraction(1, 3)]
        assert rho(sys) == 1
        assert eta(sys) == Fraction(11, 6)
        assert time.perf_counter() - start < 1


def test_criterion_2_partition_keeps_gain():
    with criterion(2, "delays 0,1,1 on c=2: eta 4/3 and partitioned eta 4/3"):
        sys = single_task_system((0, 1, 1), 2)
        assert eta(sys) == Fraction(4, 3)
        assert eta_partition(sys, [0b011, 0b100]) == Fraction(4, 3)


def test_criterion_3_spectrum_identity():
    with criterion(3, "enumerated spectrum of 200 random spectral matrices equals the matrix"):
        rng = random.Random(3)
        for k in range(200):
            g = 1 + k % 8
            S = random_spectral(rng, g)
            svc = MinPlusService.from_spectral(S)
            bounds = EnumBounds(g, 1, burst=max(S.rows[0]) + 1)
            assert svc.oracle_exact(bounds)
            assert spectrum_oracle(svc, bounds).entries == S.rows


def test_criterion_4_feasible_region():
    with criterion(4, "integral scan of the feasible region equals permutohedron membership on the corpus"):
        start = time.perf_counter()
        assert len(CORPUS) == 50
        for sys, a in CORPUS:
            assert sys.n <= 3 and sys.capacity <= 4
            view = SlotView(sys, a)
            beta = view.baseline
            lo, hi = beta.mu_range()
            for mu in range(lo, hi + 1):
                chi = view.baseline_mu(mu)
                for d in valid_schedules(view, mu):
                    sums = subset_sums(d)
                    scan = all(sums[m] >= beta(m) for m in range(1 << sys.n))
                    assert scan == membership(chi, d), (sys, a, mu, d)
                    assert scan == view.is_feasible_by_dominance(d)
        assert time.perf_counter() - start < 60


def test_criterion_5_max_slack_optimality():
    with criterion(5, "max-slack schedule minimizes every future reserved-capacity sum on the corpus"):
        for sys, a in CORPUS:
            view = SlotView(sys, a)
            lo, hi = view.baseline.mu_range()
            for mu in range(lo, hi + 1):
                e = view.max_slack(mu)
                assert view.is_feasible(e)
                ours = updated_row0(sys, a, e)
                for d in valid_schedules(view, mu):
                    if any(x < p for x, p in zip(d, view.obligations)):
                        continue
                    theirs = updated_row0(sys, a, d)
                    assert all(x <= y for x, y in zip(ours, theirs)), (sys, a, mu, d)


def test_criterion_6_perpetuation_soak():
    with criterion(6, "100 systems x 200 slots x 5 policies: no audit violations, no deadline misses"):
        start = time.perf_counter()
        rng = random.Random(6)
        failures = []
        for k in range(100):
            sys = random_dual_system(rng)
            weights = ",".join(str(rng.randint(1, 3)) for _ in range(sys.n))
            order = list(range(sys.n))
            rng.shuffle(order)
            policies = ["max_slack", "edf", "vertex:" + ",".join(map(str, order)), "fair", "gps:" + weights]
            for policy in policies:
                flows = [FlowSpec(str(i), s, RandomTraffic(3, 0.5, f"{k}:{i}")) for i, s in enumerate(sys.services)]
                result = run(ScenarioConfig(sys.capacity, 200, flows, policy, seed=k))
                if result.violations or result.metrics["deadline_misses"]:
                    failures.append((k, policy, result.metrics["violations"], result.metrics["deadline_misses"]))
        assert failures == []
        assert time.perf_counter() - start < 300


def test_criterion_7_supermodularity():
    with criterion(7, "baseline functions supermodular with bounds and nested witnesses; vertices lie in P"):
        for sys, a in CORPUS:
            view = SlotView(sys, a)
            beta = view.baseline
            n = sys.n
            assert is_supermodular_exhaustive(beta.setfn)
            qs = subset_sums(view.queues)
            assert beta(beta.full) <= sys.capacity
            for g in range(1 << n):
                for h in range(1 << n):
                    if g & h == 0:
                        assert beta(g | h) - beta(h) <= qs[g]
                    if g & h == h:
                        assert beta.witnesses[h] <= beta.witnesses[g]
            lo, hi = beta.mu_range()
            for mu in range(lo, hi + 1):
                chi = view.baseline_mu(mu)
                assert is_supermodular_exhaustive(chi) and chi(chi.full) == mu
                for part in set_partitions(list(range(n))):
                    assert is_supermodular_exhaustive(baseline_class(chi, as_masks(part)))
        rng = random.Random(7)
        for k in range(500):
            n = 1 + k % 6
            chi = random_supermodular(n, rng)
            orders = list(itertools.permutations(range(n))) if n <= 4 else [rng.sample(range(n), n) for _ in range(24)]
            for order in orders:
                v = vertex(chi, order)
                sums = subset_sums(v)
                assert sums[chi.full] == chi(chi.full)
                assert all(sums[m] >= chi(m) for m in range(1 << n))


def _brute_dual(dc, q, width):
    u, v, x = dc.u.values(width), dc.v.values(width), q.values(width)
    return [min([u[j]] + [x[i] + v[j - i] for i in range(1, j + 1)]) for j in range(width)]


def test_criterion_8_algebra_equivalences():
    with criterion(8, "dual curve, matrix and table forms agree; composition matches tandem servers"):
        rng = random.Random(8)
        for k in range(30):
            H, A = 2 + k % 5, 1 + k % 3
            dc = DualCurve(random_curve(rng, 2), random_curve(rng, 2), rng.randint(0, 2))
            bounds = EnumBounds(H, A)
            M = dualcurve.to_matrix(dc, H + 1)
            table = tabulate(dc, bounds)
            for q in queued_vectors(bounds, dc.b):
                want = _brute_dual(dc, q, H + 2)
                assert dc.eval(q).values(H + 2) == want
                assert minplus.evaluate(M, q).values(H + 2) == want
                assert table.entries[tuple(q.values(H + 1))].values(H + 2) == want
        for k in range(12):
            g = 2 + k % 3
            dc = DualCurve(random_curve(rng, 2), random_curve(rng, 2), rng.randint(0, 1))
            bounds = EnumBounds(g, 1, burst=dc.u[g] + 1)
            S = minplus.to_spectral(dualcurve.to_matrix(dc, g), dc.b)
            assert dualcurve.spectra(dc, g).entries == minplus.spectra(S).entries == spectrum_oracle(dc, bounds).entries
        for k in range(10):
            first = DualCurve(random_curve(rng, 2), random_curve(rng, 2), 0)
            second = DualCurve(random_curve(rng, 2), random_curve(rng, 2), rng.randint(0, 1))
            joint = dualcurve.compose(first, second)
            M = minplus.compose(dualcurve.to_matrix(first, 5), dualcurve.to_matrix(second, 5), second.b)
            table = compose_tandem_oracle(second, first, EnumBounds(3, 2))
            for key, psi in table.entries.items():
                q = CumVec(key, 0)
                assert joint.eval(q).values(5) == psi.values(5) == minplus.evaluate(M, q).values(5)
            fresh = DualCurve(second.u, second.v, 0)
            joint0 = dualcurve.compose(first, fresh)
            arrivals = [rng.randint(0, 3) for _ in range(10)]
            promised = joint0.eval(CumVec.from_increments(arrivals)).values(11)
            assert tandem_run(first, fresh, arrivals) == promised
            for seed in range(5):
                out = tandem_run(first, fresh, arrivals, random.Random(seed))
                assert all(x >= y for x, y in zip(out, promised))


def test_criterion_9_hull_laws():
    with criterion(9, "spectral hulls dominate tables and keep the schedulability verdict; step hulls exact"):
        rng = random.Random(9)
        bounds = EnumBounds(3, 2)
        verdicts = []
        for _ in range(100):
            tables = [random_table(rng, bounds, rng.randint(0, 1)) for _ in range(rng.randint(1, 3))]
            hulls = spectral_hull(tables)
            services = [MinPlusService.from_spectral(S) for S in hulls]
            for table, hull in zip(tables, services):
                for key, psi in table.entries.items():
                    assert dominates(hull.eval(CumVec(key, 0)), psi)
            c = rng.randint(1, 4)
            verdict = is_schedulable(System.of(tables, c))
            assert verdict == is_schedulable(System.of(services, c))
            verdicts.append(verdict)
        assert any(verdicts) and not all(verdicts)
        tables = [single_task_table(theta, EnumBounds(3, 1)) for theta in (0, 1, 2)]
        for theta, S in zip((0, 1, 2), spectral_hull(tables)):
            assert S.rows == step_matrix(theta, S.g).rows
