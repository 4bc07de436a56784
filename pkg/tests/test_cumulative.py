from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from statesched.cumulative import (
    INF,
    CumVec,
    cap,
    combine,
    dominates,
    minplus_conv,
    monus,
    shift_left,
    shift_right,
    sup_ratio,
    tau,
    value,
)
from statesched.errors import DomainError, RepresentationError
from strategies import brute_values, cumvecs, finite_cumvecs

N = 40


def test_value_examples():
    assert value(CumVec.delta(), 0) == 0
    assert value(CumVec.delta(), 7) == 1
    assert value(CumVec.rate(2), 5) == 10


def test_shift_examples():
    assert shift_right(CumVec.delta()) == CumVec((0, 0, 1), 0)
    assert shift_left(CumVec((0, 0, 1, 1, 1), 0)) == CumVec.delta()
    assert shift_right(CumVec.rate(1)).values(5) == [0, 0, 1, 2, 3]


def test_shift_left_needs_zero_first_entry():
    with pytest.raises(DomainError):
        shift_left(CumVec.delta())


def test_tau_examples():
    assert tau(CumVec.delta(), 1) == 0
    assert tau(CumVec.delta(), 2) == INF
    assert tau(CumVec.rate(1), 3) == 2


def test_combine_examples():
    assert combine(CumVec.delta(), CumVec.eps(), "min") == CumVec.delta()
    assert combine(CumVec.delta(), CumVec.delta(), "add").values(4) == [0, 2, 2, 2]
    got = combine(CumVec.rate(1), CumVec.delta(), "monus")
    assert got.values(17) == [max(j - (1 if j else 0), 0) for j in range(17)]


def test_monus_infinite_tails_is_a_representation_error():
    with pytest.raises(RepresentationError):
        combine(CumVec.eps(), CumVec.eps(), "monus")
    with pytest.raises(RepresentationError):
        monus(INF, INF)


def test_conv_examples():
    assert minplus_conv(CumVec.rate(1), CumVec.rate(1)).values(33) == list(range(33))
    assert minplus_conv(CumVec((0, 2, 5), 3), CumVec.zero()) == CumVec.zero()
    assert minplus_conv(CumVec.delta(), CumVec.rate(2)).values(6) == [0, 1, 1, 1, 1, 1]


def test_canonical_equality():
    assert CumVec((0, 1, 2, 3), 1) == CumVec.rate(1)
    assert CumVec((0, 4, INF), 0) == CumVec((0, 4), INF)


def test_not_cumulative_rejected():
    with pytest.raises(DomainError):
        CumVec((1, 2), 0)
    with pytest.raises(DomainError):
        CumVec((0, 2, 1), 0)


def test_json_round_trip():
    x = CumVec((0, 1, 3), INF)
    assert x.to_json() == {"prefix": [0, 1, 3], "tail_inc": "inf"}
    assert CumVec.from_json(x.to_json()) == x


def test_sup_ratio_exact():
    assert sup_ratio(CumVec((0, 3, 4), 1)) == 3
    assert sup_ratio(CumVec((0, 0, 1), 0)) == Fraction(1, 2)
    assert sup_ratio(CumVec((0,), INF)) == INF


@given(cumvecs())
def test_monotone_and_starts_at_zero(x):
    vals = x.values(N)
    assert vals[0] == 0
    assert all(a <= b for a, b in zip(vals, vals[1:]))
    assert vals == brute_values(x, N)


@given(cumvecs())
def test_shift_inverse(x):
    assert shift_left(shift_right(x)) == x
    y = shift_right(x)
    assert shift_right(shift_left(y)) == y


@given(cumvecs(), st.integers(1, 20), st.integers(1, 20))
def test_tau_properties(x, h, h2):
    t = tau(x, h)
    vals = brute_values(x, 200)
    brute = max(j for j in range(200) if vals[j] < h)
    if brute == 199:
        assert t == INF or t >= 199
    else:
        assert t == brute
    assert value(x, t if t != INF else 500) < h
    if t != INF:
        assert value(x, t + 1) >= h
    lo, hi = sorted((h, h2))
    assert tau(x, lo) <= tau(x, hi)


@given(cumvecs(), cumvecs(), st.sampled_from(["min", "max", "add"]))
def test_combine_matches_pointwise(x, y, op):
    fn = {"min": min, "max": max, "add": lambda a, b: a + b}[op]
    z = combine(x, y, op)
    n = 80
    assert z.values(n) == [fn(a, b) for a, b in zip(brute_values(x, n), brute_values(y, n))]


@given(cumvecs(), cumvecs(allow_inf=False))
def test_monus_clamp_matches_running_max(x, y):
    z = combine(x, y, "monus")
    n = 80
    raw = [monus(a, b) for a, b in zip(brute_values(x, n), brute_values(y, n))]
    best, expect = 0, []
    for v in raw:
        best = max(best, v)
        expect.append(best)
    assert z.values(n) == expect


def brute_conv(xs, ys):
    return [min(xs[i] + ys[j - i] for i in range(j + 1)) for j in range(len(xs))]


@given(cumvecs(max_len=5), cumvecs(max_len=5))
def test_conv_against_brute_force(x, y):
    n = 32
    z = minplus_conv(x, y)
    assert z.values(n) == brute_conv(brute_values(x, n), brute_values(y, n))


@given(finite_cumvecs, finite_cumvecs, finite_cumvecs)
def test_conv_associative_commutative(x, y, w):
    assert minplus_conv(x, y) == minplus_conv(y, x)
    assert minplus_conv(minplus_conv(x, y), w) == minplus_conv(x, minplus_conv(y, w))


@given(cumvecs(), st.integers(0, 12))
def test_cap(x, h):
    n = 40
    assert cap(x, h).values(n) == [min(v, h) for v in brute_values(x, n)]


@given(cumvecs(), cumvecs())
def test_dominates_matches_scan(x, y):
    n = 200
    xs, ys = brute_values(x, n), brute_values(y, n)
    scan = all(a >= b for a, b in zip(xs, ys))
    if dominates(x, y):
        assert scan
    elif scan:
        # only possible when the violation lies beyond the scanned window
        assert x.tail_inc < y.tail_inc


@given(cumvecs())
def test_sup_ratio_matches_scan(x):
    n = 300
    vals = brute_values(x, n)
    scan = max(Fraction(vals[k], k) if vals[k] != INF else INF for k in range(1, n))
    got = sup_ratio(x)
    if got == INF:
        assert scan == INF
    else:
        # ratios past the prefix move monotonically toward the tail slope
        assert got == max(scan, Fraction(x.tail_inc))
