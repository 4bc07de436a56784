import itertools
import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.optimize import linprog

from statesched.errors import DomainError, ResourceLimitError
from statesched.polymatroid import (
    SetFn,
    centroid,
    chain_orders,
    distinct_vertices,
    face,
    is_supermodular,
    is_supermodular_exhaustive,
    mask_of,
    membership,
    random_supermodular,
    subset_sums,
    vertex,
    vertex_average,
    violated_subset,
)

# flows 0 and 1; values indexed by bitmask
SKEWED = SetFn(2, (0, 1, 0, 3))


def test_supermodularity_examples():
    assert is_supermodular(SetFn(2, (0, 0, 0, 0)))
    assert is_supermodular(SKEWED)
    assert not is_supermodular(SetFn(2, (0, 1, 1, 1)))


def test_set_function_validation():
    with pytest.raises(DomainError):
        SetFn(2, (1, 0, 0, 0))
    with pytest.raises(DomainError):
        SetFn(2, (0, 1, 2))


def test_vertex_examples():
    assert vertex(SKEWED, (0, 1)) == (1, 2)
    assert vertex(SKEWED, (1, 0)) == (3, 0)
    with pytest.raises(DomainError):
        vertex(SKEWED, (0, 0))


def test_modular_function_has_a_single_vertex():
    w = (2, 0, 5)
    chi = SetFn.modular(w)
    assert distinct_vertices(chi) == [w]
    assert centroid(chi) == w


def test_membership_examples():
    assert membership(SKEWED, (1, 2))
    assert not membership(SKEWED, (0, 3))
    assert violated_subset(SKEWED, (0, 3)) == mask_of([0])
    assert violated_subset(SKEWED, (1, 1)) == SKEWED.full
    assert membership(SKEWED, centroid(SKEWED))


def test_centroid_of_skewed_function():
    assert centroid(SKEWED) == (2, 1)


def test_centroid_size_limit():
    with pytest.raises(ResourceLimitError):
        centroid(SetFn.modular([0] * 13))


def test_subset_sums():
    assert subset_sums((1, 2, 4)) == [0, 1, 2, 3, 4, 5, 6, 7]


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_shapley_formula_matches_vertex_average(n):
    chi = random_supermodular(n, random.Random(n))
    assert centroid(chi) == vertex_average(chi)
    assert membership(chi, centroid(chi))


def test_faces():
    chi = random_supermodular(3, random.Random(11))
    assert len(face(chi, [0, 1, 3, 7])) == 1
    assert sorted(face(chi, [0, 7])) == sorted(vertex(chi, o) for o in itertools.permutations(range(3)))
    hexagon_edge = face(chi, [0, 1, 7])
    assert len(hexagon_edge) == 2
    assert all(v[0] == chi(1) for v in hexagon_edge)
    with pytest.raises(DomainError):
        chain_orders(3, [0, 3, 1, 7])
    with pytest.raises(DomainError):
        chain_orders(3, [1, 7])


@settings(max_examples=60)
@given(n=st.integers(1, 6), seed=st.integers(0, 10**6))
def test_vertices_are_members(n, seed):
    rng = random.Random(seed)
    chi = random_supermodular(n, rng)
    assert is_supermodular_exhaustive(chi)
    order = list(range(n))
    rng.shuffle(order)
    v = vertex(chi, order)
    sums = subset_sums(v)
    assert all(sums[m] >= chi(m) for m in range(1 << n))
    assert sums[chi.full] == chi(chi.full)


@settings(max_examples=40)
@given(n=st.integers(2, 5), seed=st.integers(0, 10**6))
def test_adjacent_orders_change_only_swapped_flows(n, seed):
    rng = random.Random(seed)
    chi = random_supermodular(n, rng)
    order = list(range(n))
    rng.shuffle(order)
    k = rng.randrange(n - 1)
    swapped = order[:]
    swapped[k], swapped[k + 1] = swapped[k + 1], swapped[k]
    a, b = vertex(chi, order), vertex(chi, swapped)
    for flow in range(n):
        if flow not in (order[k], order[k + 1]):
            assert a[flow] == b[flow]
    assert a[order[k]] + a[order[k + 1]] == b[order[k]] + b[order[k + 1]]


def _in_hull(point, vertices) -> bool:
    V = np.array(vertices, dtype=float).T
    A = np.vstack([V, np.ones(V.shape[1])])
    rhs = np.append(np.array(point, dtype=float), 1.0)
    res = linprog(np.zeros(V.shape[1]), A_eq=A, b_eq=rhs, bounds=(0, None), method="highs")
    return res.status == 0


@pytest.mark.parametrize("seed", range(6))
def test_integral_points_match_vertex_hull(seed):
    rng = random.Random(seed)
    n = 2 + seed % 3
    chi = random_supermodular(n, rng, terms=2, max_weight=2)
    verts = distinct_vertices(chi)
    total = chi(chi.full)
    for d in itertools.product(range(total + 1), repeat=n):
        if sum(d) != total:
            continue
        assert membership(chi, d) == _in_hull(d, verts), d


def test_random_supermodular_is_reproducible():
    a = random_supermodular(4, random.Random(5))
    b = random_supermodular(4, random.Random(5))
    assert a.values == b.values


def test_json_form():
    assert SKEWED.to_json()["values"] == [0, 1, 0, 3]
    assert Fraction(centroid(SKEWED)[0]) == 2
