"""Supermodular set functions and their base polytopes (permutohedra).

Subsets of the flows ``0 .. n-1`` are bitmasks: bit ``i`` set means flow
``i`` is a member.  For a supermodular ``chi`` the base polytope is::

    P(chi) = { d : sum(d) = chi(all), sum over G of d >= chi(G) for every G }

Its vertices are the greedy points obtained by granting flows priority in
the order of a permutation.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .errors import DomainError, ResourceLimitError

MAX_FLOWS = 16
MAX_CENTROID_FLOWS = 12


@dataclass(frozen=True)
class SetFn:
    """Set function on ``n`` flows stored as a table indexed by bitmask."""

    n: int
    values: tuple

    def __post_init__(self):
        if self.n > MAX_FLOWS:
            raise ResourceLimitError(f"at most {MAX_FLOWS} flows are supported")
        if len(self.values) != 1 << self.n:
            raise DomainError(f"expected {1 << self.n} values, got {len(self.values)}")
        if self.values[0] != 0:
            raise DomainError("a set function must vanish on the empty set")

    @classmethod
    def from_callable(cls, n: int, fn: Callable[[int], int]) -> "SetFn":
        return cls(n, tuple(fn(mask) for mask in range(1 << n)))

    @classmethod
    def modular(cls, weights: Sequence) -> "SetFn":
        n = len(weights)
        return cls.from_callable(n, lambda m: sum(w for i, w in enumerate(weights) if m >> i & 1))

    @property
    def full(self) -> int:
        return (1 << self.n) - 1

    def __call__(self, mask: int):
        return self.values[mask]

    def to_json(self) -> dict:
        return {"n": self.n, "values": [v if isinstance(v, int) else str(v) for v in self.values]}


def members(mask: int) -> list[int]:
    return [i for i in range(mask.bit_length()) if mask >> i & 1]


def mask_of(items: Iterable[int]) -> int:
    m = 0
    for i in items:
        m |= 1 << i
    return m


def subset_sums(d: Sequence) -> list:
    """Table of sum over G of d, for every bitmask G."""
    n = len(d)
    sums = [0] * (1 << n)
    for mask in range(1, 1 << n):
        low = mask & -mask
        sums[mask] = sums[mask ^ low] + d[low.bit_length() - 1]
    return sums


def supermodular_violation(chi: SetFn) -> tuple[int, int] | None:
    """A pair (G, G') breaking chi(G)+chi(G') <= chi(G|G')+chi(G&G'), if any.

    Uses the local form: it is enough to test G + i, G + j against G and
    G + i + j for i, j outside G.
    """
    n, v = chi.n, chi.values
    for mask in range(1 << n):
        outside = [i for i in range(n) if not mask >> i & 1]
        for a, b in itertools.combinations(outside, 2):
            x, y = mask | 1 << a, mask | 1 << b
            if v[x] + v[y] > v[x | y] + v[mask]:
                return x, y
    return None


def is_supermodular(chi: SetFn) -> bool:
    return supermodular_violation(chi) is None


def is_supermodular_exhaustive(chi: SetFn) -> bool:
    """Direct check of every pair of subsets (quadratic in 2^n)."""
    v = chi.values
    size = 1 << chi.n
    return all(v[x] + v[y] <= v[x | y] + v[x & y] for x in range(size) for y in range(x, size))


def vertex(chi: SetFn, order: Sequence[int]) -> tuple:
    """Greedy vertex for the priority order ``order`` (highest priority first).

    The i-th flow of the order receives chi(first i flows) - chi(first i-1 flows).
    """
    if sorted(order) != list(range(chi.n)):
        raise DomainError(f"{list(order)} is not a permutation of 0..{chi.n - 1}")
    out = [0] * chi.n
    prev = 0
    for flow in order:
        cur = prev | 1 << flow
        out[flow] = chi(cur) - chi(prev)
        prev = cur
    return tuple(out)


def violated_subset(chi: SetFn, d: Sequence) -> int | None:
    """A subset whose constraint ``d`` breaks, or None when d lies in P(chi).

    The full set is reported when the total differs from chi(all).
    """
    if len(d) != chi.n:
        raise DomainError("schedule length does not match the set function")
    sums = subset_sums(d)
    if sums[chi.full] != chi(chi.full):
        return chi.full
    for mask in range(1, 1 << chi.n):
        if sums[mask] < chi(mask):
            return mask
    return None


def membership(chi: SetFn, d: Sequence) -> bool:
    return violated_subset(chi, d) is None


def distinct_vertices(chi: SetFn) -> list[tuple]:
    """Every distinct vertex, in lexicographic order of the generating permutation."""
    seen, out = set(), []
    for order in itertools.permutations(range(chi.n)):
        v = vertex(chi, order)
        if v not in seen:
            seen.add(v)
            out.append(v)
    return out


def centroid(chi: SetFn) -> tuple[Fraction, ...]:
    """Average of the n! vertices, via the Shapley-value subset formula."""
    n = chi.n
    if n > MAX_CENTROID_FLOWS:
        raise ResourceLimitError(f"centroid supports at most {MAX_CENTROID_FLOWS} flows")
    if n == 0:
        return ()
    fact = [math.factorial(k) for k in range(n + 1)]
    weight = [Fraction(fact[k] * fact[n - k - 1], fact[n]) for k in range(n)]
    out = []
    for i in range(n):
        bit = 1 << i
        total = Fraction(0)
        for mask in range(1 << n):
            if mask & bit:
                continue
            total += weight[bin(mask).count("1")] * (chi(mask | bit) - chi(mask))
        out.append(total)
    return tuple(out)


def vertex_average(chi: SetFn) -> tuple[Fraction, ...]:
    """Centroid by explicit enumeration of all permutations (small n only)."""
    n = chi.n
    sums = [Fraction(0)] * n
    count = 0
    for order in itertools.permutations(range(n)):
        for i, x in enumerate(vertex(chi, order)):
            sums[i] += x
        count += 1
    return tuple(s / count for s in sums)


def chain_orders(n: int, chain: Sequence[int]) -> list[tuple]:
    """Permutations whose prefix sets include every set of ``chain``."""
    chain = list(chain)
    full = (1 << n) - 1
    if not chain or chain[0] != 0 or chain[-1] != full:
        raise DomainError("a chain must start at the empty set and end at the full set")
    layers = []
    for lo, hi in zip(chain, chain[1:]):
        if lo & ~hi or lo == hi:
            raise DomainError("chain sets must be strictly nested")
        layers.append(members(hi & ~lo))
    orders = []
    for parts in itertools.product(*(itertools.permutations(layer) for layer in layers)):
        orders.append(tuple(x for part in parts for x in part))
    return orders


def face(chi: SetFn, chain: Sequence[int]) -> list[tuple]:
    """Vertices of the face of P(chi) cut out by a chain (duplicates kept)."""
    return [vertex(chi, order) for order in chain_orders(chi.n, chain)]


def random_supermodular(n: int, rng: random.Random, terms: int = 3, max_weight: int = 3) -> SetFn:
    """Seeded random supermodular function with integer values.

    Built as a modular part plus a sum of convex functions of
    ``|G & A_k|`` for random subsets ``A_k``; such sums are always
    supermodular, and the result is re-checked before returning.
    """
    base = [rng.randint(0, max_weight) for _ in range(n)]
    pieces = []
    for _ in range(terms):
        group = rng.randrange(1 << n) if n else 0
        slopes = sorted(rng.randint(0, max_weight) for _ in range(n + 1))
        curve = [0]
        for k in range(n):
            curve.append(curve[-1] + slopes[k])
        pieces.append((group, curve))

    def value(mask: int) -> int:
        total = sum(w for i, w in enumerate(base) if mask >> i & 1)
        for group, curve in pieces:
            total += curve[bin(mask & group).count("1")]
        return total

    chi = SetFn.from_callable(n, value)
    if not is_supermodular(chi):
        raise AssertionError("random construction produced a non-supermodular function")
    return chi


__all__ = [
    "SetFn",
    "members",
    "mask_of",
    "subset_sums",
    "is_supermodular",
    "is_supermodular_exhaustive",
    "supermodular_violation",
    "vertex",
    "membership",
    "violated_subset",
    "distinct_vertices",
    "centroid",
    "vertex_average",
    "chain_orders",
    "face",
    "random_supermodular",
]
