"""Extended naturals and eventually-affine cumulative vectors.

Every semi-infinite object in the package (arrival, departure and queue
vectors, service curves, the capacity vector) is stored as a finite prefix
followed by a constant per-slot increment.  The increment may be ``0``
(the vector saturates) or :data:`INF` (the vector jumps to infinity right
after the prefix, which is how infinite bursts are modelled).

Extended naturals are plain Python ints plus the sentinel ``INF``
(``math.inf``).  Values that would exceed the signed 64-bit range saturate
to ``INF`` and emit a :class:`SaturationWarning`.

>>> delta = CumVec.delta()
>>> value(delta, 7)
1
>>> tau(CumVec.rate(1), 3)
2
"""

from __future__ import annotations

import bisect
import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Sequence, Union

import numpy as np

from .errors import DomainError, RepresentationError

INF = math.inf
ExtNat = Union[int, float]

MAX_FINITE = 2**63 - 1


class SaturationWarning(RuntimeWarning):
    """Emitted when an arithmetic result leaves the 64-bit range."""


def is_inf(x: ExtNat) -> bool:
    return x == INF


def saturate(x: ExtNat) -> ExtNat:
    if x != INF and x > MAX_FINITE:
        warnings.warn(f"value {x} saturated to INF", SaturationWarning, stacklevel=3)
        return INF
    return x


def monus(x: ExtNat, y: ExtNat) -> ExtNat:
    """Truncated subtraction ``max(x - y, 0)`` on extended naturals."""
    if y == INF:
        if x == INF:
            raise RepresentationError("INF monus INF is undefined")
        return 0
    if x == INF:
        return INF
    return x - y if x > y else 0


def _ceil_div(a, b) -> int:
    return -((-a) // b)


# ---------------------------------------------------------------------------
# Raw eventually-affine sequences.
#
# ``Seq`` carries the same (prefix, tail_inc) encoding as ``CumVec`` but
# without the cumulative-vector invariants, so intermediate results such as
# x_{i+k} or a maximand with negative slope can be represented.


class Seq(NamedTuple):
    prefix: tuple
    tail_inc: ExtNat


def seq_value(x, j: int) -> ExtNat:
    prefix, tail = x.prefix, x.tail_inc
    n = len(prefix)
    if j < n:
        return prefix[j]
    if tail == 0:
        return prefix[-1]
    if tail == INF or prefix[-1] == INF:
        return INF
    return prefix[-1] + (j - n + 1) * tail


def seq_values(x, count: int) -> list:
    """The first ``count`` entries of ``x``."""
    prefix = x.prefix
    if count <= len(prefix):
        return list(prefix[:count])
    out = list(prefix)
    out.extend(seq_value(x, j) for j in range(len(prefix), count))
    return out


def canonical(values: Sequence, tail: ExtNat) -> Seq:
    """Normalize a prefix/tail pair so equal sequences compare equal."""
    vals = list(values)
    if not vals:
        raise RepresentationError("empty prefix")
    finite_max = max((v for v in vals if v != INF), default=0)
    if finite_max > MAX_FINITE:
        vals = [saturate(v) for v in vals]
    if tail != INF and tail > MAX_FINITE:
        tail = saturate(tail)
    for k, v in enumerate(vals):
        if v == INF:
            vals = vals[: max(k, 1)]
            tail = INF
            break
    if tail != INF and isinstance(tail, float):
        tail = int(tail)
    if tail != INF:
        while len(vals) >= 2 and vals[-1] - vals[-2] == tail:
            vals.pop()
    return Seq(tuple(vals), tail)


def _crossing(X, Y, r, s) -> int:
    """Smallest k >= 0 with X + k*r <= Y + k*s, assuming r < s."""
    if X <= Y:
        return 0
    if s == INF:
        return 1
    return _ceil_div(X - Y, s - r)


def seq_pointwise(x, y, op: str, clamp: bool = False) -> Seq:
    """Pointwise ``min``/``max``/``add``/``monus``/``sub`` of two sequences.

    ``sub`` is plain subtraction (negative values allowed) and requires a
    finite tail on ``y``.  With ``clamp`` the result is made non-decreasing
    by a running maximum.
    """
    r, s = x.tail_inc, y.tail_inc
    base = max(len(x.prefix), len(y.prefix)) - 1
    X, Y = seq_value(x, base), seq_value(y, base)
    extra = 0
    if op == "add":
        tail = INF if INF in (r, s) else r + s
        fn = _add
    elif op == "min":
        tail = min(r, s)
        fn = min
        if X != INF and Y != INF and r != s:
            extra = _crossing(X, Y, r, s) if r < s else _crossing(Y, X, s, r)
    elif op == "max":
        tail = max(r, s)
        fn = max
        if X != INF and Y != INF and r != s:
            extra = _crossing(Y, X, s, r) if r > s else _crossing(X, Y, r, s)
    elif op == "monus":
        if r == INF and s == INF:
            raise RepresentationError("monus of two vectors with infinite tails")
        fn = monus
        if r == INF:
            tail = INF
        elif s == INF:
            tail, extra = 0, 1
        elif r > s:
            tail = r - s
            if X != INF and Y != INF:
                extra = _crossing(Y, X, s, r)
        else:
            tail = 0
            if r < s and X != INF and Y != INF:
                extra = _crossing(X, Y, r, s)
    elif op == "sub":
        if s == INF or Y == INF:
            raise RepresentationError("cannot subtract a vector with infinite entries")
        tail = INF if r == INF else r - s
        fn = _sub
    else:
        raise ValueError(f"unknown op {op!r}")
    count = base + extra + 2
    xs, ys = seq_values(x, count), seq_values(y, count)
    vals = [fn(a, b) for a, b in zip(xs, ys)]
    if clamp:
        return _running_max(vals, tail)
    return canonical(vals, tail)


def _add(a, b):
    return a + b


def _sub(a, b):
    return a - b


def _running_max(vals: list, tail) -> Seq:
    top = max(vals)
    if tail not in (0, INF) and tail > 0 and vals[-1] < top:
        steps = _ceil_div(top - vals[-1], tail)
        last = vals[-1]
        vals = vals + [last + k * tail for k in range(1, steps + 1)]
    out, best = [], -INF
    for v in vals:
        best = v if v > best else best
        out.append(best)
    if tail != INF and tail < 0:
        tail = 0
    return canonical(out, tail)


def seq_drop(x, i: int) -> Seq:
    """The sequence k -> x_{i+k}."""
    n = len(x.prefix)
    if i < n:
        return canonical(x.prefix[i:], x.tail_inc)
    return canonical([seq_value(x, i)], x.tail_inc)


def seq_conv(x, y) -> Seq:
    """Min-plus convolution z_j = min_{i<=j} x_i + y_{j-i} of two sequences."""
    r, s = x.tail_inc, y.tail_inc
    lx, ly = len(x.prefix) - 1, len(y.prefix) - 1
    horizon = lx + ly
    if r != s and INF not in (r, s):
        lo = min(r, s)
        hi = max(r, s)
        top = seq_value(x, lx) + seq_value(y, ly)
        floor_ = x.prefix[0] + y.prefix[0]
        if top != INF:
            horizon += max(0, _ceil_div(top - floor_, hi - lo))
    count = horizon + 3
    xs = np.array(seq_values(x, count), dtype=float)
    ys = np.array(seq_values(y, count), dtype=float)
    vals = [_as_ext(np.min(xs[: j + 1] + ys[j::-1])) for j in range(count)]
    return canonical(vals, min(r, s))


def _as_ext(v) -> ExtNat:
    v = float(v)
    return INF if v == INF else int(v)


def seq_argmax(x) -> tuple[int, ExtNat]:
    """First index attaining ``max_j x_j``.

    Raises :class:`RepresentationError` when the sequence grows without bound.
    """
    tail = x.tail_inc
    if tail == INF or tail > 0:
        raise RepresentationError("maximum over an unbounded sequence")
    best_j, best = 0, x.prefix[0]
    for j, v in enumerate(x.prefix):
        if v > best:
            best_j, best = j, v
    return best_j, best


# ---------------------------------------------------------------------------
# Cumulative vectors.


@dataclass(frozen=True)
class CumVec:
    """Non-decreasing vector starting at 0, eventually affine.

    ``value(j)`` is ``prefix[j]`` inside the prefix and
    ``prefix[-1] + (j - len(prefix) + 1) * tail_inc`` beyond it.  The
    constructor canonicalizes, so structurally different encodings of the
    same vector compare equal.
    """

    prefix: tuple
    tail_inc: ExtNat = 0

    def __post_init__(self):
        seq = canonical(self.prefix, self.tail_inc)
        object.__setattr__(self, "prefix", seq.prefix)
        object.__setattr__(self, "tail_inc", seq.tail_inc)
        if seq.prefix[0] != 0:
            raise DomainError(f"cumulative vector must start at 0, got {seq.prefix[0]}")
        if seq.tail_inc < 0:
            raise DomainError("negative tail increment")
        if any(b < a for a, b in zip(seq.prefix, seq.prefix[1:])):
            raise DomainError(f"cumulative vector must be non-decreasing: {seq.prefix}")

    # constructors ---------------------------------------------------------
    @classmethod
    def from_seq(cls, seq) -> "CumVec":
        return cls(tuple(seq.prefix), seq.tail_inc)

    @classmethod
    def zero(cls) -> "CumVec":
        return cls((0,), 0)

    @classmethod
    def delta(cls, scale: ExtNat = 1) -> "CumVec":
        """The vector [0, s, s, ...]; ``scale=INF`` gives epsilon."""
        if scale == INF:
            return cls.eps()
        return cls((0, scale), 0)

    @classmethod
    def eps(cls) -> "CumVec":
        return cls((0,), INF)

    @classmethod
    def rate(cls, c: ExtNat) -> "CumVec":
        """The vector with entries ``j * c``."""
        return cls((0,), c)

    @classmethod
    def step(cls, at: int, height: ExtNat = 1) -> "CumVec":
        """Zero before index ``at`` and ``height`` from then on (``R^{at-1} delta``)."""
        if at < 1:
            raise DomainError("a step must start at index >= 1")
        return cls((0,) * at + (height,), 0)

    @classmethod
    def from_increments(cls, increments: Sequence[ExtNat], tail_inc: ExtNat = 0) -> "CumVec":
        vals = [0]
        for inc in increments:
            vals.append(vals[-1] + inc)
        return cls(tuple(vals), tail_inc)

    # accessors ------------------------------------------------------------
    def __getitem__(self, j: int) -> ExtNat:
        return seq_value(self, j)

    def values(self, count: int) -> list:
        return seq_values(self, count)

    @property
    def limit(self) -> ExtNat:
        """x_infinity."""
        return self.prefix[-1] if self.tail_inc == 0 else INF

    @property
    def settled_at(self) -> int:
        """Index from which the vector is affine."""
        return len(self.prefix) - 1

    def __repr__(self) -> str:
        t = "inf" if self.tail_inc == INF else self.tail_inc
        return f"CumVec({list(self.prefix)}, tail={t})"

    def to_json(self) -> dict:
        return {
            "prefix": [_ext_to_json(v) for v in self.prefix],
            "tail_inc": _ext_to_json(self.tail_inc),
        }

    @classmethod
    def from_json(cls, obj) -> "CumVec":
        if isinstance(obj, list):
            return cls(tuple(ext_from_json(v) for v in obj), 0)
        return cls(
            tuple(ext_from_json(v) for v in obj["prefix"]),
            ext_from_json(obj.get("tail_inc", 0)),
        )


def _ext_to_json(v: ExtNat):
    return "inf" if v == INF else int(v)


def ext_to_json(v: ExtNat):
    return _ext_to_json(v)


def ext_from_json(v) -> ExtNat:
    if v == "inf" or v == INF:
        return INF
    if isinstance(v, bool) or not isinstance(v, int):
        raise DomainError(f"expected a natural number or 'inf', got {v!r}")
    if v < 0:
        raise DomainError(f"negative count {v}")
    return v


# ---------------------------------------------------------------------------
# Public operations.


def value(x: CumVec, j: int) -> ExtNat:
    return seq_value(x, j)


def shift_right(x: CumVec, times: int = 1) -> CumVec:
    """[R x]_{j+1} = x_j with a 0 inserted at the front."""
    if times <= 0:
        return x
    return CumVec((0,) * times + x.prefix, x.tail_inc)


def shift_left(x: CumVec, times: int = 1) -> CumVec:
    """Inverse of :func:`shift_right`; needs x_1 = 0."""
    for _ in range(times):
        if x[1] != 0:
            raise DomainError(f"left shift needs x_1 = 0, got {x[1]}")
        if len(x.prefix) == 1:
            return x
        x = CumVec(x.prefix[1:], x.tail_inc)
    return x


def tau(x: CumVec, h: int) -> ExtNat:
    """Largest j with x_j < h (INF when x stays below h)."""
    if h < 1:
        raise DomainError("tau needs h >= 1")
    prefix, tail = x.prefix, x.tail_inc
    k = bisect.bisect_left(prefix, h) - 1
    if k < len(prefix) - 1:
        return k
    last = prefix[-1]
    if tail == 0:
        return INF
    if tail == INF:
        return len(prefix) - 1
    return len(prefix) - 1 + _ceil_div(h - last, tail) - 1


def combine(x: CumVec, y: CumVec, op: str) -> CumVec:
    """Pointwise ``min``, ``max``, ``add`` or ``monus`` (monus is clamped monotone)."""
    if op == "monus":
        return CumVec.from_seq(seq_pointwise(x, y, "monus", clamp=True))
    if op not in ("min", "max", "add"):
        raise ValueError(f"unknown op {op!r}")
    return CumVec.from_seq(seq_pointwise(x, y, op))


def vmin(*xs: CumVec) -> CumVec:
    out = xs[0]
    for x in xs[1:]:
        out = combine(out, x, "min")
    return out


def vmax(*xs: CumVec) -> CumVec:
    out = xs[0]
    for x in xs[1:]:
        out = combine(out, x, "max")
    return out


def vsum(xs) -> CumVec:
    out = CumVec.zero()
    for x in xs:
        out = combine(out, x, "add")
    return out


def minus_const(x: CumVec, d: ExtNat) -> CumVec:
    """(x - d*delta)^+, i.e. subtract ``d`` from every entry past index 0."""
    if d == 0:
        return x
    return combine(x, CumVec.delta(d), "monus")


def plus_const(x: CumVec, c: ExtNat) -> CumVec:
    """x + c*delta."""
    if c == 0:
        return x
    return combine(x, CumVec.delta(c), "add")


def minplus_conv(x: CumVec, y: CumVec) -> CumVec:
    """z_j = min over 0 <= i <= j of x_i + y_{j-i}."""
    return CumVec.from_seq(seq_conv(x, y))


def cap(x: CumVec, h: ExtNat) -> CumVec:
    """min{x, h} taken entrywise."""
    if h == INF:
        return x
    j = tau(x, h) if h >= 1 else -1
    if j == INF:
        return x
    return CumVec(tuple(x.values(j + 1)) + (h,), 0)


def first_violation(x, y) -> ExtNat | None:
    """Smallest j with x_j > y_j, or None when x <= y everywhere."""
    base = max(len(x.prefix), len(y.prefix)) - 1
    xs, ys = seq_values(x, base + 1), seq_values(y, base + 1)
    for j, (a, b) in enumerate(zip(xs, ys)):
        if a > b:
            return j
    r, s = x.tail_inc, y.tail_inc
    if r <= s:
        return None
    if r == INF:
        return base + 1
    X, Y = xs[-1], ys[-1]
    return base + (Y - X) // (r - s) + 1


def dominates(x, y) -> bool:
    """True when x_j >= y_j for every j."""
    return first_violation(y, x) is None


def sup_ratio(x) -> Fraction | float:
    """sup over k >= 1 of x_k / k, exact."""
    if x.tail_inc == INF:
        return INF
    best = Fraction(x.tail_inc)
    for k in range(1, len(x.prefix)):
        v = x.prefix[k]
        if v == INF:
            return INF
        f = Fraction(v, k)
        if f > best:
            best = f
    return best


def cum_from_values(vals: Sequence[ExtNat], tail: ExtNat = 0) -> CumVec:
    return CumVec(tuple(vals), tail)
