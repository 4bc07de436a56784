"""Dual-curve services.

A dual-curve service is a min-plus service whose matrix is described by two
cumulative vectors: a dynamic curve ``u`` (row 0, rewritten every slot) and a
static curve ``v`` shared by every other diagonal.  It evaluates as::

    psi_j(q) = min{ u_j, min over 0 < i <= j of (q_i + v_{j-i}) }

With ``b = 0`` and ``u = v`` this is the classical service-curve guarantee,
so dual-curve states are a dynamic extension of service curves.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .cumulative import (
    INF,
    CumVec,
    Seq,
    cap,
    combine,
    dominates,
    first_violation,
    minplus_conv,
    minus_const,
    monus,
    plus_const,
    seq_drop,
    seq_pointwise,
    shift_left,
    shift_right,
    vmin,
    vsum,
)
from .minplus import CumulativeMatrix, SpectralMatrix, eval_batch
from .worstcase import ServiceState, Spectrum, spectrum_from_rows


def _after_first(w: CumVec, v: CumVec) -> CumVec:
    """j -> min over 0 < i <= j of (w_i + v_{j-i}), and 0 at j = 0."""
    w1 = w[1]
    if w1 == INF:
        return CumVec.eps()
    rest = shift_left(combine(w, CumVec.delta(w1), "monus"))
    return plus_const(shift_right(minplus_conv(rest, v)), w1)


@dataclass(frozen=True)
class DualCurve(ServiceState):
    """Dual-curve service state ``(u, v)`` with backlog ``b``."""

    u: CumVec
    v: CumVec
    b: int = 0
    kind = "dual_curve"
    deadline_rigid = True

    @classmethod
    def service_curve(cls, v: CumVec) -> "DualCurve":
        """The fresh state of a flow guaranteed the service curve ``v``."""
        return cls(v, v, 0)

    @property
    def non_degenerate(self) -> bool:
        return self.u.limit == INF and self.v.limit == INF

    def _eval(self, q):
        return combine(self.u, _after_first(q, self.v), "min")

    def eval_batch(self, qs, width):
        return eval_batch(to_matrix(self, width - 1), qs, width)

    def immediate(self, q):
        return min(self.u[1], q)

    def _update(self, q, d):
        u = vmin(self.u, plus_const(shift_right(self.v), q))
        return DualCurve(shift_left(minus_const(u, d)), self.v, q - d)

    def spectrum_row(self, i):
        if i == 0:
            return self.u
        later = seq_pointwise(seq_drop(self.u, i), Seq((self.b,), 0), "monus")
        return CumVec.from_seq(seq_pointwise(later, self.v, "min"))

    @property
    def row_threshold(self):
        return 1

    def spectrum_row_limit(self):
        return cap(self.v, monus(self.u.limit, self.b))

    def cond_rows(self, q):
        rv = shift_right(self.v)
        row0 = combine(self.u, plus_const(rv, q), "min")
        row1 = combine(minus_const(self.u, q), rv, "min")
        return row0, row1

    def p_vector(self, q):
        return combine(self.u, CumVec.delta(q), "min")

    def oracle_exact(self, bounds):
        top = self.u[bounds.horizon]
        return bounds.burst is not None and top != INF and bounds.burst >= top

    def to_json(self):
        return {"kind": self.kind, "u": self.u.to_json(), "v": self.v.to_json(), "b": self.b}

    def with_backlog(self, b):
        return DualCurve(self.u, self.v, b)


def evaluate(dc: DualCurve, q: CumVec) -> CumVec:
    return dc.eval(q)


def update(dc: DualCurve, a: int, d: int) -> DualCurve:
    return dc.update(a, d)


def spectra(dc: DualCurve, g: int, q: int | None = None) -> Spectrum:
    """Spectrum (or conditional spectrum given the queue ``q``) up to horizon ``g``."""
    if q is None:
        return spectrum_from_rows(dc.spectrum_row, g)
    row0, row1 = dc.cond_rows(q)
    rows = [tuple(row0.values(g + 1))]
    for i in range(1, g + 1):
        if i == 1:
            rows.append(tuple(row1.values(g + 1)))
            continue
        rows.append(
            tuple(0 if j <= i else min(monus(dc.u[j], q), dc.v[j - i]) for j in range(g + 1))
        )
    return Spectrum(tuple(rows))


def compose(first: DualCurve, second: DualCurve, b_second: int | None = None) -> DualCurve:
    """Dual curve of two servers in tandem (``first`` feeds ``second``)."""
    bII = second.b if b_second is None else b_second
    u = combine(_after_first(plus_const(first.u, bII), second.v), second.u, "min")
    return DualCurve(u, minplus_conv(first.v, second.v), first.b + bII)


def to_matrix(dc: DualCurve, g: int) -> CumulativeMatrix:
    """m_0j = u_j and m_ij = v_{(j-i)^+} for i > 0."""
    u, v = dc.u.values(g + 1), dc.v.values(g + 1)
    rows = [u] + [[v[j - i] if j > i else 0 for j in range(g + 1)] for i in range(1, g + 1)]
    return CumulativeMatrix(rows)


def hull_from_spectral(S: SpectralMatrix) -> DualCurve:
    """Smallest dual curve dominating the spectral matrix: u_j = s_0j, v_j = max_i s_{i,i+j}."""
    g = S.g
    u = CumVec(tuple(S.rows[0]), 0)
    v = [max((S[i, i + j] for i in range(1, g)), default=0) for j in range(g + 1)]
    return DualCurve(u, CumVec(tuple(v), 0), S.b)


def uv_schedulable(flows: Sequence[DualCurve], c: int) -> bool:
    """Schedulability of a dual-curve system in closed form.

    Requires sum of u <= c-vector and sum over flows of
    min{(u_inf - b)^+, v} <= c-vector.
    """
    cvec = CumVec.rate(c)
    if not dominates(cvec, vsum(dc.u for dc in flows)):
        return False
    limit = vsum(cap(dc.v, monus(dc.u.limit, dc.b)) for dc in flows)
    return first_violation(limit, cvec) is None


def uv_schedulable_nondegenerate(flows: Sequence[DualCurve], c: int) -> bool:
    """Fast path when every u and v is unbounded: sum u <= c and sum v <= c."""
    cvec = CumVec.rate(c)
    return dominates(cvec, vsum(dc.u for dc in flows)) and dominates(
        cvec, vsum(dc.v for dc in flows)
    )


__all__ = [
    "DualCurve",
    "evaluate",
    "update",
    "spectra",
    "compose",
    "to_matrix",
    "hull_from_spectral",
    "uv_schedulable",
    "uv_schedulable_nondegenerate",
]
