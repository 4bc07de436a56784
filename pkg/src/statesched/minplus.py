"""Finite min-plus services.

A min-plus service is identified by a cumulative matrix ``M`` and acts as
``psi_j(q) = min over i <= j of (q_i + m_ij)``.  Matrices are finite with
horizon ``g``: entries past column ``g`` repeat column ``g`` and entries on
or below the diagonal are zero, so the promised departures stop growing
after ``g`` slots.

Among all matrices describing the same service, the spectral matrix is the
canonical one: its entries are exactly the spectral values of the service.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

import numpy as np

from .cumulative import INF, CumVec, ExtNat, ext_from_json, ext_to_json, monus
from .errors import CausalityError, DomainError, ImmediateGuaranteeError
from .worstcase import EnumBounds, ServiceState, Spectrum, TableService, spectrum_oracle

DEFAULT_HORIZON = 256


def _freeze(rows) -> tuple:
    return tuple(tuple(INF if v == INF else int(v) for v in row) for row in rows)


@dataclass(frozen=True)
class CumulativeMatrix:
    """Upper-triangular matrix with non-decreasing rows, indices ``0..g``."""

    rows: tuple

    def __post_init__(self):
        rows = _freeze(self.rows)
        object.__setattr__(self, "rows", rows)
        n = len(rows)
        if n < 2 or any(len(r) != n for r in rows):
            raise DomainError("matrix must be square with horizon g >= 1")
        for i, row in enumerate(rows):
            if any(row[j] != 0 for j in range(i + 1)):
                raise DomainError(f"row {i} must vanish on and below the diagonal")
            if any(b < a for a, b in zip(row, row[1:])):
                raise DomainError(f"row {i} must be non-decreasing")

    @property
    def g(self) -> int:
        return len(self.rows) - 1

    def __getitem__(self, ij) -> ExtNat:
        i, j = ij
        if i >= j or i > self.g:
            return 0
        return self.rows[i][min(j, self.g)]

    def as_array(self) -> np.ndarray:
        return np.array(self.rows, dtype=float)

    def to_json(self, b: int = 0, form: str = "cumulative") -> dict:
        return {
            "g": self.g,
            "rows": [[ext_to_json(v) for v in row] for row in self.rows],
            "b": b,
            "form": form,
        }


@dataclass(frozen=True)
class SpectralMatrix(CumulativeMatrix):
    """Cumulative matrix that also lists the spectral values for backlog ``b``.

    Columns are non-increasing and ``s_ij <= (s_0j - b)^+`` for ``i > 0``.
    """

    b: int = 0

    def __post_init__(self):
        super().__post_init__()
        rows, g = self.rows, self.g
        for j in range(g + 1):
            for i in range(g):
                if rows[i + 1][j] > rows[i][j]:
                    raise DomainError(f"column {j} increases at row {i}")
            cap = monus(rows[0][j], self.b)
            for i in range(1, g + 1):
                if rows[i][j] > cap:
                    raise DomainError(f"s[{i}][{j}] exceeds (s[0][{j}] - b)^+")

    def to_json(self, b: int | None = None, form: str = "spectral") -> dict:
        return super().to_json(self.b if b is None else b, form)


def matrix_from_json(obj) -> tuple[CumulativeMatrix, int]:
    rows = [[ext_from_json(v) for v in row] for row in obj["rows"]]
    b = int(obj.get("b", 0))
    if "g" in obj and int(obj["g"]) != len(rows) - 1:
        raise DomainError("declared g does not match the row count")
    if obj.get("form", "cumulative") == "spectral":
        return SpectralMatrix(rows, b), b
    return CumulativeMatrix(rows), b


def step_matrix(delay: int, g: int) -> SpectralMatrix:
    """s_ij = 1 when j - i > delay: the hull of a single-task service."""
    rows = [[1 if j - i > delay else 0 for j in range(g + 1)] for i in range(g + 1)]
    return SpectralMatrix(rows, 0)


def rate_matrix(rate: int, g: int) -> CumulativeMatrix:
    """m_ij = rate * (j - i)^+."""
    return CumulativeMatrix([[rate * max(j - i, 0) for j in range(g + 1)] for i in range(g + 1)])


# ---------------------------------------------------------------------------
# Operations


def evaluate(M: CumulativeMatrix, q: CumVec) -> CumVec:
    """psi(q) = q (x) M."""
    g = M.g
    qs = q.values(g + 1)
    out = []
    for j in range(g + 1):
        out.append(min(qs[i] + M.rows[i][j] for i in range(j + 1)))
    return CumVec(tuple(out), 0)


def eval_batch(M: CumulativeMatrix, qs: np.ndarray, width: int) -> np.ndarray:
    """Vectorized :func:`evaluate` over rows ``q_0 .. q_H`` of ``qs``."""
    g = M.g
    cols = g + 1
    if qs.shape[1] < cols:
        pad = np.repeat(qs[:, -1:], cols - qs.shape[1], axis=1)
        qs = np.concatenate([qs, pad], axis=1)
    A = M.as_array()
    A[np.tril_indices(cols, k=-1)] = np.inf
    psi = (qs[:, :cols, None].astype(float) + A[None]).min(axis=1)
    if width > cols:
        psi = np.concatenate([psi, np.repeat(psi[:, -1:], width - cols, axis=1)], axis=1)
    return psi[:, :width]


def to_spectral(M: CumulativeMatrix, b: int) -> SpectralMatrix:
    """s_ij = min{(m_0j - b delta_i)^+, min over k <= i of m_kj}."""
    g = M.g
    rows = []
    for i in range(g + 1):
        row = []
        for j in range(g + 1):
            colmin = min(M.rows[k][j] for k in range(i + 1))
            head = monus(M.rows[0][j], b if i > 0 else 0)
            row.append(min(head, colmin))
        rows.append(row)
    return SpectralMatrix(rows, b)


def spectra(S: SpectralMatrix, q: int | None = None) -> Spectrum:
    """The spectrum (S itself) or, given the queue ``q``, the conditional spectrum."""
    if q is None:
        return Spectrum(S.rows)
    g = S.g
    rows = []
    for i in range(g + 1):
        if i == 0:
            rows.append(tuple(min(S.rows[0][j], q + S.rows[1][j]) for j in range(g + 1)))
        else:
            rows.append(tuple(min(monus(S.rows[0][j], q), S.rows[i][j]) for j in range(g + 1)))
    return Spectrum(tuple(rows))


def _check_io(p: ExtNat, q: int, d: int) -> None:
    if d > q:
        raise CausalityError(f"d = {d} exceeds q = {q}")
    if d < p:
        raise ImmediateGuaranteeError(f"d = {d} is below the obligation p = {p}")


def update(M: CumulativeMatrix, b: int, a: int, d: int) -> tuple[CumulativeMatrix, int]:
    """Cumulative matrix of the service after one slot, and the new backlog."""
    q = a + b
    _check_io(min(M[0, 1], q), q, d)
    g = M.g
    rows = []
    for i in range(g + 1):
        if i == 0:
            rows.append([monus(min(M[0, j + 1], q + M[1, j + 1]), d) for j in range(g + 1)])
        else:
            rows.append([M[i + 1, j + 1] for j in range(g + 1)])
    return CumulativeMatrix(rows), q - d


def spectral_update(S: SpectralMatrix, a: int, d: int) -> SpectralMatrix:
    """Spectral matrix of the service after one slot, computed directly."""
    q = a + S.b
    _check_io(min(S[0, 1], q), q, d)
    g = S.g
    rows = []
    for i in range(g + 1):
        if i == 0:
            rows.append([monus(min(S[0, j + 1], q + S[1, j + 1]), d) for j in range(g + 1)])
        else:
            rows.append([min(monus(S[0, j + 1], q), S[i + 1, j + 1]) for j in range(g + 1)])
    return SpectralMatrix(rows, q - d)


def compose(MI: CumulativeMatrix, MII: CumulativeMatrix, bII: int) -> CumulativeMatrix:
    """Matrix of two servers in tandem: (M^I + b^II Delta) (x) M^II.

    ``b^II`` is the backlog held by the second server.  The product of two
    spectral matrices need not be spectral, so the result is returned in
    cumulative form.
    """
    if MI.g != MII.g:
        raise DomainError("composed matrices must share the horizon g")
    g = MI.g
    A = MI.as_array()
    A[0, 1:] += bII
    B = MII.as_array()
    rows = []
    for i in range(g + 1):
        vals = (A[i][:, None] + B).min(axis=0)
        rows.append([INF if v == np.inf else int(v) for v in vals])
    return CumulativeMatrix(rows)


# ---------------------------------------------------------------------------
# Service state


@dataclass(frozen=True)
class MinPlusService(ServiceState):
    """A min-plus service state: matrix plus backlog."""

    matrix: CumulativeMatrix
    b: int = 0
    kind = "min_plus"
    deadline_rigid = True

    @classmethod
    def from_spectral(cls, S: SpectralMatrix) -> "MinPlusService":
        return cls(S, S.b)

    @cached_property
    def spectral(self) -> SpectralMatrix:
        M = self.matrix
        if isinstance(M, SpectralMatrix) and M.b == self.b:
            return M
        return to_spectral(M, self.b)

    def _eval(self, q):
        return evaluate(self.matrix, q)

    def eval_batch(self, qs, width):
        return eval_batch(self.matrix, qs, width)

    def immediate(self, q):
        return min(self.matrix[0, 1], q)

    def _update(self, q, d):
        if isinstance(self.matrix, SpectralMatrix) and self.matrix.b == self.b:
            return MinPlusService.from_spectral(spectral_update(self.matrix, q - self.b, d))
        M, bdot = update(self.matrix, self.b, q - self.b, d)
        return MinPlusService(M, bdot)

    def spectrum_row(self, i):
        S = self.spectral
        if i >= S.g:
            return CumVec.zero()
        return CumVec(S.rows[i][i:], 0)

    @property
    def row_threshold(self):
        return self.matrix.g

    def spectrum_row_limit(self):
        return CumVec.zero()

    def spectrum(self, g=None):
        if g is None or g == self.matrix.g:
            return Spectrum(self.spectral.rows)
        return super().spectrum(g)

    def cond_rows(self, q):
        S = self.spectral
        g = S.g
        row0 = [min(S.rows[0][j], q + S.rows[1][j]) for j in range(g + 1)]
        row1 = [min(monus(S.rows[0][j], q), S.rows[1][j]) for j in range(g + 1)]
        return CumVec(tuple(row0), 0), CumVec(tuple(row1), 0)

    def oracle_exact(self, bounds):
        S = self.spectral
        top = max(S.rows[0])
        return bounds.horizon >= S.g and bounds.burst is not None and top != INF and bounds.burst >= top

    def to_json(self):
        form = "spectral" if isinstance(self.matrix, SpectralMatrix) else "cumulative"
        return {"kind": self.kind, "matrix": self.matrix.to_json(self.b, form), "b": self.b}


def spectral_hull(system: Sequence[ServiceState], bounds: EnumBounds | None = None) -> list[SpectralMatrix]:
    """Per service, the spectral matrix of its spectrum.

    The min-plus service of that matrix dominates the original service and
    shares its spectrum.  Structured kinds are handled in closed form on the
    horizon ``bounds.horizon``; table services use the enumeration oracle on
    their own domain.
    """
    out = []
    for s in system:
        if isinstance(s, MinPlusService):
            out.append(s.spectral)
        elif isinstance(s, TableService):
            out.append(SpectralMatrix(spectrum_oracle(s).entries, s.b))
        else:
            g = bounds.horizon if bounds is not None else DEFAULT_HORIZON
            out.append(SpectralMatrix(s.spectrum(g).entries, s.b))
    return out


__all__ = [
    "CumulativeMatrix",
    "SpectralMatrix",
    "MinPlusService",
    "evaluate",
    "eval_batch",
    "to_spectral",
    "spectra",
    "update",
    "spectral_update",
    "compose",
    "spectral_hull",
    "step_matrix",
    "rate_matrix",
    "matrix_from_json",
]
