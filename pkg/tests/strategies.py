"""Hypothesis strategies and small brute-force helpers shared by the tests."""

from __future__ import annotations

from hypothesis import strategies as st

from statesched.cumulative import INF, CumVec


@st.composite
def cumvecs(draw, max_len: int = 6, max_inc: int = 4, allow_inf: bool = True):
    incs = draw(st.lists(st.integers(0, max_inc), min_size=0, max_size=max_len))
    tails = [0, 1, 2, 3] + ([INF] if allow_inf else [])
    tail = draw(st.sampled_from(tails))
    return CumVec.from_increments(incs, tail)


finite_cumvecs = cumvecs(allow_inf=False)


def brute_values(x: CumVec, n: int) -> list:
    """Entries of x computed by walking increments (no prefix shortcuts)."""
    out = []
    for j in range(n):
        if j < len(x.prefix):
            out.append(x.prefix[j])
        elif x.tail_inc == INF:
            out.append(INF)
        else:
            out.append(out[-1] + x.tail_inc)
    return out
