"""Smallest horizontal/vertical periods of subrectangles and the run test.

The fast path labels each column (or row) of a rectangle with an exact
integer id and runs a failure function over the id sequence. The
``*_naive`` functions compare columns cell by cell and serve as oracles.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .grid import Grid2D, Rect

MAXIMALITY_MODES = ("period", "periodicity")


@dataclass(frozen=True)
class PeriodPair:
    h: int
    v: int


def failure_function(seq: Sequence) -> list[int]:
    """Border lengths: ``fail[i]`` is the longest proper border of ``seq[:i+1]``."""
    fail = [0] * len(seq)
    k = 0
    for i in range(1, len(seq)):
        while k and seq[i] != seq[k]:
            k = fail[k - 1]
        if seq[i] == seq[k]:
            k += 1
        fail[i] = k
    return fail


def smallest_period(seq: Sequence) -> int:
    """Least p >= 1 with seq[i] == seq[i+p] wherever both exist."""
    if len(seq) == 0:
        raise ValueError("empty sequence has no period")
    return len(seq) - failure_function(seq)[-1]


def row_ids(block: np.ndarray) -> list[int]:
    """Exact labels for the rows of ``block``: equal rows share a label."""
    _, inverse = np.unique(block, axis=0, return_inverse=True)
    return inverse.ravel().tolist()


def column_ids(block: np.ndarray) -> list[int]:
    return row_ids(block.T)


def smallest_h_period(g: Grid2D, r: Rect) -> int:
    return smallest_period(column_ids(g.block(r)))


def smallest_v_period(g: Grid2D, r: Rect) -> int:
    return smallest_period(row_ids(g.block(r)))


def periods(g: Grid2D, r: Rect) -> PeriodPair:
    block = g.block(r)
    return PeriodPair(smallest_period(column_ids(block)), smallest_period(row_ids(block)))


def smallest_h_period_naive(g: Grid2D, r: Rect) -> int:
    cols = [tuple(c) for c in g.block(r).T.tolist()]
    return _naive_period(cols)


def smallest_v_period_naive(g: Grid2D, r: Rect) -> int:
    rows = [tuple(c) for c in g.block(r).tolist()]
    return _naive_period(rows)


def _naive_period(items: list) -> int:
    n = len(items)
    for p in range(1, n):
        if all(items[i] == items[i + p] for i in range(n - p)):
            return p
    return n


def is_h_periodic(g: Grid2D, r: Rect) -> bool:
    return 2 * smallest_h_period(g, r) <= r.width


def is_v_periodic(g: Grid2D, r: Rect) -> bool:
    return 2 * smallest_v_period(g, r) <= r.height


def extensions(g: Grid2D, r: Rect) -> list[Rect]:
    """The one-row/one-column extensions of ``r`` that stay inside ``g``."""
    out = []
    if r.left > 0:
        out.append(Rect(r.top, r.left - 1, r.height, r.width + 1))
    if r.right < g.cols:
        out.append(Rect(r.top, r.left, r.height, r.width + 1))
    if r.top > 0:
        out.append(Rect(r.top - 1, r.left, r.height + 1, r.width))
    if r.bottom < g.rows:
        out.append(Rect(r.top, r.left, r.height + 1, r.width))
    return out


def is_run(g: Grid2D, r: Rect, maximality: str = "period") -> bool:
    """Whether ``r`` is a 2D run of ``g``.

    ``r`` must be h- and v-periodic. With ``maximality="period"`` every
    in-grid one-cell extension must raise the smallest horizontal or
    vertical period; with ``"periodicity"`` every extension must merely
    stop being both h- and v-periodic.
    """
    if maximality not in MAXIMALITY_MODES:
        raise ValueError(f"maximality must be one of {MAXIMALITY_MODES}")
    g.check_rect(r)
    pp = periods(g, r)
    if 2 * pp.h > r.width or 2 * pp.v > r.height:
        return False
    for ext in extensions(g, r):
        ep = periods(g, ext)
        if maximality == "period":
            if ep.h <= pp.h and ep.v <= pp.v:
                return False
        elif 2 * ep.h <= ext.width and 2 * ep.v <= ext.height:
            return False
    return True


def is_run_naive(g: Grid2D, r: Rect) -> bool:
    """Cell-wise version of ``is_run`` with the default maximality."""
    g.check_rect(r)
    p = smallest_h_period_naive(g, r)
    if 2 * p > r.width:
        return False
    q = smallest_v_period_naive(g, r)
    if 2 * q > r.height:
        return False
    for ext in extensions(g, r):
        if smallest_h_period_naive(g, ext) <= p and smallest_v_period_naive(g, ext) <= q:
            return False
    return True
