"""Exhaustive counting of distinct tandems and quartics, and run enumeration.

Every detector has two implementations. The default one is vectorised
over all positions of a given block size and deduplicates block contents
by fingerprint, certifying each fingerprint class cell by cell. The
``*_naive`` oracles loop over every candidate rectangle and compare
cells directly; they refuse grids larger than ``DEFAULT_ORACLE_CAP`` cells
unless told otherwise.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from .grid import Fingerprinter, Grid2D, Rect, as_grid
from .periodicity import row_ids, smallest_period

log = logging.getLogger(__name__)

DEFAULT_ORACLE_CAP = 40 * 40


class OracleCapExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class TandemCounts:
    horizontal: int
    vertical: int

    @property
    def combined(self) -> int:
        return self.horizontal + self.vertical


@dataclass(frozen=True, order=True)
class RunRecord:
    rect: Rect
    h_period: int
    v_period: int


# --- predicates on single rectangles -------------------------------------

def is_horizontal_tandem(g: Grid2D, r: Rect) -> bool:
    if r.width % 2:
        return False
    block = g.block(r)
    half = r.width // 2
    return bool(np.array_equal(block[:, :half], block[:, half:]))


def is_vertical_tandem(g: Grid2D, r: Rect) -> bool:
    return is_horizontal_tandem(g.transpose(), r.transpose())


def is_quartic(g: Grid2D, r: Rect) -> bool:
    if r.width % 2 or r.height % 2:
        return False
    block = g.block(r)
    a, b = r.height // 2, r.width // 2
    w = block[:a, :b]
    return bool(np.array_equal(w, block[:a, b:])
                and np.array_equal(w, block[a:, :b])
                and np.array_equal(w, block[a:, b:]))


def tandem_root(r: Rect) -> Rect:
    """The left block W of a horizontal tandem."""
    return Rect(r.top, r.left, r.height, r.width // 2)


def quartic_root(r: Rect) -> Rect:
    """The top-left block W of a quartic."""
    return Rect(r.top, r.left, r.height // 2, r.width // 2)


def count_distinct_contents(g: Grid2D, rects: list[Rect], fingerprinter: Fingerprinter | None = None) -> int:
    """Number of distinct block contents among ``rects`` (certified)."""
    fp = fingerprinter or Fingerprinter(g)
    by_shape: dict[tuple[int, int], list[Rect]] = {}
    for r in rects:
        by_shape.setdefault(r.shape, []).append(g.check_rect(r))
    total = 0
    for (h, w), group in by_shape.items():
        ts = np.fromiter((r.top for r in group), dtype=np.int64, count=len(group))
        ls = np.fromiter((r.left for r in group), dtype=np.int64, count=len(group))
        total += _distinct(g.cells, fp, ts, ls, h, w)
    return total


# --- fast detectors ------------------------------------------------------

def _distinct(a: np.ndarray, fp: Fingerprinter, ts: np.ndarray, ls: np.ndarray, h: int, w: int) -> int:
    keys = fp.keys(ts, ls, h, w)
    uniq, first, inverse = np.unique(keys, return_index=True, return_inverse=True)
    if len(uniq) == len(keys):
        return len(uniq)
    members = sliding_window_view(a, (h, w))[ts, ls]
    if np.array_equal(members, members[first][inverse.ravel()]):
        return len(uniq)
    log.warning("fingerprint collision among %dx%d blocks; falling back to exact dedup", h, w)
    return len(np.unique(members.reshape(len(ts), -1), axis=0))


def _row_match(a: np.ndarray, b: int) -> np.ndarray:
    """m[r, l] is True iff a[r, l:l+b] == a[r, l+b:l+2b]."""
    d = a[:, :-b] == a[:, b:]
    return sliding_window_view(d, b, axis=1).all(axis=2)


def _count_horizontal(g: Grid2D, seed: int | None) -> int:
    a = g.cells
    rows, cols = a.shape
    fp = Fingerprinter(g, seed)
    total = 0
    for b in range(1, cols // 2 + 1):
        rm = _row_match(a, b)
        cur = rm
        for h in range(1, rows + 1):
            if h > 1:
                cur = cur[:-1] & rm[h - 1:]
            if not cur.any():
                break
            ts, ls = np.nonzero(cur)
            total += _distinct(a, fp, ts, ls, h, b)
    return total


def count_distinct_tandems(g, seed: int | None = None) -> TandemCounts:
    g = as_grid(g)
    return TandemCounts(_count_horizontal(g, seed), _count_horizontal(g.transpose(), seed))


def count_distinct_quartics(g, seed: int | None = None) -> int:
    g = as_grid(g)
    a = g.cells
    rows, cols = a.shape
    fp = Fingerprinter(g, seed)
    hmatch = {b: _row_match(a, b) for b in range(1, cols // 2 + 1)}
    vmatch = {q: _row_match(a.T, q).T for q in range(1, rows // 2 + 1)}
    total = 0
    for q, vm in vmatch.items():
        for b, hm in hmatch.items():
            rows_ok = sliding_window_view(hm, 2 * q, axis=0).all(axis=2)
            cols_ok = sliding_window_view(vm[:, :cols - b], b, axis=1).all(axis=2)
            hits = rows_ok & cols_ok
            if hits.any():
                ts, ls = np.nonzero(hits)
                total += _distinct(a, fp, ts, ls, q, b)
    return total


def _maximal_repetitions(ids: np.ndarray):
    """1D runs of an id sequence as (start, length, smallest period)."""
    n = len(ids)
    seq = ids.tolist()
    for p in range(1, n // 2 + 1):
        eq = np.concatenate(([False], ids[:-p] == ids[p:], [False]))
        edges = np.flatnonzero(eq[1:] != eq[:-1])
        for s, e in zip(edges[::2], edges[1::2]):
            if e - s >= p and smallest_period(seq[s:e + p]) == p:
                yield int(s), int(e - s + p), p


def enumerate_runs(g) -> list[RunRecord]:
    """All 2D runs, sorted by rectangle.

    For each band of rows the columns are relabelled exactly; a run's
    column range is then a 1D run of the label sequence, and only its
    vertical period and vertical maximality remain to be checked.
    """
    g = as_grid(g)
    a = g.cells
    rows, cols = a.shape
    out = []
    for t in range(rows):
        ids = np.zeros(cols, dtype=np.int64)
        for h in range(1, rows - t + 1):
            ids = np.unique(ids * g.alphabet + a[t + h - 1], return_inverse=True)[1].ravel()
            if h < 2:
                continue
            bottom = t + h
            for left, width, p in _maximal_repetitions(ids):
                right = left + width
                q = smallest_period(row_ids(a[t:bottom, left:right]))
                if 2 * q > h:
                    continue
                if t > 0 and np.array_equal(a[t - 1, left:right], a[t - 1 + q, left:right]):
                    continue
                if bottom < rows and np.array_equal(a[bottom, left:right], a[bottom - q, left:right]):
                    continue
                out.append(RunRecord(Rect(t, left, h, width), p, q))
    out.sort()
    return out


# --- oracles -------------------------------------------------------------

def _check_cap(g: Grid2D, cap: int | None):
    cap = DEFAULT_ORACLE_CAP if cap is None else cap
    if g.rows * g.cols > cap:
        raise OracleCapExceeded(
            f"oracle refuses a {g.rows}x{g.cols} grid ({g.rows * g.cols} cells > cap {cap})")


def _naive_horizontal(rows: list[list[int]]) -> int:
    m, n = len(rows), len(rows[0])
    seen = set()
    for t in range(m):
        for h in range(1, m - t + 1):
            band = rows[t:t + h]
            for b in range(1, n // 2 + 1):
                for left in range(n - 2 * b + 1):
                    if all(r[left:left + b] == r[left + b:left + 2 * b] for r in band):
                        seen.add(tuple(tuple(r[left:left + b]) for r in band))
    return len(seen)


def count_distinct_tandems_naive(g, cap: int | None = None) -> TandemCounts:
    g = as_grid(g)
    _check_cap(g, cap)
    return TandemCounts(_naive_horizontal(g.to_lists()), _naive_horizontal(g.transpose().to_lists()))


def count_distinct_quartics_naive(g, cap: int | None = None) -> int:
    g = as_grid(g)
    _check_cap(g, cap)
    rows = g.to_lists()
    m, n = g.shape
    seen = set()
    for t in range(m):
        for q in range(1, (m - t) // 2 + 1):
            for left in range(n):
                for b in range(1, (n - left) // 2 + 1):
                    w = [r[left:left + b] for r in rows[t:t + q]]
                    if all(w[i] == rows[t + i][left + b:left + 2 * b]
                           and w[i] == rows[t + q + i][left:left + b]
                           and w[i] == rows[t + q + i][left + b:left + 2 * b]
                           for i in range(q)):
                        seen.add(tuple(tuple(x) for x in w))
    return len(seen)


def _naive_periods(rows: list[list[int]], t: int, left: int, h: int, w: int) -> tuple[int, int]:
    block = [r[left:left + w] for r in rows[t:t + h]]
    cols = list(zip(*block))
    return _first_period(cols), _first_period(block)


def _first_period(items: list) -> int:
    n = len(items)
    for p in range(1, n):
        if all(items[i] == items[i + p] for i in range(n - p)):
            return p
    return n


def enumerate_runs_naive(g, cap: int | None = None) -> list[RunRecord]:
    g = as_grid(g)
    _check_cap(g, cap)
    rows = g.to_lists()
    m, n = g.shape
    out = []
    for t in range(m):
        for h in range(2, m - t + 1):
            for left in range(n):
                for w in range(2, n - left + 1):
                    p, q = _naive_periods(rows, t, left, h, w)
                    if 2 * p > w or 2 * q > h:
                        continue
                    exts = []
                    if left > 0:
                        exts.append((t, left - 1, h, w + 1))
                    if left + w < n:
                        exts.append((t, left, h, w + 1))
                    if t > 0:
                        exts.append((t - 1, left, h + 1, w))
                    if t + h < m:
                        exts.append((t, left, h + 1, w))
                    maximal = True
                    for ext in exts:
                        ep, eq = _naive_periods(rows, *ext)
                        if ep <= p and eq <= q:
                            maximal = False
                            break
                    if maximal:
                        out.append(RunRecord(Rect(t, left, h, w), p, q))
    out.sort()
    return out
