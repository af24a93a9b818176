"""Check a generated family against its witnesses and predicted counts."""

from __future__ import annotations

import time
from collections import Counter
from dataclasses import asdict, dataclass, field

import numpy as np

from . import families, formulas
from .grid import Grid2D, Rect
from .periodicity import is_run
from .repetitions import (
    DEFAULT_ORACLE_CAP,
    count_distinct_contents,
    count_distinct_quartics,
    count_distinct_quartics_naive,
    count_distinct_tandems,
    count_distinct_tandems_naive,
    enumerate_runs,
    enumerate_runs_naive,
    is_horizontal_tandem,
    is_quartic,
    quartic_root,
    tandem_root,
)

MODES = ("fast", "oracle")
MAX_LISTED_FAILURES = 20


@dataclass
class VerifyReport:
    kind: str
    level: int
    dims: tuple[int, int]
    predicted: dict
    measured: dict | None
    witnesses_total: int
    witnesses_verified: int
    witnesses_failed: int
    oracle_mode: str
    elapsed_ms: float = 0.0
    checks: dict = field(default_factory=dict)
    failed_rects: list = field(default_factory=list)

    @property
    def verdict(self) -> str:
        return "pass" if self.witnesses_failed == 0 and all(self.checks.values()) else "fail"

    def to_dict(self) -> dict:
        d = asdict(self)
        d["dims"] = list(self.dims)
        d["verdict"] = self.verdict
        return d


def measure(kind: str, g: Grid2D, mode: str = "fast", cap: int | None = None, seed: int | None = None):
    """Full repetition count matching the family's witness kind."""
    oracle = mode == "oracle"
    if kind == "tandem":
        tc = count_distinct_tandems_naive(g, cap) if oracle else count_distinct_tandems(g, seed)
        return {"tandems_h": tc.horizontal, "tandems_v": tc.vertical}
    if kind in ("quartic", "quartic_binary"):
        return {"quartics": count_distinct_quartics_naive(g, cap) if oracle else count_distinct_quartics(g, seed)}
    runs = enumerate_runs_naive(g, cap) if oracle else enumerate_runs(g)
    return {"runs": len(runs), "_rects": {r.rect for r in runs}}


def _predicted(kind: str, level: int, id_bits: int | None) -> dict:
    if kind == "tandem":
        return {"witnesses": formulas.tandem_counts(level, id_bits).witness_count}
    if kind == "quartic":
        qc = formulas.quartic_counts(level)
        return {"witnesses": qc.final.Q, "M": qc.final.M, "S": qc.final.S}
    if kind == "quartic_binary":
        bq = formulas.binary_quartic_counts(level)
        return {"witnesses": bq.final, "k": bq.k, "n_prime": bq.n_prime,
                "lower_bound": float(bq.lower_bound)}
    rc = formulas.run_counts(level)
    return {"witnesses": rc.total,
            "X": [lv.X for lv in rc.levels], "Y": [lv.Y for lv in rc.levels]}


def _offset_samples(g: Grid2D, k: int, samples: int, seed: int | None) -> bool:
    rng = np.random.default_rng(seed)
    rows, cols = g.shape
    for _ in range(samples):
        h = int(rng.integers(k, rows + 1))
        w = int(rng.integers(k, cols + 1))
        r = Rect(int(rng.integers(0, rows - h + 1)), int(rng.integers(0, cols - w + 1)), h, w)
        if families.recover_offsets(g, r, k) != (r.top % k, r.left % k):
            return False
    return True


def verify_family(kind: str, level: int, mode: str = "fast", cap: int | None = None,
                  seed: int | None = None, full_count: bool | None = None,
                  offset_samples: int = 500, id_bits: int | None = None) -> VerifyReport:
    """Generate ``kind`` at ``level``, check every witness, compare counts.

    ``full_count=None`` measures the full repetition count only when the
    grid has at most ``cap`` cells.
    """
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}")
    start = time.perf_counter()
    cap = DEFAULT_ORACLE_CAP if cap is None else cap
    if kind == "tandem":
        g = families.tandem_family(level, id_bits)
        ws = families.tandem_witnesses(level, id_bits)
    else:
        g = families.generate(kind, level)
        ws = families.witnesses(kind, level)
    predicted = _predicted(kind, level, id_bits)

    check = {"tandem": is_horizontal_tandem, "quartic": is_quartic,
             "quartic_binary": is_quartic, "run": is_run}[kind]
    failed = [r for r in ws.rects if not check(g, r)]

    checks = {"cardinality": len(ws) == predicted["witnesses"]}
    if kind == "tandem":
        checks["distinct"] = count_distinct_contents(g, [tandem_root(r) for r in ws.rects]) == len(ws)
    elif kind in ("quartic", "quartic_binary"):
        checks["distinct"] = count_distinct_contents(g, [quartic_root(r) for r in ws.rects]) == len(ws)
    else:
        checks["distinct"] = len(set(ws.rects)) == len(ws)
        tally = Counter((c.level, c.primed) for c in families.run_copies(level))
        checks["copy_bookkeeping"] = (
            [tally[(i, False)] for i in range(1, level + 1)] == predicted["X"]
            and [tally[(i, True)] for i in range(1, level + 1)] == predicted["Y"])
    if kind == "quartic_binary":
        k = predicted["k"]
        checks["offset_recovery"] = _offset_samples(g, k, offset_samples, seed)
        if level >= 4:
            bq = formulas.binary_quartic_counts(level)
            checks["exceeds_lower_bound"] = bq.final > bq.lower_bound

    measured = None
    if full_count or (full_count is None and g.rows * g.cols <= cap):
        measured = measure(kind, g, mode, cap, seed)
        key = {"tandem": "tandems_h", "run": "runs"}.get(kind, "quartics")
        checks["measured_at_least_predicted"] = measured[key] >= predicted["witnesses"]
        if kind == "run":
            found = measured.pop("_rects")
            checks["witnesses_enumerated"] = all(r in found for r in ws.rects)

    return VerifyReport(
        kind=kind, level=level, dims=g.shape, predicted=predicted, measured=measured,
        witnesses_total=len(ws), witnesses_verified=len(ws) - len(failed),
        witnesses_failed=len(failed), oracle_mode=mode,
        elapsed_ms=round((time.perf_counter() - start) * 1000, 1), checks=checks,
        failed_rects=[r.as_tuple() for r in failed[:MAX_LISTED_FAILURES]])
