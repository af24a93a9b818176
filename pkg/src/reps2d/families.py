"""Generators for the extremal tandem, quartic and run families.

Besides each grid, the module emits the explicit witness rectangles whose
count gives the family's lower bound, and the binary gadget machinery
used to shrink the quartic family to two letters.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass
from typing import Iterator

import numpy as np

from . import formulas
from .grid import CELL_DTYPE, Grid2D, Rect

KINDS = ("tandem", "quartic", "quartic_binary", "run")
CLAIMED_KIND = {
    "tandem": "tandem-horizontal",
    "quartic": "quartic",
    "quartic_binary": "quartic",
    "run": "run",
}
MAX_CELLS = 1 << 26


class MalformedGridError(ValueError):
    """The grid does not have the structure of the expected family."""


@dataclass(frozen=True)
class FamilySpec:
    kind: str
    level: int
    n: int
    sigma: int | None = None
    k: int | None = None
    n_prime: int | None = None
    id_bits: int | None = None

    @property
    def side(self) -> int:
        """Side length of the generated square grid."""
        return self.n_prime if self.kind == "quartic_binary" else self.n

    def header(self) -> str:
        fields = " ".join(f"{k}={v}" for k, v in asdict(self).items() if v is not None)
        return f"# {fields}"


def family_spec(kind: str, level: int, id_bits: int | None = None) -> FamilySpec:
    if kind not in KINDS:
        raise ValueError(f"unknown family kind {kind!r}; expected one of {KINDS}")
    min_level = 2 if kind == "quartic_binary" else 1
    if level < min_level:
        raise ValueError(f"{kind} family needs level >= {min_level}, got {level}")
    if kind == "tandem":
        spec = FamilySpec(kind, level, formulas.tandem_size(level, id_bits), id_bits=id_bits)
    elif kind == "quartic":
        spec = FamilySpec(kind, level, formulas.quartic_size(level), sigma=formulas.quartic_counts(level).sigma)
    elif kind == "quartic_binary":
        n = formulas.quartic_size(level)
        sigma = level * 3 ** (level - 1)
        k = formulas.gadget_size(sigma)
        spec = FamilySpec(kind, level, n, sigma=sigma, k=k, n_prime=n * k)
    else:
        spec = FamilySpec(kind, level, formulas.run_size(level))
    if spec.side ** 2 > MAX_CELLS:
        raise MemoryError(f"{kind} level {level} needs a {spec.side}x{spec.side} grid; refusing")
    return spec


@dataclass
class WitnessSet:
    spec: FamilySpec
    rects: list[Rect]
    claimed_kind: str

    def __len__(self):
        return len(self.rects)

    def to_text(self) -> str:
        lines = [self.spec.header(), f"# claimed={self.claimed_kind} count={len(self.rects)}"]
        lines += [f"{r.top} {r.left} {r.height} {r.width}" for r in self.rects]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> WitnessSet:
        meta = {}
        rects = []
        for line in text.splitlines():
            line = line.strip()
            if line.startswith("#"):
                for item in line[1:].split():
                    key, _, value = item.partition("=")
                    meta[key] = value
            elif line:
                rects.append(Rect(*(int(v) for v in line.split())))
        ints = {k: int(meta[k]) for k in ("level", "n", "sigma", "k", "n_prime", "id_bits") if k in meta}
        spec = FamilySpec(meta["kind"], **ints)
        if "count" in meta and int(meta["count"]) != len(rects):
            raise ValueError(f"header says {meta['count']} rects, found {len(rects)}")
        return cls(spec, rects, meta.get("claimed", CLAIMED_KIND[spec.kind]))


def generate(kind: str, level: int) -> Grid2D:
    return {
        "tandem": tandem_family,
        "quartic": quartic_family,
        "quartic_binary": quartic_binary_family,
        "run": run_family,
    }[kind](level)


def witnesses(kind: str, level: int) -> WitnessSet:
    return {
        "tandem": tandem_witnesses,
        "quartic": quartic_witnesses,
        "quartic_binary": quartic_binary_witnesses,
        "run": run_witnesses,
    }[kind](level)


# --- tandems -------------------------------------------------------------

def min_id_bits(level: int) -> int:
    """Fewest row-id bits b with 2**b >= 3*2**level + 2*b (all rows distinct)."""
    b = level
    while 2 ** b < formulas.tandem_size(level, b):
        b += 1
    return b


def tandem_family(level: int, id_bits: int | None = None) -> Grid2D:
    """Rows ``marker id marker id marker``.

    ``marker`` is 2**level cells ``0...01``; ``id`` is the row index (from
    0) in ``id_bits`` binary digits, most significant first. The default
    ``id_bits=level`` keeps the square side at 3*2**level + 2*level, in
    which case only the low ``level`` bits of the row index fit and rows
    repeat with period 2**level; pass ``min_id_bits(level)`` for a grid
    whose rows are all distinct.
    """
    spec = family_spec("tandem", level, id_bits)
    bits = level if id_bits is None else id_bits
    n = spec.n
    marker = [0] * (2 ** level - 1) + [1]
    rows = []
    for i in range(n):
        ident = [(i >> (bits - 1 - j)) & 1 for j in range(bits)]
        rows.append(marker + ident + marker + ident + marker)
    return Grid2D(rows, 2)


def tandem_witnesses(level: int, id_bits: int | None = None) -> WitnessSet:
    """One horizontal tandem per (first row, last row, start column in the first marker)."""
    spec = family_spec("tandem", level, id_bits)
    bits = level if id_bits is None else id_bits
    width = 2 * (2 ** level + bits)
    rects = [Rect(i, k, j - i + 1, width)
             for i in range(spec.n)
             for j in range(i, spec.n)
             for k in range(2 ** level)]
    return WitnessSet(spec, rects, CLAIMED_KIND["tandem"])


# --- quartics with a growing alphabet ------------------------------------

def _zero_range_starts(i: int, n: int) -> list[int]:
    """Left columns of the 3**i all-zero column ranges of A_i."""
    width = (n + 1) // 3 ** i  # N_i + 1
    return [j * width for j in range(3 ** i)]


def quartic_family(level: int) -> Grid2D:
    """The n x n array with n = 3**level - 1 over {0} and special letters.

    Level 1 is two rows with one special letter splitting the columns into
    three equal zero ranges. Each further level stacks three copies of the
    previous array (each copy with its own letters, numbered copy after
    copy) with a zero separating row between copies, then splits every zero
    range into three by writing a fresh letter where the two new separator
    columns cross the two separating rows.
    """
    spec = family_spec("quartic", level)
    n = spec.n
    N1 = (n - 2) // 3
    a = np.zeros((2, n), dtype=CELL_DTYPE)
    a[:, [N1, 2 * N1 + 1]] = 1
    letters = 1
    for i in range(2, level + 1):
        m_prev = a.shape[0]
        sep = np.zeros((1, n), dtype=CELL_DTYPE)
        copies = [np.where(a > 0, a + c * letters, 0) for c in range(3)]
        a = np.vstack([copies[0], sep, copies[1], sep, copies[2]])
        letters *= 3
        sub = (n + 1) // 3 ** i - 1  # N_i
        sep_rows = [m_prev, 2 * m_prev + 1]
        for c0 in _zero_range_starts(i - 1, n):
            letters += 1
            for r in sep_rows:
                a[r, [c0 + sub, c0 + 2 * sub + 1]] = letters
    assert letters == spec.sigma
    return Grid2D(a, letters + 1)


def _quartic_witness_rects(level: int, n: int, k: int) -> Iterator[Rect]:
    """Counted quartics of A_level, or of its k-fold gadget blow-up.

    With k == 1 these are the quartics of the lettered array itself.
    """
    qc = formulas.quartic_counts(level)
    M = {lv.i: lv.M for lv in qc.levels}
    N = {lv.i: lv.N for lv in qc.levels}

    def walk(i: int, row0: int):
        if i == 1:
            for s in range(k * N[1] + 1):
                yield Rect(row0 * k, s, 2 * k, 2 * k * (N[1] + 1))
            return
        for c in range(3):
            yield from walk(i - 1, row0 + c * (M[i - 1] + 1))
        height = 2 * k * (M[i - 1] + 1)
        width = 2 * k * (N[i] + 1)
        for c0 in _zero_range_starts(i - 1, n):
            for t in range(k * M[i - 1] + 1):
                for s in range(k * N[i] + 1):
                    yield Rect(row0 * k + t, c0 * k + s, height, width)

    yield from walk(level, 0)


def quartic_witnesses(level: int) -> WitnessSet:
    spec = family_spec("quartic", level)
    rects = list(_quartic_witness_rects(level, spec.n, 1))
    return WitnessSet(spec, rects, CLAIMED_KIND["quartic"])


# --- binary quartics -----------------------------------------------------

def gadget(c: int, k: int) -> Grid2D:
    """k x k binary block: zero first row/column, ones on the rest of the
    last row/column, and ``c`` in binary (row-major, MSB first) inside."""
    if k < 3:
        raise ValueError("gadget side must be at least 3")
    inner = (k - 2) ** 2
    if c < 0 or c.bit_length() > inner:
        raise ValueError(f"{c} does not fit in {inner} bits")
    b = np.zeros((k, k), dtype=CELL_DTYPE)
    b[k - 1, 1:] = 1
    b[1:, k - 1] = 1
    bits = [(c >> (inner - 1 - j)) & 1 for j in range(inner)]
    b[1:k - 1, 1:k - 1] = np.array(bits, dtype=CELL_DTYPE).reshape(k - 2, k - 2)
    return Grid2D(b, 2)


def blow_up(g: Grid2D, k: int) -> Grid2D:
    """Replace every cell holding c by ``gadget(c, k)``."""
    table = np.stack([gadget(c, k).cells for c in range(g.alphabet)])
    rows, cols = g.shape
    out = table[g.cells].transpose(0, 2, 1, 3).reshape(rows * k, cols * k)
    return Grid2D(out, 2)


def quartic_binary_family(level: int) -> Grid2D:
    spec = family_spec("quartic_binary", level)
    return blow_up(quartic_family(level), spec.k)


def quartic_binary_witnesses(level: int) -> WitnessSet:
    spec = family_spec("quartic_binary", level)
    rects = list(_quartic_witness_rects(level, spec.n, spec.k))
    return WitnessSet(spec, rects, CLAIMED_KIND["quartic_binary"])


def recover_offsets(g: Grid2D, r: Rect, k: int) -> tuple[int, int]:
    """(r.top mod k, r.left mod k) read off the contents of ``r`` alone.

    In a gadget blow-up the all-zero rows and columns are exactly those
    with index divisible by k, and every other row or column has a 1 in
    each window of k cells, so a rectangle at least k x k contains an
    all-zero row and column precisely at its aligned positions.
    """
    if r.height < k or r.width < k:
        raise ValueError(f"rectangle {r.shape} is smaller than {k}x{k}")
    block = g.block(r)
    zero_rows = np.flatnonzero(~block.any(axis=1))
    zero_cols = np.flatnonzero(~block.any(axis=0))
    if len(zero_rows) == 0 or len(zero_cols) == 0:
        raise MalformedGridError(f"no all-zero row/column inside {r}; not a gadget blow-up")
    return int(-zero_rows[0] % k), int(-zero_cols[0] % k)


# --- runs ----------------------------------------------------------------

@dataclass(frozen=True)
class RunCopy:
    level: int
    top: int
    left: int
    primed: bool


def _fill_antidiagonal(a: np.ndarray) -> np.ndarray:
    out = a.copy()
    n = out.shape[0]
    out[np.arange(n), n - 1 - np.arange(n)] = 1
    return out


def run_family(level: int) -> Grid2D:
    """The 2*4**level square built from the 8x8 seed by 4x4 block copies.

    The seed has ones at (0,1), (1,0), (6,7), (7,6). Each level tiles 4x4
    copies of the previous array, filling the antidiagonal of the top-left
    and bottom-right copies with ones.
    """
    family_spec("run", level)
    a = np.zeros((8, 8), dtype=CELL_DTYPE)
    a[[0, 1, 6, 7], [1, 0, 7, 6]] = 1
    for _ in range(2, level + 1):
        filled = _fill_antidiagonal(a)
        tiles = [[filled if (r, c) in ((0, 0), (3, 3)) else a for c in range(4)] for r in range(4)]
        a = np.block(tiles)
    return Grid2D(a, 2)


def run_copies(level: int) -> list[RunCopy]:
    """Every embedded A_i / A'_i block of ``run_family(level)``, i = 1..level.

    A block is primed (antidiagonal filled) if it is the top-left or
    bottom-right child of its parent, or sits on a primed parent's
    antidiagonal.
    """
    family_spec("run", level)
    out = []

    def walk(i: int, top: int, left: int, primed: bool):
        out.append(RunCopy(i, top, left, primed))
        if i == 1:
            return
        side = formulas.run_size(i - 1)
        for r in range(4):
            for c in range(4):
                child = (r, c) in ((0, 0), (3, 3)) or (primed and r + c == 3)
                walk(i - 1, top + r * side, left + c * side, child)

    walk(level, 0, 0, False)
    return out


def new_run_rects(top: int, left: int, side: int) -> Iterator[Rect]:
    """Runs of an unprimed copy of side 4*side whose corners sit next to
    the filled antidiagonals of its top-left and bottom-right children.

    The level-1 seed is the case side == 2 (one interior 6x6 run).
    """
    for x in range(1, side):
        y = side - x
        for x2 in range(3 * side, 4 * side - 1):
            y2 = 7 * side - 2 - x2
            yield Rect(top + x, left + y, x2 - x + 1, y2 - y + 1)


def run_witnesses(level: int) -> WitnessSet:
    spec = family_spec("run", level)
    rects = []
    for cp in run_copies(level):
        if not cp.primed:
            rects.extend(new_run_rects(cp.top, cp.left, formulas.run_size(cp.level) // 4))
    return WitnessSet(spec, rects, CLAIMED_KIND["run"])
