"""Rectangular 2D strings, subrectangles, fingerprints and file formats.

Cells are small non-negative integers stored row-major in a read-only
numpy array. All coordinates are 0-based.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

CELL_DTYPE = np.int32

# Two primes below 2**31 so that products of residues fit in int64.
_MODULI = (2_147_483_647, 2_147_483_629)
DEFAULT_SEED = 20_201_109


class GridFormatError(ValueError):
    """Raised when a serialized grid cannot be parsed."""

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


@dataclass(frozen=True, order=True)
class Rect:
    top: int
    left: int
    height: int
    width: int

    def __post_init__(self):
        if self.height < 1 or self.width < 1:
            raise ValueError(f"empty rectangle {self}")
        if self.top < 0 or self.left < 0:
            raise ValueError(f"negative origin {self}")

    @property
    def bottom(self) -> int:
        """Index one past the last row."""
        return self.top + self.height

    @property
    def right(self) -> int:
        """Index one past the last column."""
        return self.left + self.width

    @property
    def shape(self) -> tuple[int, int]:
        return (self.height, self.width)

    def transpose(self) -> Rect:
        return Rect(self.left, self.top, self.width, self.height)

    def fits(self, rows: int, cols: int) -> bool:
        return self.bottom <= rows and self.right <= cols

    def as_tuple(self) -> tuple[int, int, int, int]:
        return (self.top, self.left, self.height, self.width)


class Grid2D:
    """Immutable rows x cols array over the alphabet {0, ..., alphabet-1}."""

    __slots__ = ("_cells", "_alphabet")

    def __init__(self, cells, alphabet: int | None = None):
        arr = np.array(cells, dtype=CELL_DTYPE, copy=True)
        if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
            raise ValueError(f"grid must be a non-empty 2D array, got shape {arr.shape}")
        if arr.min() < 0:
            raise ValueError("grid characters must be non-negative")
        top = int(arr.max()) + 1
        if alphabet is None:
            alphabet = max(2, top)
        elif top > alphabet:
            raise ValueError(f"character {top - 1} outside alphabet of size {alphabet}")
        arr.setflags(write=False)
        self._cells = arr
        self._alphabet = int(alphabet)

    @classmethod
    def zeros(cls, rows: int, cols: int, alphabet: int = 2) -> Grid2D:
        return cls(np.zeros((rows, cols), dtype=CELL_DTYPE), alphabet)

    @property
    def cells(self) -> np.ndarray:
        return self._cells

    @property
    def alphabet(self) -> int:
        return self._alphabet

    @property
    def rows(self) -> int:
        return self._cells.shape[0]

    @property
    def cols(self) -> int:
        return self._cells.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self._cells.shape

    @property
    def is_binary(self) -> bool:
        return self._alphabet <= 2

    def full_rect(self) -> Rect:
        return Rect(0, 0, self.rows, self.cols)

    def check_rect(self, r: Rect) -> Rect:
        if not r.fits(self.rows, self.cols):
            raise ValueError(f"{r} does not fit in a {self.rows}x{self.cols} grid")
        return r

    def block(self, r: Rect) -> np.ndarray:
        """Read-only view of the cells covered by ``r``."""
        self.check_rect(r)
        return self._cells[r.top:r.bottom, r.left:r.right]

    def transpose(self) -> Grid2D:
        return Grid2D(self._cells.T, self._alphabet)

    def to_lists(self) -> list[list[int]]:
        return self._cells.tolist()

    def __eq__(self, other):
        if not isinstance(other, Grid2D):
            return NotImplemented
        return (self._alphabet == other._alphabet
                and self.shape == other.shape
                and bool(np.array_equal(self._cells, other._cells)))

    def __hash__(self):
        return hash((self.shape, self._alphabet, self._cells.tobytes()))

    def __repr__(self):
        return f"Grid2D({self.rows}x{self.cols}, alphabet={self._alphabet})"


def as_grid(g) -> Grid2D:
    """Accept a Grid2D, a nested list or a 2D array."""
    if isinstance(g, Grid2D):
        return g
    return Grid2D(g)


@dataclass(frozen=True)
class Fingerprint:
    height: int
    width: int
    digest1: int
    digest2: int


class Fingerprinter:
    """Double modular 2D polynomial hashing with O(1) rectangle queries.

    The prefix tables hold sum(a[i][j] * x**i * y**j) over the top-left
    quadrant; a rectangle's digest is rescaled to a position-independent
    exponent so equal contents give equal digests wherever they sit.
    """

    def __init__(self, grid: Grid2D, seed: int | None = None):
        self.grid = grid
        rng = np.random.default_rng(DEFAULT_SEED if seed is None else seed)
        rows, cols = grid.shape
        vals = grid.cells.astype(np.int64) + 1
        self._tables = []
        for mod in _MODULI:
            x, y = (int(v) for v in rng.integers(grid.alphabet + 2, mod - 1, size=2))
            xp = _powers(x, rows + 1, mod)
            yp = _powers(y, cols + 1, mod)
            weighted = (vals * xp[:rows, None]) % mod
            weighted = (weighted * yp[None, :cols]) % mod
            prefix = np.zeros((rows + 1, cols + 1), dtype=np.int64)
            prefix[1:, 1:] = weighted.cumsum(axis=0).cumsum(axis=1) % mod
            self._tables.append((mod, xp, yp, prefix))

    def digests(self, tops, lefts, height: int, width: int) -> tuple[np.ndarray, np.ndarray]:
        """Vectorised digests for same-sized rectangles at the given origins."""
        tops = np.asarray(tops, dtype=np.int64)
        lefts = np.asarray(lefts, dtype=np.int64)
        rows, cols = self.grid.shape
        out = []
        for mod, xp, yp, prefix in self._tables:
            b, r = tops + height, lefts + width
            s = (prefix[b, r] - prefix[tops, r] - prefix[b, lefts] + prefix[tops, lefts]) % mod
            s = (s * xp[rows - tops]) % mod
            s = (s * yp[cols - lefts]) % mod
            out.append(s)
        return out[0], out[1]

    def fingerprint(self, r: Rect) -> Fingerprint:
        self.grid.check_rect(r)
        d1, d2 = self.digests([r.top], [r.left], r.height, r.width)
        return Fingerprint(r.height, r.width, int(d1[0]), int(d2[0]))

    def keys(self, tops, lefts, height: int, width: int) -> np.ndarray:
        """Both digests packed into one int64 per rectangle."""
        d1, d2 = self.digests(tops, lefts, height, width)
        return d1 * np.int64(_MODULI[1]) + d2


def _powers(base: int, count: int, mod: int) -> np.ndarray:
    out = np.empty(count, dtype=np.int64)
    acc = 1
    for i in range(count):
        out[i] = acc
        acc = acc * base % mod
    return out


def block_equal(g: Grid2D, a: Rect, b: Rect, fingerprinter: Fingerprinter | None = None) -> bool:
    """Cell-wise equality of two same-sized rectangles of ``g``.

    With a fingerprinter, differing digests answer False immediately;
    matching digests are always confirmed by direct comparison.
    """
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    g.check_rect(a)
    g.check_rect(b)
    if fingerprinter is not None and fingerprinter.fingerprint(a) != fingerprinter.fingerprint(b):
        return False
    return bool(np.array_equal(g.block(a), g.block(b)))


# --- serialization -------------------------------------------------------

FORMATS = ("text", "pbm")


def save_grid(g: Grid2D, format: str = "text") -> bytes:
    if format == "text":
        lines = [f"{g.rows} {g.cols} {g.alphabet}"]
        lines += [" ".join(str(v) for v in row) for row in g.to_lists()]
    elif format == "pbm":
        if not g.is_binary:
            raise ValueError(f"PBM needs a binary grid, alphabet is {g.alphabet}")
        lines = ["P1", f"{g.cols} {g.rows}"]
        lines += [" ".join(str(v) for v in row) for row in g.to_lists()]
    else:
        raise ValueError(f"unknown grid format {format!r}; expected one of {FORMATS}")
    return ("\n".join(lines) + "\n").encode("ascii")


def load_grid(data: bytes | str, format: str | None = None) -> Grid2D:
    """Parse a grid; ``format=None`` sniffs the PBM magic number."""
    text = data.decode("ascii") if isinstance(data, (bytes, bytearray)) else data
    if format is None:
        format = "pbm" if text.lstrip().startswith("P1") else "text"
    if format == "text":
        return _load_text(text)
    if format == "pbm":
        return _load_pbm(text)
    raise ValueError(f"unknown grid format {format!r}; expected one of {FORMATS}")


def _tokens(text: str, comments: bool) -> Iterable[tuple[str, int, int]]:
    for lineno, line in enumerate(text.splitlines(), start=1):
        if comments and "#" in line:
            line = line[:line.index("#")]
        col = 0
        for part in line.split():
            col = line.index(part, col)
            yield part, lineno, col + 1
            col += len(part)


def _int_token(tok: tuple[str, int, int], what: str) -> int:
    s, line, col = tok
    if not s.isdigit():
        raise GridFormatError(f"expected {what}, got {s!r}", line, col)
    return int(s)


def _load_text(text: str) -> Grid2D:
    toks = list(_tokens(text, comments=False))
    if len(toks) < 3:
        raise GridFormatError("missing 'rows cols alphabet' header", 1, 1)
    rows, cols, alphabet = (_int_token(t, name) for t, name in zip(toks, ("rows", "cols", "alphabet")))
    if rows < 1 or cols < 1:
        raise GridFormatError("rows and cols must be positive", toks[0][1], toks[0][2])
    body = toks[3:]
    return Grid2D(_fill(body, rows, cols, alphabet, text), alphabet)


def _load_pbm(text: str) -> Grid2D:
    toks = list(_tokens(text, comments=True))
    if not toks or toks[0][0] != "P1":
        line, col = (toks[0][1], toks[0][2]) if toks else (1, 1)
        raise GridFormatError("expected PBM magic number 'P1'", line, col)
    if len(toks) < 3:
        raise GridFormatError("missing PBM width/height", toks[0][1], toks[0][2] + 2)
    cols = _int_token(toks[1], "width")
    rows = _int_token(toks[2], "height")
    # P1 allows pixels without separating whitespace
    pixels = []
    for s, line, col in toks[3:]:
        for off, ch in enumerate(s):
            pixels.append((ch, line, col + off))
    return Grid2D(_fill(pixels, rows, cols, 2, text), 2)


def _fill(tokens: Sequence[tuple[str, int, int]], rows: int, cols: int, alphabet: int, text: str):
    need = rows * cols
    if len(tokens) < need:
        last = text.splitlines() or [""]
        raise GridFormatError(f"expected {need} cells, found {len(tokens)}", len(last), len(last[-1]) + 1)
    if len(tokens) > need:
        _, line, col = tokens[need]
        raise GridFormatError(f"unexpected data after {need} cells", line, col)
    cells = np.empty(need, dtype=CELL_DTYPE)
    for i, tok in enumerate(tokens):
        v = _int_token(tok, "cell value")
        if v >= alphabet:
            raise GridFormatError(f"cell value {v} outside alphabet {alphabet}", tok[1], tok[2])
        cells[i] = v
    return cells.reshape(rows, cols)
