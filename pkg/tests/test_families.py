from collections import Counter

import numpy as np
import pytest

from reps2d import formulas
from reps2d.families import (
    FamilySpec,
    MalformedGridError,
    WitnessSet,
    blow_up,
    family_spec,
    gadget,
    min_id_bits,
    quartic_binary_family,
    quartic_binary_witnesses,
    quartic_family,
    quartic_witnesses,
    recover_offsets,
    run_copies,
    run_family,
    run_witnesses,
    tandem_family,
    tandem_witnesses,
)
from reps2d.grid import Grid2D, Rect
from reps2d.repetitions import (
    count_distinct_contents,
    count_distinct_tandems,
    is_horizontal_tandem,
    is_quartic,
    quartic_root,
    tandem_root,
)


# --- tandem family ---------------------------------------------------------

def test_tandem_rows_level1():
    g = tandem_family(1)
    assert g.shape == (8, 8)
    assert g.to_lists()[0] == [0, 1, 0, 0, 1, 0, 0, 1]
    assert g.to_lists()[1] == [0, 1, 1, 0, 1, 1, 0, 1]
    assert tandem_family(2).shape == (16, 16)


def test_tandem_default_rows_repeat_with_period_two_to_the_level():
    # only `level` label bits fit, so the literal family has 2**level distinct rows
    for level in (1, 2, 3):
        g = tandem_family(level)
        assert len({tuple(r) for r in g.to_lists()}) == 2 ** level


@pytest.mark.parametrize("level", [1, 2, 3])
def test_widened_labels_make_rows_distinct(level):
    bits = min_id_bits(level)
    g = tandem_family(level, bits)
    assert 2 ** bits >= g.rows and 2 ** (bits - 1) < formulas.tandem_size(level, bits - 1)
    assert len({tuple(r) for r in g.to_lists()}) == g.rows


def test_tandem_witnesses_level1():
    ws = tandem_witnesses(1)
    assert len(ws) == 72 == formulas.tandem_counts(1).witness_count
    g = tandem_family(1)
    assert all(is_horizontal_tandem(g, r) for r in ws.rects)
    assert {r.width for r in ws.rects} == {6}


@pytest.mark.parametrize("level", [1, 2, 3])
def test_widened_tandem_witnesses_are_distinct(level):
    bits = min_id_bits(level)
    g = tandem_family(level, bits)
    ws = tandem_witnesses(level, bits)
    n = g.rows
    assert len(ws) == n * (n + 1) // 2 * 2 ** level
    assert all(is_horizontal_tandem(g, r) for r in ws.rects)
    assert count_distinct_contents(g, [tandem_root(r) for r in ws.rects]) == len(ws)
    if level <= 2:
        assert count_distinct_tandems(g).horizontal >= len(ws)


# --- quartic family --------------------------------------------------------

def test_quartic_level1_specials():
    a1 = quartic_family(1)
    assert a1.to_lists() == [[1, 1], [1, 1]]
    a2 = quartic_family(2)
    # the three A_1 copies: specials at 1-based columns (n-2)/3+1 = 3 and (2n+2)/3 = 6
    for r in (0, 1, 3, 4, 6, 7):
        assert np.flatnonzero(a2.cells[r]).tolist() == [2, 5]
    assert np.count_nonzero(a2.cells[[2, 5]]) == 12


@pytest.mark.parametrize("level, side, specials", [(1, 2, 1), (2, 8, 6), (3, 26, 27), (4, 80, 108)])
def test_quartic_family_shape_and_alphabet(level, side, specials):
    g = quartic_family(level)
    assert g.shape == (side, side)
    letters = Counter(int(v) for v in g.cells.ravel() if v)
    assert sorted(letters) == list(range(1, specials + 1))
    assert g.alphabet == specials + 1
    # every special letter sits at the four corners of one quartic
    assert set(letters.values()) == {4}


def test_quartic_zero_ranges_after_level1():
    n = 8
    a1 = quartic_family(2).cells[:2]
    zero_cols = np.flatnonzero(~a1.any(axis=0))
    assert zero_cols.tolist() == [0, 1, 3, 4, 6, 7]
    assert formulas.quartic_counts(2).levels[0].N == 2 == (n - 2) // 3


def test_quartic_level1_witness_positions():
    # embedded in A_2, the first A_1 copy contributes 2x6 quartics at columns 0, 1, 2
    ws = quartic_witnesses(2)
    first = [r for r in ws.rects if r.top == 0 and r.height == 2]
    assert first == [Rect(0, c, 2, 6) for c in range(3)]


@pytest.mark.parametrize("level, expected", [(1, 1), (2, 18), (3, 243), (4, 2916)])
def test_quartic_witnesses(level, expected):
    g = quartic_family(level)
    ws = quartic_witnesses(level)
    assert len(ws) == expected == formulas.quartic_counts(level).final.Q
    assert all(is_quartic(g, r) for r in ws.rects)
    assert count_distinct_contents(g, [quartic_root(r) for r in ws.rects]) == expected


# --- gadgets and the binary family -----------------------------------------

def test_gadget_examples():
    assert gadget(0, 4).to_lists() == [[0, 0, 0, 0], [0, 0, 0, 1], [0, 0, 0, 1], [0, 1, 1, 1]]
    assert gadget(5, 4).to_lists() == [[0, 0, 0, 0], [0, 0, 1, 1], [0, 0, 1, 1], [0, 1, 1, 1]]


def test_gadget_is_injective():
    blocks = {gadget(c, 5).cells.tobytes() for c in range(2 ** 9)}
    assert len(blocks) == 2 ** 9


def test_gadget_rejects_large_codes():
    with pytest.raises(ValueError):
        gadget(16, 4)
    with pytest.raises(ValueError):
        gadget(-1, 4)


def test_blow_up_places_gadgets():
    g = Grid2D([[0, 3], [1, 0]], 4)
    big = blow_up(g, 4)
    assert big.shape == (8, 8)
    assert big.block(Rect(0, 4, 4, 4)) .tolist() == gadget(3, 4).to_lists()
    assert big.block(Rect(4, 4, 4, 4)).tolist() == gadget(0, 4).to_lists()


@pytest.mark.parametrize("level, k, side", [(2, 4, 32), (3, 5, 130), (4, 5, 400)])
def test_binary_family_parameters(level, k, side):
    spec = family_spec("quartic_binary", level)
    assert (spec.k, spec.n_prime) == (k, side)
    assert spec.sigma == formulas.quartic_counts(level).sigma
    assert quartic_binary_family(level).shape == (side, side)


@pytest.mark.parametrize("level", [2, 3, 4])
def test_binary_family_zero_lines_and_windows(level):
    g = quartic_binary_family(level)
    k = family_spec("quartic_binary", level).k
    for a in (g.cells, g.cells.T):
        zero = ~a.any(axis=1)
        idx = np.arange(a.shape[0])
        assert np.array_equal(zero, idx % k == 0)
        windows = np.lib.stride_tricks.sliding_window_view(a[idx % k != 0], k, axis=1)
        assert windows.any(axis=2).all()


def test_recover_offsets(rng):
    g = quartic_binary_family(2)
    k = 4
    assert recover_offsets(g, Rect(0, 0, k, k), k) == (0, 0)
    assert recover_offsets(g, Rect(8, 12, 9, 5), k) == (0, 0)
    for top in range(k):
        assert recover_offsets(g, Rect(top, 0, k, g.cols), k)[0] == top
    for _ in range(500):
        h, w = (int(v) for v in rng.integers(k, g.rows + 1, size=2))
        r = Rect(int(rng.integers(0, g.rows - h + 1)), int(rng.integers(0, g.cols - w + 1)), h, w)
        assert recover_offsets(g, r, k) == (r.top % k, r.left % k)


def test_recover_offsets_errors():
    with pytest.raises(MalformedGridError):
        recover_offsets(Grid2D(np.ones((6, 6), int)), Rect(0, 0, 5, 5), 4)
    with pytest.raises(ValueError):
        recover_offsets(quartic_binary_family(2), Rect(0, 0, 3, 8), 4)


def test_binary_level1_witness_shape():
    ws = quartic_binary_witnesses(2)
    k, n = 4, 8
    width = 2 * ((n * k - 2 * k) // 3 + k)
    level1 = [r for r in ws.rects if r.height == 2 * k]
    assert {r.width for r in level1} == {width}
    assert len(level1) == 3 * 9


@pytest.mark.parametrize("level", [2, 3])
def test_binary_witnesses(level):
    g = quartic_binary_family(level)
    ws = quartic_binary_witnesses(level)
    k = family_spec("quartic_binary", level).k
    assert len(ws) == formulas.binary_quartic_counts(level, k).final
    assert all(is_quartic(g, r) for r in ws.rects)
    assert count_distinct_contents(g, [quartic_root(r) for r in ws.rects]) == len(ws)
    # each counted quartic fully contains a gadget of a non-zero letter
    letters = quartic_family(level).cells
    for r in ws.rects[::17]:
        rows = range(-(-r.top // k), (r.bottom) // k)
        cols = range(-(-r.left // k), (r.right) // k)
        assert any(letters[i, j] for i in rows for j in cols)


# --- run family ------------------------------------------------------------

def test_run_family_level1():
    g = run_family(1)
    assert g.shape == (8, 8)
    assert sorted(zip(*np.nonzero(g.cells))) == [(0, 1), (1, 0), (6, 7), (7, 6)]
    assert run_family(2).shape == (32, 32)


@pytest.mark.parametrize("level", [1, 2, 3])
def test_run_antidiagonal_is_zero(level):
    a = run_family(level).cells
    assert not np.fliplr(a).diagonal().any()


@pytest.mark.parametrize("level", [1, 2, 3, 4])
def test_run_copy_bookkeeping(level):
    tally = Counter((c.level, c.primed) for c in run_copies(level))
    rc = formulas.run_counts(level)
    for lv in rc.levels:
        assert tally[(lv.i, False)] == lv.X
        assert tally[(lv.i, True)] == lv.Y


def test_run_copies_match_grid_contents():
    g = run_family(3).cells
    a1 = run_family(1).cells
    for cp in run_copies(3):
        if cp.level == 1:
            block = g[cp.top:cp.top + 8, cp.left:cp.left + 8]
            filled = a1.copy()
            filled[np.arange(8), 7 - np.arange(8)] = 1
            assert np.array_equal(block, filled if cp.primed else a1)


@pytest.mark.parametrize("level, count", [(1, 1), (2, 63), (3, 1863)])
def test_run_witness_counts(level, count):
    ws = run_witnesses(level)
    assert len(ws) == count == formulas.run_counts(level).total
    assert len(set(ws.rects)) == count
    assert all(r.fits(ws.spec.n, ws.spec.n) for r in ws.rects)


def test_run_level1_witness():
    assert run_witnesses(1).rects == [Rect(1, 1, 6, 6)]


# --- specs and serialization -------------------------------------------------

def test_family_spec_sizes():
    assert family_spec("tandem", 2).n == 16
    assert family_spec("quartic", 3).n == 26
    assert family_spec("run", 2).n == 32
    with pytest.raises(ValueError):
        family_spec("run", 0)
    with pytest.raises(ValueError):
        family_spec("quartic_binary", 1)
    with pytest.raises(ValueError):
        family_spec("other", 1)
    with pytest.raises(MemoryError):
        family_spec("run", 9)


def test_witness_text_round_trip():
    ws = run_witnesses(2)
    text = ws.to_text()
    assert text.splitlines()[0] == "# kind=run level=2 n=32"
    back = WitnessSet.from_text(text)
    assert back.rects == ws.rects
    assert back.spec == ws.spec
    assert back.claimed_kind == "run"
    qb = quartic_binary_witnesses(2)
    assert WitnessSet.from_text(qb.to_text()).spec == FamilySpec("quartic_binary", 2, 8, 6, 4, 32)


def test_witness_text_count_mismatch():
    text = run_witnesses(1).to_text().replace("count=1", "count=2")
    with pytest.raises(ValueError):
        WitnessSet.from_text(text)
