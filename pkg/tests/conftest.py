import numpy as np
import pytest
from hypothesis import strategies as st

from reps2d.grid import Grid2D

ACCEPTANCE_LINES = []


@st.composite
def grids(draw, max_rows=8, max_cols=8, max_alphabet=3):
    rows = draw(st.integers(1, max_rows))
    cols = draw(st.integers(1, max_cols))
    alphabet = draw(st.integers(2, max_alphabet))
    cells = draw(st.lists(st.integers(0, alphabet - 1), min_size=rows * cols, max_size=rows * cols))
    return Grid2D(np.array(cells).reshape(rows, cols), alphabet)


def random_grid(rng, max_side=12, alphabet=2):
    rows, cols = (int(v) for v in rng.integers(1, max_side + 1, size=2))
    return Grid2D(rng.integers(0, alphabet, size=(rows, cols)), alphabet)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
