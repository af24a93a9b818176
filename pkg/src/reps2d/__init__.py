"""Repetitions in 2D strings: extremal families, exhaustive detectors, exact counts."""

from .families import (
    FamilySpec,
    WitnessSet,
    family_spec,
    gadget,
    quartic_binary_family,
    quartic_binary_witnesses,
    quartic_family,
    quartic_witnesses,
    recover_offsets,
    run_family,
    run_witnesses,
    tandem_family,
    tandem_witnesses,
)
from .grid import Fingerprinter, Grid2D, GridFormatError, Rect, block_equal, load_grid, save_grid
from .periodicity import (
    PeriodPair,
    is_h_periodic,
    is_run,
    is_v_periodic,
    smallest_h_period,
    smallest_v_period,
)
from .repetitions import (
    OracleCapExceeded,
    RunRecord,
    TandemCounts,
    count_distinct_quartics,
    count_distinct_quartics_naive,
    count_distinct_tandems,
    count_distinct_tandems_naive,
    enumerate_runs,
    enumerate_runs_naive,
)

__version__ = "0.1.0"
