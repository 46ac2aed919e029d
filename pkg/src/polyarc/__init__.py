"""Optimal compression of polylines into straight segments and circular arcs.

The package implements two solvers with a shared contract (minimum total
penalty, then minimum sum of squared deviations, within a hard tolerance):
a dynamic-programming baseline and a faster jump / look-backward algorithm
driven by sound reach tables.  Corpus generators, a benchmark harness,
brute-force oracles and a CLI round out the toolkit.
"""

from .geometry import (
    AnchoredArc,
    AnchoredSegment,
    ArcGeometry,
    Point2D,
    Polyline,
    arc_geometry,
    collapse_duplicates,
    dist_point_arc,
    dist_point_segment,
    max_deviation,
    sse,
)
from .fitting import (
    ArcFit,
    FitCounter,
    HInterval,
    SegmentFit,
    count_fit_calls,
    feasible_h_interval,
    fit_arc,
    fit_segment,
)
from .reach import (
    ReachTables,
    compute_bw,
    compute_fw_arc,
    compute_fw_seg,
    compute_tables,
    loosest_tables,
)
from .solver import (
    CompressedPolyline,
    JumpSolver,
    PenaltyConfig,
    PlacedPrimitive,
    SolverError,
    SolverState,
    dp_compress,
    jump_compress,
    verify_within_tolerance,
)
from .corpus import CorpusSpec, gen_arcs, gen_zigzag, generate
from .oracle import OracleResult, oracle_compress, oracle_reach, random_instances
from .bench import BenchRow, BenchmarkError, FIG_GRID, run_bench
from .formats import ParseError, encode_output, ingest, to_svg, write_polyline_csv

__version__ = "0.1.0"
