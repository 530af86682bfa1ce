"""Gaussian-prime lattice experiments: octant sieving, greedy increasing-norm
path decompositions, moat/percolation analysis, bounded-step walks, and disk
lattice-count audits, with a binary segment cache and a CLI front end."""

__version__ = "0.1.0"

from .arith import (
    DEFAULT_MEMORY_BUDGET,
    NORM_CAP,
    GaussianPrime,
    NormSegment,
    count_residue_classes,
    euclid_gap,
    euclid_gap_squared,
    is_gaussian_prime,
    is_prime_u64,
    norm_gap,
    plane_point_is_gaussian_prime,
    sieve_octant,
    sieve_octant_arrays,
    two_square_decomposition,
)
from .circlecount import (
    GAUSS_ERROR_COEFF,
    CircleCount,
    DensityReport,
    error_exponent_fit,
    lattice_count,
    lattice_counts_upto,
    octant_lattice_points,
    octant_prime_density,
)
from .errors import (
    CacheFormatError,
    CacheIntegrityError,
    DomainError,
    GmoatError,
    InconclusiveRegionError,
    InternalInvariantError,
    ResourceError,
)
from .gapmodels import GapKind, GapModel, gap_value, segment_max_gap
from .lattice import PrimeLattice
from .moat import (
    EscapeReport,
    FactorialSquareReport,
    MinimaxIndex,
    MinimaxResult,
    MoatComponent,
    StepBound,
    component,
    factorial_square_check,
    minimax_hop,
    widest_escape,
)
from .paths import (
    CountComparison,
    DecompositionAudit,
    IsolationResult,
    Path,
    PathCountBound,
    PathDecomposition,
    TriangleAudit,
    audit_decomposition,
    build_paths,
    compare_count,
    isolation_radius,
    law_of_cosines,
    path_count_bound,
    triangle_audit,
)
from .persistence import read_segment, write_segment
from .walk import (
    DominanceRow,
    WalkConfig,
    WalkReport,
    WalkStrategy,
    WalkTermination,
    dominance_table,
    first_dominant_exponent,
    run_walk,
)
