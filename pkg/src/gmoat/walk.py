"""Step-bounded walks over the prime lattice and closed-form dominance tables.

A walk starts at a prime and repeatedly moves to another in-region prime at
folded distance <= M, never revisiting a point; the default regime also
demands strictly increasing norm.  When a decomposition of a norm decade is
supplied, every step is annotated with the path that owns it, giving the
pigeonhole evidence that a bounded-step walk keeps switching paths.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .arith import DEFAULT_MEMORY_BUDGET, GaussianPrime, is_gaussian_prime
from .errors import DomainError, InternalInvariantError
from .gapmodels import GapKind
from .lattice import PrimeLattice
from .paths import PathDecomposition, path_count_bound


class WalkStrategy(str, Enum):
    NEAREST = "nearest"
    GREEDY_MAX_NORM = "greedy-max-norm"


class WalkTermination(str, Enum):
    NO_CANDIDATE = "NO_CANDIDATE"
    REGION_EXIT = "REGION_EXIT"


@dataclass(frozen=True)
class WalkConfig:
    M: float
    region_limit: int
    strategy: WalkStrategy = WalkStrategy.NEAREST
    require_increasing_norm: bool = True
    include_axis: bool = False

    def __post_init__(self):
        if not self.M > 0:
            raise DomainError("step bound M must be positive")
        if self.region_limit < 5:
            raise DomainError("region limit must be >= 5")


@dataclass
class WalkReport:
    config: WalkConfig
    steps: list[GaussianPrime]
    step_lengths_squared: list[int]
    terminated_reason: WalkTermination
    max_norm_reached: int
    step_length_histogram: dict[int, int]
    path_visits: dict[int, int] | None = None
    path_changes: int | None = None
    steps_outside_segment: int | None = None

    @property
    def n_steps(self) -> int:
        return len(self.step_lengths_squared)


def run_walk(
    config: WalkConfig,
    start: GaussianPrime,
    decomposition: PathDecomposition | None = None,
    *,
    lattice: PrimeLattice | None = None,
    memory_budget_bytes: int = DEFAULT_MEMORY_BUDGET,
    threads: int = 1,
) -> WalkReport:
    """Deterministic bounded-step walk from start."""
    if not is_gaussian_prime(start.a, start.b):
        raise DomainError(f"walk start {start} is not a Gaussian prime")
    lat = lattice or PrimeLattice.from_region(
        config.region_limit,
        config.include_axis,
        memory_budget_bytes=memory_budget_bytes,
        threads=threads,
    )
    cur = lat.index_of(start)
    m2 = config.M * config.M
    visited = {cur}
    steps = [cur]
    lengths: list[int] = []
    while True:
        cand = lat.ball(cur, m2)
        if cand.size:
            mask = np.array([int(j) not in visited for j in cand])
            cand = cand[mask]
        if cand.size and config.require_increasing_norm:
            cand = cand[lat.norm[cand] > lat.norm[cur]]
        if cand.size == 0:
            break
        d2 = lat.fold_d2(cur, cand)
        if config.strategy is WalkStrategy.NEAREST:
            keys = [
                (int(w), int(lat.norm[j]), int(lat.a[j]), int(lat.b[j]))
                for w, j in zip(d2, cand)
            ]
        else:
            keys = [
                (-int(lat.norm[j]), int(w), int(lat.a[j]), int(lat.b[j]))
                for w, j in zip(d2, cand)
            ]
        pick = int(cand[min(range(len(keys)), key=keys.__getitem__)])
        lengths.append(int(lat.fold_d2(cur, np.array([pick]))[0]))
        cur = pick
        visited.add(cur)
        steps.append(cur)
    # independent re-check of the walk's own legality
    for u, v, w in zip(steps, steps[1:], lengths):
        if not (w <= m2):
            raise InternalInvariantError("walk step exceeds the bound M")
        if config.require_increasing_norm and not lat.norm[v] > lat.norm[u]:
            raise InternalInvariantError("walk step failed to increase the norm")
    last = steps[-1]
    reason = (
        WalkTermination.REGION_EXIT
        if lat.near_boundary(int(lat.norm[last]), m2)
        else WalkTermination.NO_CANDIDATE
    )
    out_steps = [lat.point(i) for i in steps]
    report = WalkReport(
        config=config,
        steps=out_steps,
        step_lengths_squared=lengths,
        terminated_reason=reason,
        max_norm_reached=max(int(lat.norm[i]) for i in steps),
        step_length_histogram=dict(sorted(Counter(lengths).items())),
    )
    if decomposition is not None:
        owner = {}
        for path in decomposition.paths:
            for p in path.members:
                owner[(p.a, p.b)] = path.index
        visits: Counter = Counter()
        outside = 0
        prev = None
        changes = 0
        for p in out_steps:
            key = owner.get((p.a, p.b))
            if key is None:
                outside += 1
                continue
            visits[key] += 1
            if prev is not None and key != prev:
                changes += 1
            prev = key
        report.path_visits = dict(sorted(visits.items()))
        report.path_changes = changes
        report.steps_outside_segment = outside
    return report


@dataclass(frozen=True)
class DominanceRow:
    A: int
    kind: GapKind
    lhs: float
    rhs: float
    log10_lhs: float
    log10_rhs: float
    dominates: bool


def _log10_pow10_plus(exp10: float, add: float) -> float:
    """log10(10**exp10 + add) without overflowing, for add >= 0."""
    if add <= 0:
        return exp10
    if exp10 > 300:
        return exp10  # the additive term is far below float resolution
    return math.log10(10.0**exp10 + add)


def _dominance_row(kind: GapKind, A: int, M: float, c: float, delta: float, error_const: float) -> DominanceRow:
    """Closed-form decade comparison: gap budget at 10^(A-1) vs path room.

    lhs is the decimal-log simplification of the model's gap at 10^(A-1);
    rhs is (path bound + 1) * M.  Both sides are compared in log10 space so
    the table stays meaningful long after floats overflow.
    """
    if A < 2:
        raise DomainError("dominance rows need A >= 2 (the gap argument is 10^(A-1))")
    if kind is GapKind.RH:
        log_lhs = math.log10(c) + math.log10(A - 1) + (A - 1) / 2.0
        log_bound = _log10_pow10_plus(math.log10(1.27 * c) + A / 2.0, error_const)
    elif kind is GapKind.CRAMER:
        log_lhs = math.log10(c) + 2.0 * math.log10(A - 1)
        log_bound = math.log10(1.27 * c * A + error_const)
    elif kind is GapKind.BHP:
        log_lhs = (A - 1) * (0.5 + delta)
        log_bound = _log10_pow10_plus(
            A / 2.0 + delta - math.log10(A) + math.log10(1.27), error_const
        )
    else:
        raise DomainError("dominance tables exist for RH, CRAMER and BHP only")
    log_rhs = -math.inf if M == 0 else _log10_pow10_plus(log_bound, 1.0) + math.log10(M)
    lhs = 10.0**log_lhs if log_lhs < 308 else math.inf
    rhs = 10.0**log_rhs if log_rhs < 308 else math.inf
    return DominanceRow(
        A=A,
        kind=kind,
        lhs=lhs,
        rhs=rhs,
        log10_lhs=log_lhs,
        log10_rhs=log_rhs,
        dominates=log_lhs > log_rhs,
    )


def dominance_table(
    A_values,
    M: float,
    c: float = 1.0,
    delta: float = 0.025,
    error_const: float = 0.0,
    kinds=(GapKind.RH, GapKind.CRAMER, GapKind.BHP),
) -> list[DominanceRow]:
    """Rows (A, model) over the requested exponents; M >= 0."""
    if M < 0:
        raise DomainError("column scale M must be >= 0")
    A_list = list(A_values)
    if not A_list:
        raise DomainError("A_values must be nonempty")
    rows = []
    for A in A_list:
        for kind in kinds:
            rows.append(_dominance_row(kind, int(A), M, c, delta, error_const))
    return rows


def first_dominant_exponent(
    kind: GapKind,
    M: float,
    c: float = 1.0,
    delta: float = 0.025,
    error_const: float = 0.0,
    A_max: int = 10_000,
) -> int | None:
    """Smallest A in [2, A_max] where the decade gap outruns the path room."""
    for A in range(2, A_max + 1):
        if _dominance_row(kind, A, M, c, delta, error_const).dominates:
            return A
    return None
