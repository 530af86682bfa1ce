"""Greedy increasing-norm path decomposition of a norm segment, with audits.

Construction: repeatedly open a path at the lowest-(norm, a, b) unclassified
prime and extend it with the lowest-(norm, a, b) unclassified prime whose
Euclidean distance from the head is at least the gap budget at the head's
norm and whose norm strictly exceeds the head's.  Two consequences are hard
invariants (norm increase and the per-step disk exclusion); whole-path
isolation and size monotonicity are measured, not assumed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .arith import (
    DEFAULT_MEMORY_BUDGET,
    NORM_CAP,
    GaussianPrime,
    NormSegment,
    euclid_gap,
    euclid_gap_squared,
    is_gaussian_prime,
    plane_point_is_gaussian_prime,
    sieve_octant,
    sieve_octant_arrays,
)
from .errors import DomainError
from .gapmodels import GapKind, GapModel, gap_value

_VECTOR_CAP = 1 << 52  # keep d^2 exact in float64 comparisons


@dataclass(frozen=True)
class Path:
    index: int  # 1-based position in the decomposition
    members: tuple[GaussianPrime, ...]

    @property
    def size(self) -> int:
        return len(self.members)


@dataclass(frozen=True)
class PathDecomposition:
    segment: NormSegment
    model: GapModel
    include_axis: bool
    paths: tuple[Path, ...]

    @property
    def n_paths(self) -> int:
        return len(self.paths)

    @property
    def sizes(self) -> list[int]:
        return [p.size for p in self.paths]

    @property
    def n_primes(self) -> int:
        return sum(p.size for p in self.paths)


def build_paths(
    segment: NormSegment,
    model: GapModel,
    include_axis: bool = False,
    *,
    memory_budget_bytes: int = DEFAULT_MEMORY_BUDGET,
    threads: int = 1,
) -> PathDecomposition:
    """Greedy decomposition of the segment's primes into increasing-norm paths."""
    a, b, n = sieve_octant_arrays(
        segment, include_axis, memory_budget_bytes=memory_budget_bytes, threads=threads
    )
    if n.size and int(n[-1]) >= _VECTOR_CAP:
        raise DomainError("segment norms exceed the 2^52 bulk-geometry cap")
    size = n.size
    free = np.ones(size, dtype=bool)
    paths: list[Path] = []
    first_free = 0
    while True:
        while first_free < size and not free[first_free]:
            first_free += 1
        if first_free >= size:
            break
        cur = first_free
        free[cur] = False
        members = [cur]
        while True:
            g = gap_value(model, int(n[cur]))
            g2 = g * g
            tail = np.flatnonzero(free[cur + 1 :])
            if tail.size == 0:
                break
            tail += cur + 1
            da = a[tail] - a[cur]
            db = b[tail] - b[cur]
            ok = np.flatnonzero(da * da + db * db >= g2)
            if ok.size == 0:
                break
            cur = int(tail[ok[0]])
            free[cur] = False
            members.append(cur)
        paths.append(
            Path(
                index=len(paths) + 1,
                members=tuple(GaussianPrime(int(a[i]), int(b[i])) for i in members),
            )
        )
    return PathDecomposition(segment=segment, model=model, include_axis=include_axis, paths=tuple(paths))


@dataclass(frozen=True)
class StepStats:
    n_steps: int
    min: float | None
    max: float | None
    mean: float | None


@dataclass
class DecompositionAudit:
    segment: NormSegment
    n_primes: int
    n_paths: int
    sizes: list[int]
    disjoint: bool
    coverage: bool
    norm_increase_violations: int
    step_exclusion_violations: int
    forward_isolation_violations: int
    backward_isolation_violations: int
    sizes_monotone: bool
    monotone_adjacent_violations: int
    step_stats: StepStats

    @property
    def hard_invariants_hold(self) -> bool:
        return (
            self.disjoint
            and self.coverage
            and self.norm_increase_violations == 0
            and self.step_exclusion_violations == 0
        )


def audit_decomposition(
    d: PathDecomposition,
    *,
    memory_budget_bytes: int = DEFAULT_MEMORY_BUDGET,
    threads: int = 1,
) -> DecompositionAudit:
    """Re-derive every decomposition invariant from scratch.

    Disjointness/coverage and the two per-step rules are the hard ones;
    whole-path disk isolation (forward = against later members, backward =
    against earlier members) and size monotonicity are measured.
    """
    seen = set()
    disjoint = True
    for path in d.paths:
        for p in path.members:
            if (p.a, p.b) in seen:
                disjoint = False
            seen.add((p.a, p.b))
    expected = sieve_octant(
        d.segment, d.include_axis, memory_budget_bytes=memory_budget_bytes, threads=threads
    )
    coverage = {(p.a, p.b) for p in expected} == seen and len(expected) == sum(
        path.size for path in d.paths
    )

    norm_bad = 0
    step_bad = 0
    fwd_bad = 0
    back_bad = 0
    dists: list[float] = []
    for path in d.paths:
        ms = path.members
        gaps2 = [None] * len(ms)
        for m, p in enumerate(ms):
            g = gap_value(d.model, p.norm)
            gaps2[m] = g * g
        for m in range(len(ms) - 1):
            if not ms[m + 1].norm > ms[m].norm:
                norm_bad += 1
            d2 = euclid_gap_squared(ms[m], ms[m + 1])
            dists.append(math.sqrt(d2))
            if d2 < gaps2[m]:
                step_bad += 1
        for m in range(len(ms)):
            for j in range(len(ms)):
                if j == m:
                    continue
                if euclid_gap_squared(ms[m], ms[j]) < gaps2[m]:
                    if j > m:
                        fwd_bad += 1
                    else:
                        back_bad += 1

    sizes = d.sizes
    mono_bad = sum(1 for i in range(len(sizes) - 1) if sizes[i] < sizes[i + 1])
    stats = StepStats(
        n_steps=len(dists),
        min=min(dists) if dists else None,
        max=max(dists) if dists else None,
        mean=(sum(dists) / len(dists)) if dists else None,
    )
    return DecompositionAudit(
        segment=d.segment,
        n_primes=d.n_primes,
        n_paths=d.n_paths,
        sizes=sizes,
        disjoint=disjoint,
        coverage=coverage,
        norm_increase_violations=norm_bad,
        step_exclusion_violations=step_bad,
        forward_isolation_violations=fwd_bad,
        backward_isolation_violations=back_bad,
        sizes_monotone=mono_bad == 0,
        monotone_adjacent_violations=mono_bad,
        step_stats=stats,
    )


@dataclass(frozen=True)
class PathCountBound:
    kind: GapKind
    A: int
    c: float
    delta: float
    error_const: float
    bound_value: float


def path_count_bound(
    kind: GapKind,
    A: int,
    c: float = 1.0,
    delta: float = 0.025,
    error_const: float = 0.0,
) -> PathCountBound:
    """Closed-form ceiling on the number of paths a decade can produce.

    RH     1.27 * c * 10^(A/2) + E
    CRAMER 1.27 * c * A + E
    BHP    1.27 * 10^(A/2 + delta) / A + E
    """
    if A < 1:
        raise DomainError("decade exponent A must be >= 1")
    if kind is GapKind.RH:
        val = 1.27 * c * 10.0 ** (A / 2.0) + error_const
    elif kind is GapKind.CRAMER:
        val = 1.27 * c * A + error_const
    elif kind is GapKind.BHP:
        val = 1.27 * 10.0 ** (A / 2.0 + delta) / A + error_const
    else:
        raise DomainError("no closed-form path bound for constant gap models")
    return PathCountBound(kind=kind, A=A, c=c, delta=delta, error_const=error_const, bound_value=val)


@dataclass(frozen=True)
class CountComparison:
    measured: int
    bound: float
    satisfied: bool
    ratio: float


def compare_count(d: PathDecomposition, b: PathCountBound) -> CountComparison:
    """Measured path count against the closed-form bound for the same decade."""
    A = d.segment.exponent()
    if A is None or A != b.A:
        raise DomainError(
            f"decomposition segment {d.segment} is not the decade A={b.A} of the bound"
        )
    if d.model.kind is not b.kind:
        raise DomainError("decomposition and bound use different gap models")
    measured = d.n_paths
    ratio = measured / b.bound_value if b.bound_value != 0 else math.inf
    return CountComparison(
        measured=measured,
        bound=b.bound_value,
        satisfied=measured < b.bound_value,
        ratio=ratio,
    )


@dataclass(frozen=True)
class IsolationResult:
    exceeds_bound: bool
    distance: float | None = None
    dist_squared: int | None = None
    nearest: tuple[int, int] | None = None


def isolation_radius(p: GaussianPrime, search_bound: float) -> IsolationResult:
    """Nearest-neighbor distance from p over the full plane, up to a bound.

    The scan folds every candidate lattice point by symmetry and point-tests
    it, so axis primes at astronomically large norms are fine; comparisons
    happen on exact squared integers.
    """
    if not search_bound > 0:
        raise DomainError("search bound must be positive")
    if not is_gaussian_prime(p.a, p.b):
        raise DomainError(f"{p} is not a Gaussian prime")
    w = math.ceil(search_bound)
    far = (abs(p.a) + w) ** 2 + (abs(p.b) + w) ** 2
    if far >= NORM_CAP:
        raise DomainError("search disk reaches past the 2^63 norm domain")
    bound2 = search_bound * search_bound
    best2 = None
    best_pt = None
    for dx in range(-w, w + 1):
        dx2 = dx * dx
        for dy in range(-w, w + 1):
            if dx == 0 and dy == 0:
                continue
            d2 = dx2 + dy * dy
            if d2 > bound2 or (best2 is not None and d2 >= best2):
                continue
            x = p.a + dx
            y = p.b + dy
            if plane_point_is_gaussian_prime(x, y):
                best2 = d2
                best_pt = (x, y)
    if best2 is None:
        return IsolationResult(exceeds_bound=True)
    return IsolationResult(
        exceeds_bound=False,
        distance=math.sqrt(best2),
        dist_squared=best2,
        nearest=best_pt,
    )


def law_of_cosines(s1: float, s2: float, theta: float) -> float:
    """Third side from two sides and their included angle."""
    return math.sqrt(max(0.0, s1 * s1 + s2 * s2 - 2.0 * s1 * s2 * math.cos(theta)))


@dataclass(frozen=True)
class TriangleRecord:
    path_index: int  # the earlier path n of the (n, n+1) pair
    member_index: int  # m: the triangle uses members m, m+1 of path n
    s1: float  # d(p_m,     q)  with q the nearest member of path n+1 to p_m
    s2: float  # d(p_{m+1}, q)
    s3: float  # the in-path step d(p_m, p_{m+1})
    theta: float  # angle at q between s1 and s2
    within_bound: bool  # both cross sides <= M
    witness: bool  # within_bound yet s3 > sqrt(2) * M


@dataclass
class TriangleAudit:
    M: float
    records: list[TriangleRecord]
    n_within_bound: int
    n_witnesses: int
    max_law_residual: float


def triangle_audit(d: PathDecomposition, M: float) -> TriangleAudit:
    """Law-of-cosines audit over consecutive-path triangles.

    For every in-path step (p_m, p_{m+1}) of path n, the apex q is the member
    of path n+1 nearest to p_m.  A witness row has both cross sides within M
    while the in-path step exceeds sqrt(2)*M -- impossible if the step is to
    fit inside the M-by-M cross-path box.
    """
    if M <= 0:
        raise DomainError("side bound M must be positive")
    records: list[TriangleRecord] = []
    max_resid = 0.0
    root2M = math.sqrt(2.0) * M
    for pi in range(len(d.paths) - 1):
        cur = d.paths[pi].members
        nxt = d.paths[pi + 1].members
        if len(cur) < 2 or not nxt:
            continue
        for m in range(len(cur) - 1):
            p1 = cur[m]
            p2 = cur[m + 1]
            q = min(nxt, key=lambda t: (euclid_gap_squared(p1, t),) + t.sort_key())
            s1 = euclid_gap(p1, q)
            s2 = euclid_gap(p2, q)
            s3 = euclid_gap(p1, p2)
            dot = (p1.a - q.a) * (p2.a - q.a) + (p1.b - q.b) * (p2.b - q.b)
            cos_t = max(-1.0, min(1.0, dot / (s1 * s2)))
            theta = math.acos(cos_t)
            recomputed = s1 * s1 + s2 * s2 - 2.0 * s1 * s2 * math.cos(theta)
            resid = abs(s3 * s3 - recomputed) / max(1.0, s3 * s3)
            max_resid = max(max_resid, resid)
            within = s1 <= M and s2 <= M
            records.append(
                TriangleRecord(
                    path_index=pi + 1,
                    member_index=m + 1,
                    s1=s1,
                    s2=s2,
                    s3=s3,
                    theta=theta,
                    within_bound=within,
                    witness=within and s3 > root2M,
                )
            )
    return TriangleAudit(
        M=M,
        records=records,
        n_within_bound=sum(1 for r in records if r.within_bound),
        n_witnesses=sum(1 for r in records if r.witness),
        max_law_residual=max_resid,
    )
