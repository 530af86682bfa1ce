"""Percolation-style questions on the prime lattice: step-bounded components,
widest-escape thresholds, minimax hops, and the factorial empty-square scan.

All step bounds are exact squared integers; a component is "exhausted" when
its closure stays at least sqrt(k2) away from the sieved region's edge, so
the moat it found cannot be an artifact of truncation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .arith import (
    DEFAULT_MEMORY_BUDGET,
    NORM_CAP,
    GaussianPrime,
    is_gaussian_prime,
    is_prime_u64,
    plane_point_is_gaussian_prime,
    two_square_decomposition,
)
from .errors import DomainError, InconclusiveRegionError, InternalInvariantError
from .lattice import PrimeLattice


@dataclass(frozen=True)
class StepBound:
    """Exact squared hop bound: a walk may step between primes at d^2 <= k_squared."""

    k_squared: int

    def __post_init__(self):
        if self.k_squared < 1:
            raise DomainError("k_squared must be a positive integer")

    @property
    def k(self) -> float:
        return math.sqrt(self.k_squared)


@dataclass
class MoatComponent:
    seed: GaussianPrime
    step: StepBound
    region_limit: int
    members: list[GaussianPrime]
    exhausted: bool
    boundary_gap_squared: int | None

    @property
    def size(self) -> int:
        return len(self.members)


def _component_indices(lat: PrimeLattice, seed_idx: int, k2) -> np.ndarray:
    visited = np.zeros(lat.size, dtype=bool)
    visited[seed_idx] = True
    stack = [seed_idx]
    while stack:
        i = stack.pop()
        for j in lat.ball(i, k2):
            if not visited[j]:
                visited[j] = True
                stack.append(int(j))
    return visited


def component(
    seed: GaussianPrime,
    step: StepBound,
    region_limit: int,
    include_axis: bool = False,
    *,
    lattice: PrimeLattice | None = None,
    memory_budget_bytes: int = DEFAULT_MEMORY_BUDGET,
    threads: int = 1,
) -> MoatComponent:
    """BFS closure of the seed under hops of squared length <= k_squared."""
    lat = lattice or PrimeLattice.from_region(
        region_limit, include_axis, memory_budget_bytes=memory_budget_bytes, threads=threads
    )
    seed_idx = lat.index_of(seed)
    k2 = step.k_squared
    visited = _component_indices(lat, seed_idx, k2)
    idx = np.flatnonzero(visited)
    members = [lat.point(int(i)) for i in idx]
    max_norm = int(lat.norm[idx].max())
    exhausted = not lat.near_boundary(max_norm, k2)
    gap2 = None
    if exhausted:
        gap2 = lat.nearest_outside(visited)
        if gap2 is not None and gap2 <= k2:
            raise InternalInvariantError(
                f"closure incomplete: boundary gap {gap2} <= step bound {k2}"
            )
    return MoatComponent(seed, step, lat.region_limit, members, exhausted, gap2)


class _UnionFind:
    """Array union-find with rank and per-root max-norm payload."""

    def __init__(self, norms: np.ndarray):
        n = norms.size
        self.parent = list(range(n))
        self.rank = [0] * n
        self.max_norm = [int(x) for x in norms]

    def find(self, x: int) -> int:
        p = self.parent
        while p[x] != x:
            p[x] = p[p[x]]
            x = p[x]
        return x

    def union(self, x: int, y: int) -> bool:
        rx, ry = self.find(x), self.find(y)
        if rx == ry:
            return False
        if self.rank[rx] < self.rank[ry]:
            rx, ry = ry, rx
        self.parent[ry] = rx
        if self.rank[rx] == self.rank[ry]:
            self.rank[rx] += 1
        if self.max_norm[ry] > self.max_norm[rx]:
            self.max_norm[rx] = self.max_norm[ry]
        return True


@dataclass(frozen=True)
class EscapeReport:
    seed: GaussianPrime
    region_limit: int
    k_squared: int
    next_k_squared: int
    component_size: int
    boundary_gap_squared: int | None

    @property
    def width(self) -> float:
        """Moat width realized at the widest exhausted threshold."""
        if self.boundary_gap_squared is None:
            return math.inf
        return math.sqrt(self.boundary_gap_squared)


def widest_escape(
    seed: GaussianPrime,
    region_limit: int,
    include_axis: bool = False,
    *,
    lattice: PrimeLattice | None = None,
    memory_budget_bytes: int = DEFAULT_MEMORY_BUDGET,
    threads: int = 1,
) -> EscapeReport:
    """Largest realized k_squared whose seed component is still exhausted.

    Candidate thresholds are exactly the realized squared inter-prime
    distances, scanned in increasing order with a union-find; a component
    can only change at those values.  Exhaustion is monotone, so the scan
    stops at the first threshold that reaches the boundary zone.
    """
    lat = lattice or PrimeLattice.from_region(
        region_limit, include_axis, memory_budget_bytes=memory_budget_bytes, threads=threads
    )
    seed_idx = lat.index_of(seed)
    uf = _UnionFind(lat.norm)
    r2 = 8
    done_r2 = 0
    prev_k2 = None
    max_r2 = 4 * lat.region_limit + 4
    while True:
        ii, jj, d2 = lat.pairs_within(r2)
        keep = d2 > done_r2
        ii, jj, d2 = ii[keep], jj[keep], d2[keep]
        pos = 0
        m = d2.size
        while pos < m:
            k2 = int(d2[pos])
            while pos < m and d2[pos] == k2:
                uf.union(int(ii[pos]), int(jj[pos]))
                pos += 1
            root = uf.find(seed_idx)
            if lat.near_boundary(uf.max_norm[root], k2):
                if prev_k2 is None:
                    raise InconclusiveRegionError(
                        f"seed escapes the region already at k_squared={k2}; "
                        "grow the region to witness a moat"
                    )
                comp = component(
                    seed, StepBound(prev_k2), lat.region_limit, include_axis, lattice=lat
                )
                return EscapeReport(
                    seed=seed,
                    region_limit=lat.region_limit,
                    k_squared=prev_k2,
                    next_k_squared=k2,
                    component_size=comp.size,
                    boundary_gap_squared=comp.boundary_gap_squared,
                )
            prev_k2 = k2
        done_r2 = r2
        r2 *= 4
        if done_r2 >= max_r2:
            raise InconclusiveRegionError(
                "every realized threshold keeps the component interior; "
                "the region cannot witness an escape"
            )


@dataclass(frozen=True)
class MinimaxResult:
    connected: bool
    hop_squared: int | None

    @property
    def hop(self) -> float:
        return math.inf if self.hop_squared is None else math.sqrt(self.hop_squared)


class MinimaxIndex:
    """Bottleneck-hop queries over one region via a Kruskal merge tree.

    minimax(p, q) is the smallest threshold t such that p and q connect when
    hops of squared length <= t are allowed; equivalently the largest edge on
    the bottleneck path.  Edges are scanned in increasing folded d^2 and each
    union records a dendrogram node carrying that weight; a query walks to the
    lowest common ancestor.
    """

    def __init__(
        self,
        region_limit: int,
        include_axis: bool = False,
        *,
        lattice: PrimeLattice | None = None,
        memory_budget_bytes: int = DEFAULT_MEMORY_BUDGET,
        threads: int = 1,
        start_r2: int = 64,
    ):
        self.lat = lattice or PrimeLattice.from_region(
            region_limit, include_axis, memory_budget_bytes=memory_budget_bytes, threads=threads
        )
        self._max_r2 = 4 * self.lat.region_limit + 4
        self._built_r2 = 0
        self._build(min(start_r2, self._max_r2))

    def _build(self, r2: int) -> None:
        n = self.lat.size
        ii, jj, d2 = self.lat.pairs_within(r2)
        uf = _UnionFind(self.lat.norm)
        # dendrogram: leaves 0..n-1, internal nodes appended per union
        node_parent = list(range(n))
        node_weight = [0] * n
        root_node = list(range(n))
        for x, y, w in zip(ii, jj, d2):
            rx, ry = uf.find(int(x)), uf.find(int(y))
            if rx == ry:
                continue
            nx, ny = root_node[rx], root_node[ry]
            uf.union(rx, ry)
            top = uf.find(rx)
            new = len(node_parent)
            node_parent.append(new)
            node_weight.append(int(w))
            node_parent[nx] = new
            node_parent[ny] = new
            root_node[top] = new
        self._uf = uf
        self._node_parent = node_parent
        self._node_weight = node_weight
        self._built_r2 = r2

    def _lca_weight(self, u: int, v: int) -> int:
        seen = {}
        x = u
        while True:
            seen[x] = True
            if self._node_parent[x] == x:
                break
            x = self._node_parent[x]
        x = v
        while x not in seen:
            x = self._node_parent[x]
        return self._node_weight[x]

    def hop(self, p: GaussianPrime, q: GaussianPrime) -> MinimaxResult:
        iu = self.lat.index_of(p)
        iv = self.lat.index_of(q)
        if iu == iv:
            return MinimaxResult(True, 0)
        while self._uf.find(iu) != self._uf.find(iv):
            if self._built_r2 >= self._max_r2:
                return MinimaxResult(False, None)
            self._build(min(self._built_r2 * 4, self._max_r2))
        return MinimaxResult(True, self._lca_weight(iu, iv))


def minimax_hop(
    p: GaussianPrime,
    q: GaussianPrime,
    region_limit: int,
    include_axis: bool = False,
    *,
    index: MinimaxIndex | None = None,
    memory_budget_bytes: int = DEFAULT_MEMORY_BUDGET,
    threads: int = 1,
) -> MinimaxResult:
    """Minimax hop threshold between two primes of the region."""
    idx = index or MinimaxIndex(
        region_limit, include_axis, memory_budget_bytes=memory_budget_bytes, threads=threads
    )
    return idx.hop(p, q)


@dataclass(frozen=True)
class FactorialSquareReport:
    n: int
    factorial: int
    plus_one: int
    plus_one_is_prime: bool
    plus_one_mod4: int
    lift: tuple[int, int] | None
    square_x: tuple[int, int]
    square_y: tuple[int, int]
    primes_found: tuple[tuple[int, int], ...]


def factorial_square_check(n: int) -> FactorialSquareReport:
    """Scan the square [n!-n, n!+n] x [0, 2n] for Gaussian primes.

    n!±k is divisible by k for 2 <= k <= n, so on the real axis only n!±1
    can be prime; the scan reports every Gaussian prime point in the square
    (off-axis points are prime whenever x^2 + y^2 is), plus whether n!+1 is
    a 1 mod 4 prime and its two-square lift when it is.
    """
    if n < 2:
        raise DomainError("factorial scan needs n >= 2")
    f = math.factorial(n)
    x_hi = f + n
    y_hi = 2 * n
    if x_hi * x_hi + y_hi * y_hi >= NORM_CAP:
        raise DomainError(f"n={n} pushes square norms past the 2^63 domain")
    found = []
    for x in range(f - n, f + n + 1):
        for y in range(0, y_hi + 1):
            if plane_point_is_gaussian_prime(x, y):
                found.append((x, y))
    plus_one = f + 1
    prime = is_prime_u64(plus_one)
    lift = None
    if prime and plus_one % 4 == 1:
        lift = two_square_decomposition(plus_one)
    return FactorialSquareReport(
        n=n,
        factorial=f,
        plus_one=plus_one,
        plus_one_is_prime=prime,
        plus_one_mod4=plus_one % 4,
        lift=lift,
        square_x=(f - n, f + n),
        square_y=(0, y_hi),
        primes_found=tuple(found),
    )
