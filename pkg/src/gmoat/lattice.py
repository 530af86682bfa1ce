"""Shared region model: the canonical octant prime set with mirror-folded
distance queries.

Walks and moats live in the full plane, but the plane picture of Gaussian
primes is 8-fold symmetric, so we store one representative per orbit
(1 <= b <= a, axis primes as (p, 0)).  For two representatives u, v the
minimum distance between their orbits is

    min(|u - v|, |u - mirror(v)|),   mirror(c, d) = (d, c),

because with both points in the closed first octant a sign flip can never
shorten a difference.  All adjacency queries below use that folded metric,
with KD-tree candidates re-checked in exact integer arithmetic.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.spatial import cKDTree

from .arith import (
    DEFAULT_MEMORY_BUDGET,
    GaussianPrime,
    NormSegment,
    _prime_flags,
    _simple_sieve,
    sieve_octant_arrays,
)
from .errors import DomainError

# vectorized distance math needs d^2 exact in float64 comparisons
_REGION_CAP = 1 << 52


class PrimeLattice:
    """Immutable array-of-points view over one sieved region."""

    def __init__(self, a: np.ndarray, b: np.ndarray, norm: np.ndarray, region_limit: int, include_axis: bool):
        self.a = a
        self.b = b
        self.norm = norm
        self.region_limit = int(region_limit)
        self.include_axis = include_axis
        self._tree = None
        self._index = None

    # -- construction ------------------------------------------------------

    @classmethod
    def from_region(
        cls,
        region_limit: int,
        include_axis: bool = False,
        *,
        memory_budget_bytes: int = DEFAULT_MEMORY_BUDGET,
        threads: int = 1,
    ) -> "PrimeLattice":
        """All representatives with geometric norm a^2 + b^2 < region_limit."""
        if region_limit < 3:
            raise DomainError("region must admit at least one prime (limit >= 3)")
        if region_limit > _REGION_CAP:
            raise DomainError("region limit exceeds the 2^52 bulk-geometry cap")
        a, b, n = sieve_octant_arrays(
            NormSegment(2, region_limit),
            False,
            memory_budget_bytes=memory_budget_bytes,
            threads=threads,
        )
        if include_axis:
            # axis primes sit at distance p from the origin: p^2 < limit
            p_top = math.isqrt(region_limit - 1)
            if p_top >= 3:
                base = _simple_sieve(math.isqrt(p_top) + 1)
                p = np.flatnonzero(_prime_flags(3, p_top + 1, base)).astype(np.int64) + 3
                p = p[p % 4 == 3]
                if p.size:
                    a = np.concatenate([a, p])
                    b = np.concatenate([b, np.zeros(p.size, dtype=np.int64)])
                    n = np.concatenate([n, p * p])
                    order = np.lexsort((a, n))
                    a, b, n = a[order], b[order], n[order]
        return cls(a, b, n, region_limit, include_axis)

    @classmethod
    def from_points(cls, points, region_limit: int) -> "PrimeLattice":
        """Synthetic lattice from explicit canonical points (0 <= b <= a).

        Intended for tests; primality of the points is taken on trust.
        """
        pts = sorted(points, key=lambda t: (t[0] * t[0] + t[1] * t[1], t[0], t[1]))
        a = np.array([p[0] for p in pts], dtype=np.int64)
        b = np.array([p[1] for p in pts], dtype=np.int64)
        if np.any(b > a) or np.any(b < 0):
            raise DomainError("synthetic points must satisfy 0 <= b <= a")
        return cls(a, b, a * a + b * b, region_limit, include_axis=True)

    # -- basic views -------------------------------------------------------

    @property
    def size(self) -> int:
        return int(self.a.size)

    def point(self, i: int) -> GaussianPrime:
        return GaussianPrime(int(self.a[i]), int(self.b[i]))

    def index_of(self, p: GaussianPrime) -> int:
        if self._index is None:
            self._index = {(int(x), int(y)): i for i, (x, y) in enumerate(zip(self.a, self.b))}
        try:
            return self._index[(p.a, p.b)]
        except KeyError:
            raise DomainError(f"{p} is not a stored prime of the region (limit {self.region_limit})") from None

    def tree(self) -> cKDTree:
        if self._tree is None:
            self._tree = cKDTree(np.column_stack([self.a, self.b]).astype(np.float64))
        return self._tree

    # -- folded metric -----------------------------------------------------

    def fold_d2(self, i: int, idx: np.ndarray) -> np.ndarray:
        """Exact folded squared distances from point i to points idx."""
        ai, bi = self.a[i], self.b[i]
        dx = self.a[idx] - ai
        dy = self.b[idx] - bi
        direct = dx * dx + dy * dy
        mx = self.a[idx] - bi
        my = self.b[idx] - ai
        mirror = mx * mx + my * my
        return np.minimum(direct, mirror)

    def ball(self, i: int, k2) -> np.ndarray:
        """Indices j != i with folded squared distance <= k2 (exact filter)."""
        r = math.sqrt(float(k2)) * (1.0 + 1e-12) + 1e-9
        tree = self.tree()
        ai, bi = float(self.a[i]), float(self.b[i])
        cand = tree.query_ball_point([ai, bi], r)
        if self.a[i] != self.b[i]:
            cand += tree.query_ball_point([bi, ai], r)
        idx = np.unique(np.asarray(cand, dtype=np.int64))
        idx = idx[idx != i]
        if idx.size == 0:
            return idx
        return idx[self.fold_d2(i, idx) <= k2]

    def near_boundary(self, norm_value, k2) -> bool:
        """Whether a point of that norm sits within sqrt(k2) of the region edge.

        Exact for integer k2: (sqrt(n) + sqrt(k2))^2 >= limit is squared out.
        Python ints avoid the int64 wraparound of the 4*n*k2 product.
        """
        norm_value = int(norm_value)
        if isinstance(k2, (int, np.integer)):
            k2 = int(k2)
        rem = self.region_limit - norm_value - k2
        if rem <= 0:
            return True
        return 4 * norm_value * k2 >= rem * rem

    def pairs_within(self, r2) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """All representative pairs (i < j) with folded d^2 <= r2.

        Returns (i, j, d2) sorted by (d2, i, j).  Mirrored copies of
        off-diagonal points are added so diagonal-crossing pairs are found.
        """
        pts = np.column_stack([self.a, self.b]).astype(np.float64)
        off = np.flatnonzero(self.a != self.b)
        ids = np.concatenate([np.arange(self.size, dtype=np.int64), off])
        doubled = np.vstack([pts, pts[off][:, ::-1]])
        tree = cKDTree(doubled)
        pairs = tree.query_pairs(math.sqrt(float(r2)) * (1.0 + 1e-12) + 1e-9, output_type="ndarray")
        if pairs.size == 0:
            z = np.empty(0, dtype=np.int64)
            return z, z.copy(), z.copy()
        i = ids[pairs[:, 0]]
        j = ids[pairs[:, 1]]
        keep = i != j
        i, j = i[keep], j[keep]
        lo = np.minimum(i, j)
        hi = np.maximum(i, j)
        enc = np.unique(lo * np.int64(self.size) + hi)
        lo = enc // self.size
        hi = enc % self.size
        dx = self.a[lo] - self.a[hi]
        dy = self.b[lo] - self.b[hi]
        direct = dx * dx + dy * dy
        mx = self.a[lo] - self.b[hi]
        my = self.b[lo] - self.a[hi]
        d2 = np.minimum(direct, mx * mx + my * my)
        keep = d2 <= r2
        lo, hi, d2 = lo[keep], hi[keep], d2[keep]
        order = np.lexsort((hi, lo, d2))
        return lo[order], hi[order], d2[order]

    def nearest_outside(self, member_mask: np.ndarray):
        """Minimum folded d^2 from any member to any non-member, or None.

        k-nearest queries (from the point and its mirror) expand until a
        non-member shows up; fine because probing happens per member.
        """
        if member_mask.all():
            return None
        tree = self.tree()
        best = None
        for i in np.flatnonzero(member_mask):
            probes = [(float(self.a[i]), float(self.b[i]))]
            if self.a[i] != self.b[i]:
                probes.append((float(self.b[i]), float(self.a[i])))
            for q in probes:
                k = 8
                while True:
                    k = min(k, self.size)
                    _, nbr = tree.query(q, k=k)
                    nbr = np.atleast_1d(nbr)
                    outside = nbr[~member_mask[nbr]]
                    if outside.size:
                        d2 = int(self.fold_d2(i, outside).min())
                        if best is None or d2 < best:
                            best = d2
                        break
                    if k >= self.size:
                        break
                    k *= 4
        return best
