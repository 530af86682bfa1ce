"""Disk lattice-point counts and octant prime-density summaries.

N(R) counts integer points inside the closed disk of radius R; the error
term E(R) = N(R) - pi R^2 is classically bounded by 2*sqrt(2)*pi*R, which we
treat as an inequality to audit, and conjecturally grows like R^(1/2+eps).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .arith import (
    DEFAULT_MEMORY_BUDGET,
    NORM_CAP,
    NormSegment,
    _ceil_sqrt,
    sieve_octant_arrays,
)
from .errors import DomainError

#: Coefficient of the classical |E(R)| <= 2*sqrt(2)*pi*R bound.
GAUSS_ERROR_COEFF = 2.0 * math.sqrt(2.0) * math.pi


@dataclass(frozen=True)
class CircleCount:
    R: float
    N: int

    @property
    def E(self) -> float:
        return self.N - math.pi * self.R * self.R


def _isqrt_exact(v: np.ndarray) -> np.ndarray:
    """Elementwise floor-sqrt of nonnegative int64, exact via fixup."""
    t = np.sqrt(v.astype(np.float64)).astype(np.int64)
    t = np.where((t + 1) * (t + 1) <= v, t + 1, t)
    t = np.where(t * t > v, t - 1, t)
    return t


def lattice_count(R) -> CircleCount:
    """Exact N(R) by summing per-column counts 2*floor(sqrt(R^2-x^2))+1."""
    if R < 0:
        raise DomainError("radius must be nonnegative")
    if float(R).is_integer():
        S = int(R) * int(R)
    else:
        S = int(math.floor(R * R))
    if S >= NORM_CAP:
        raise DomainError("R^2 exceeds the 2^63 arithmetic domain")
    xm = math.isqrt(S)
    if xm == 0:
        return CircleCount(float(R), 1)
    x = np.arange(1, xm + 1, dtype=np.int64)
    t = _isqrt_exact(S - x * x)
    N = 2 * xm + 1 + 2 * int(np.sum(2 * t + 1))
    return CircleCount(float(R), N)


def lattice_counts_upto(r_max: int) -> np.ndarray:
    """N(R) for every integer R in [0, r_max] (index = R)."""
    if r_max < 0:
        raise DomainError("radius must be nonnegative")
    out = np.empty(r_max + 1, dtype=np.int64)
    out[0] = 1
    for R in range(1, r_max + 1):
        S = R * R
        x = np.arange(1, R + 1, dtype=np.int64)
        t = _isqrt_exact(S - x * x)
        out[R] = 2 * R + 1 + 2 * int(np.sum(2 * t + 1))
    return out


def error_exponent_fit(r_lo: int = 100, r_hi: int = 10_000, counts: np.ndarray | None = None):
    """Least-squares slope of log|E(R)| against log R over integer radii.

    Returns (slope, points_used).  Radii with E(R) = 0 are skipped.  This is
    a reported diagnostic, not an asserted bound.
    """
    if not (0 < r_lo < r_hi):
        raise DomainError("need 0 < r_lo < r_hi")
    if counts is None:
        counts = lattice_counts_upto(r_hi)
    R = np.arange(r_lo, r_hi + 1, dtype=np.float64)
    E = counts[r_lo : r_hi + 1].astype(np.float64) - math.pi * R * R
    keep = np.abs(E) > 1e-9
    slope = float(np.polyfit(np.log(R[keep]), np.log(np.abs(E[keep])), 1)[0])
    return slope, int(np.count_nonzero(keep))


@dataclass(frozen=True)
class DensityReport:
    segment: NormSegment
    lattice_points_octant: int
    gaussian_primes_octant: int
    pnt_estimate: float
    ratio_actual_vs_estimate: float


def octant_lattice_points(segment: NormSegment) -> int:
    """Exact count of lattice points 1 <= b <= a with norm in the segment."""
    total = 0
    b_top = math.isqrt((segment.hi - 1) // 2)
    for b in range(1, b_top + 1):
        b2 = b * b
        a_lo = max(b, _ceil_sqrt(segment.lo - b2))
        a_hi = math.isqrt(segment.hi - 1 - b2)
        if a_hi >= a_lo:
            total += a_hi - a_lo + 1
    return total


def octant_prime_density(
    segment: NormSegment,
    *,
    memory_budget_bytes: int = DEFAULT_MEMORY_BUDGET,
    threads: int = 1,
) -> DensityReport:
    """Off-axis prime count against the hi/(2 ln hi) PNT-style estimate."""
    a, _, _ = sieve_octant_arrays(
        segment, False, memory_budget_bytes=memory_budget_bytes, threads=threads
    )
    primes = int(a.size)
    estimate = segment.hi / (2.0 * math.log(segment.hi))
    return DensityReport(
        segment=segment,
        lattice_points_octant=octant_lattice_points(segment),
        gaussian_primes_octant=primes,
        pnt_estimate=estimate,
        ratio_actual_vs_estimate=primes / estimate,
    )
