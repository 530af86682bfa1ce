"""Exact arithmetic core: deterministic primality, Gaussian-prime recognition,
and first-octant sieving over half-open norm segments.

Conventions used throughout the package:

* off-axis Gaussian primes are stored once, canonically folded into the first
  octant 1 <= b <= a; their norm a^2 + b^2 is an ordinary prime;
* axis primes (rational primes p = 3 mod 4) are stored as (p, 0); a pure
  imaginary input may still be tested point-wise as (0, p);
* every arithmetic argument must stay below 2^63.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, ResourceError

#: Hard numeric domain: norms and primality arguments must be < 2^63.
NORM_CAP = 1 << 63

#: Default memory budget for bulk sieving (bytes).
DEFAULT_MEMORY_BUDGET = 2 << 30

# Witness set making Miller-Rabin deterministic for all n < 3.3e24,
# which comfortably covers the 2^63 domain cap.
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)

_CHUNK_SPAN = 1 << 24


def is_prime_u64(n: int) -> bool:
    """Deterministic Miller-Rabin primality test for 0 <= n < 2^63."""
    if n < 0 or n >= NORM_CAP:
        raise DomainError(f"primality argument out of [0, 2^63) domain: {n}")
    if n < 2:
        return False
    for p in _MR_WITNESSES:
        if n % p == 0:
            return n == p
    d = n - 1
    s = (d & -d).bit_length() - 1
    d >>= s
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class GaussianPrime:
    """A stored lattice point; off-axis iff both coordinates are positive.

    The container itself does not enforce primality -- use is_gaussian_prime
    for that -- but all sieve outputs satisfy it by construction.
    """

    a: int
    b: int

    @property
    def norm(self) -> int:
        return self.a * self.a + self.b * self.b

    def sort_key(self) -> tuple[int, int, int]:
        # canonical total order used by every deterministic tie-break
        return (self.norm, self.a, self.b)

    def __str__(self) -> str:
        return f"({self.a},{self.b})"


def _parse_norm_value(text: str) -> int:
    """Parse '1000', '10^3' or '1e3' into an exact integer."""
    text = text.strip()
    try:
        if "^" in text:
            base, _, exp = text.partition("^")
            return int(base) ** int(exp)
        try:
            return int(text)
        except ValueError:
            pass
        val = float(text)
    except ValueError:
        raise DomainError(f"cannot parse bound {text!r}") from None
    if not val.is_integer():
        raise DomainError(f"expected an integer bound, got {text!r}")
    return int(val)


@dataclass(frozen=True)
class NormSegment:
    """Half-open norm range [lo, hi).

    Membership is decided by the underlying ordinary prime: a^2 + b^2 for
    off-axis points, the coordinate itself for axis primes.
    """

    lo: int
    hi: int

    def __post_init__(self):
        if not (2 <= self.lo < self.hi):
            raise DomainError(f"invalid segment [{self.lo}, {self.hi}): need 2 <= lo < hi")
        if self.hi > NORM_CAP:
            raise DomainError("segment exceeds the 2^63 arithmetic domain")

    @classmethod
    def parse(cls, text: str) -> "NormSegment":
        """Accepts '1000:10000', '10^3:10^4', or mixed forms."""
        lo_s, sep, hi_s = text.partition(":")
        if not sep:
            raise DomainError(f"segment must look like LO:HI, got {text!r}")
        return cls(_parse_norm_value(lo_s), _parse_norm_value(hi_s))

    @classmethod
    def power_of_ten(cls, A: int) -> "NormSegment":
        """The canonical decade [10^(A-1), 10^A); A=1 starts at 2."""
        if A < 1:
            raise DomainError("decade exponent must be >= 1")
        return cls(max(2, 10 ** (A - 1)), 10 ** A)

    def exponent(self) -> int | None:
        """A when this segment is the canonical decade, else None."""
        A = round(math.log10(self.hi))
        if 10 ** A == self.hi and self.lo == max(2, 10 ** (A - 1)):
            return A
        return None

    def __str__(self) -> str:
        return f"[{self.lo},{self.hi})"


def is_gaussian_prime(a: int, b: int) -> bool:
    """First-quadrant Gaussian-prime test.

    Off-axis points need a prime norm a^2 + b^2; axis points need a prime
    coordinate congruent to 3 mod 4.  Negative input is rejected: callers
    fold by symmetry first.
    """
    if a < 0 or b < 0:
        raise DomainError("coordinates must be nonnegative; fold by symmetry first")
    if a * a + b * b >= NORM_CAP:
        raise DomainError("norm exceeds the 2^63 arithmetic domain")
    if a == 0:
        return b % 4 == 3 and is_prime_u64(b)
    if b == 0:
        return a % 4 == 3 and is_prime_u64(a)
    return is_prime_u64(a * a + b * b)


def plane_point_is_gaussian_prime(x: int, y: int) -> bool:
    """Gaussian-prime test for a lattice point in any quadrant."""
    return is_gaussian_prime(abs(x), abs(y))


def norm_gap(p: GaussianPrime, q: GaussianPrime) -> int:
    """|N(p) - N(q)|: the gap measured along the norm line."""
    return abs(p.norm - q.norm)


def euclid_gap_squared(p: GaussianPrime, q: GaussianPrime) -> int:
    """Exact squared Euclidean distance between stored points."""
    da = p.a - q.a
    db = p.b - q.b
    return da * da + db * db


def euclid_gap(p: GaussianPrime, q: GaussianPrime) -> float:
    """Euclidean distance between stored points (plane gap)."""
    return math.sqrt(euclid_gap_squared(p, q))


def two_square_decomposition(p: int) -> tuple[int, int]:
    """(a, b) with a >= b >= 1 and a^2 + b^2 = p, for p = 2 or p = 1 mod 4 prime.

    Hermite-Serret: run Euclid on (p, x) where x^2 = -1 mod p; the first two
    remainders below sqrt(p) are the legs.
    """
    if p == 2:
        return (1, 1)
    if p % 4 != 1 or not is_prime_u64(p):
        raise DomainError(f"{p} has no two-square decomposition")
    x = 0
    for r in range(2, p):
        if pow(r, (p - 1) // 2, p) == p - 1:
            x = pow(r, (p - 1) // 4, p)
            break
    u, v = p, x
    while v * v > p:
        u, v = v, u % v
    w = u % v
    return (max(v, w), min(v, w))


# ---------------------------------------------------------------------------
# segment sieving


def _simple_sieve(limit: int) -> np.ndarray:
    """All primes <= limit as an int64 array (plain Eratosthenes)."""
    if limit < 2:
        return np.empty(0, dtype=np.int64)
    flags = np.ones(limit + 1, dtype=bool)
    flags[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if flags[p]:
            flags[p * p :: p] = False
    return np.flatnonzero(flags).astype(np.int64)


def _ceil_sqrt(x: int) -> int:
    return 0 if x <= 0 else math.isqrt(x - 1) + 1


def _prime_flags(lo: int, hi: int, base_primes: np.ndarray) -> np.ndarray:
    """Boolean array over [lo, hi): flags[i] iff lo+i is prime."""
    size = hi - lo
    flags = np.ones(size, dtype=bool)
    if lo < 2:
        flags[: min(size, 2 - lo)] = False
    for p in base_primes:
        p = int(p)
        pp = p * p
        if pp >= hi:
            break
        start = max(pp, ((lo + p - 1) // p) * p)
        if start < hi:
            flags[start - lo :: p] = False
    return flags


def _octant_chunk(c0: int, c1: int, base: np.ndarray, include_axis: bool):
    """Octant representatives with underlying prime in [c0, c1)."""
    flags = _prime_flags(c0, c1, base)
    cols_a, cols_b, cols_n = [], [], []
    b_top = math.isqrt((c1 - 1) // 2)
    for b in range(1, b_top + 1):
        b2 = b * b
        a_lo = max(b, _ceil_sqrt(c0 - b2))
        a_hi = math.isqrt(c1 - 1 - b2)
        if a_hi < a_lo:
            continue
        a = np.arange(a_lo, a_hi + 1, dtype=np.int64)
        n = a * a + b2
        keep = flags[n - c0]
        if keep.any():
            a = a[keep]
            cols_a.append(a)
            cols_b.append(np.full(a.size, b, dtype=np.int64))
            cols_n.append(n[keep])
    if include_axis:
        p = np.flatnonzero(flags).astype(np.int64) + c0
        p = p[p % 4 == 3]
        if p.size:
            cols_a.append(p)
            cols_b.append(np.zeros(p.size, dtype=np.int64))
            cols_n.append(p * p)
    if not cols_a:
        z = np.empty(0, dtype=np.int64)
        return z, z.copy(), z.copy()
    return (np.concatenate(cols_a), np.concatenate(cols_b), np.concatenate(cols_n))


def _budget_check(segment: NormSegment, budget: int) -> None:
    span = segment.hi - segment.lo
    expected = span / max(math.log(segment.hi), 2.0) / 2 + 1024
    need = int(expected * 8 * 3 * 2) + min(span, _CHUNK_SPAN)
    if need > budget:
        raise ResourceError(
            f"sieving {segment} needs roughly {need >> 20} MiB "
            f"(budget {budget >> 20} MiB); raise memory_budget_bytes to proceed"
        )


def sieve_octant_arrays(
    segment: NormSegment,
    include_axis: bool = False,
    *,
    memory_budget_bytes: int = DEFAULT_MEMORY_BUDGET,
    threads: int = 1,
):
    """(a, b, norm) int64 arrays sorted by (norm, a).

    Off-axis entries have prime norm in the segment; axis entries (p, 0)
    are included when include_axis and the prime p itself lies in the
    segment (their stored norm is p^2).
    """
    _budget_check(segment, memory_budget_bytes)
    base = _simple_sieve(math.isqrt(segment.hi - 1) + 1)
    spans = [
        (c0, min(c0 + _CHUNK_SPAN, segment.hi))
        for c0 in range(segment.lo, segment.hi, _CHUNK_SPAN)
    ]
    if threads and threads > 1 and len(spans) > 1:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            parts = list(ex.map(lambda s: _octant_chunk(s[0], s[1], base, include_axis), spans))
    else:
        parts = [_octant_chunk(c0, c1, base, include_axis) for c0, c1 in spans]
    a = np.concatenate([p[0] for p in parts])
    b = np.concatenate([p[1] for p in parts])
    n = np.concatenate([p[2] for p in parts])
    order = np.lexsort((a, n))
    return a[order], b[order], n[order]


def sieve_octant(
    segment: NormSegment,
    include_axis: bool = False,
    *,
    memory_budget_bytes: int = DEFAULT_MEMORY_BUDGET,
    threads: int = 1,
) -> list[GaussianPrime]:
    """All stored Gaussian primes for the segment, sorted by (norm, a)."""
    a, b, _ = sieve_octant_arrays(
        segment, include_axis, memory_budget_bytes=memory_budget_bytes, threads=threads
    )
    return [GaussianPrime(int(x), int(y)) for x, y in zip(a, b)]


def count_residue_classes(limit: int) -> tuple[int, int]:
    """(#primes = 1 mod 4, #primes = 3 mod 4) among odd primes <= limit."""
    if limit >= NORM_CAP:
        raise DomainError("limit exceeds the 2^63 arithmetic domain")
    if limit < 3:
        return (0, 0)
    base = _simple_sieve(math.isqrt(limit) + 1)
    c1 = c3 = 0
    for c0 in range(3, limit + 1, _CHUNK_SPAN):
        cend = min(c0 + _CHUNK_SPAN, limit + 1)
        hits = np.flatnonzero(_prime_flags(c0, cend, base)).astype(np.int64) + c0
        r = hits % 4
        c1 += int(np.count_nonzero(r == 1))
        c3 += int(np.count_nonzero(r == 3))
    return c1, c3
