"""Binary segment cache.

Little-endian layout:

    magic   8 bytes  b"GMOATSEG"
    version u16      1
    flags   u16      bit0 = include_axis (other bits must be clear)
    lo      u64      segment lower bound (inclusive)
    hi      u64      segment upper bound (exclusive)
    count   u64      number of records
    records count * (a u64, b u64), sorted by (norm, a)
    crc32   u32      checksum of the record region

Writes are atomic (temp file + rename).  Reads re-validate everything:
structure, checksum, ordering, segment membership, and per-record
Gaussian-primality, so a cache can be trusted as sieve output.
"""

from __future__ import annotations

import os
import struct
import zlib
from pathlib import Path

import numpy as np

from .arith import GaussianPrime, NormSegment, is_gaussian_prime
from .errors import CacheFormatError, CacheIntegrityError, DomainError

MAGIC = b"GMOATSEG"
VERSION = 1
FLAG_INCLUDE_AXIS = 0x0001

_HEADER = struct.Struct("<8sHHQQQ")
_TRAILER = struct.Struct("<I")


def _underlying_prime(a: int, b: int) -> int:
    # axis records are filed under their coordinate, off-axis under the norm
    return a if b == 0 else a * a + b * b


def _validate_records(primes, segment: NormSegment, include_axis: bool, exc) -> None:
    prev_key = None
    for p in primes:
        if p.b == 0 and not include_axis:
            raise exc(f"axis record {p} present without the include_axis flag")
        try:
            ok = is_gaussian_prime(p.a, p.b)
        except DomainError:
            ok = False  # corrupt coordinates can leave the numeric domain
        if not ok:
            raise exc(f"record {p} is not a Gaussian prime")
        if p.b != 0 and not p.b <= p.a:
            raise exc(f"record {p} is not folded into the first octant")
        u = _underlying_prime(p.a, p.b)
        if not segment.lo <= u < segment.hi:
            raise exc(f"record {p} falls outside segment {segment}")
        key = (p.norm, p.a)
        if prev_key is not None and key <= prev_key:
            raise exc("records are not strictly sorted by (norm, a)")
        prev_key = key


def write_segment(path, primes, segment: NormSegment, include_axis: bool = False) -> None:
    """Atomically write a validated segment cache file."""
    primes = list(primes)
    _validate_records(primes, segment, include_axis, DomainError)
    flags = FLAG_INCLUDE_AXIS if include_axis else 0
    header = _HEADER.pack(MAGIC, VERSION, flags, segment.lo, segment.hi, len(primes))
    if primes:
        rec = np.empty((len(primes), 2), dtype="<u8")
        rec[:, 0] = [p.a for p in primes]
        rec[:, 1] = [p.b for p in primes]
        payload = rec.tobytes()
    else:
        payload = b""
    blob = header + payload + _TRAILER.pack(zlib.crc32(payload))
    target = Path(path)
    tmp = target.with_name(target.name + ".tmp")
    tmp.write_bytes(blob)
    os.replace(tmp, target)


def read_segment(path) -> tuple[NormSegment, bool, list[GaussianPrime]]:
    """Read and fully validate a cache file -> (segment, include_axis, primes)."""
    data = Path(path).read_bytes()
    if len(data) < _HEADER.size + _TRAILER.size:
        raise CacheIntegrityError("cache file truncated below header size")
    magic, version, flags, lo, hi, count = _HEADER.unpack_from(data)
    if magic != MAGIC:
        raise CacheFormatError("bad magic: not a segment cache file")
    if version != VERSION:
        raise CacheFormatError(f"unsupported cache version {version}")
    if flags & ~FLAG_INCLUDE_AXIS:
        raise CacheFormatError(f"unsupported flag bits 0x{flags:04x}")
    expected = _HEADER.size + 16 * count + _TRAILER.size
    if len(data) != expected:
        raise CacheIntegrityError(
            f"length mismatch: {len(data)} bytes for a {count}-record file ({expected} expected)"
        )
    payload = data[_HEADER.size : _HEADER.size + 16 * count]
    (crc,) = _TRAILER.unpack_from(data, _HEADER.size + 16 * count)
    if zlib.crc32(payload) != crc:
        raise CacheIntegrityError("payload checksum mismatch")
    try:
        segment = NormSegment(lo, hi)
    except DomainError as e:
        raise CacheIntegrityError(f"invalid segment bounds: {e}") from None
    include_axis = bool(flags & FLAG_INCLUDE_AXIS)
    rec = np.frombuffer(payload, dtype="<u8").reshape(count, 2)
    primes = [GaussianPrime(int(a), int(b)) for a, b in rec]
    _validate_records(primes, segment, include_axis, CacheIntegrityError)
    return segment, include_axis, primes
