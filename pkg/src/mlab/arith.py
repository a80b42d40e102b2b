"""Möbius and Liouville functions, pointwise and by segmented sieve.

Point functions use trial factorization and serve as the independent check
on the sieve.  Summatory functions M(x) and L(x) are accumulated exactly over
consecutive segments; segments may be sieved on a thread pool but are always
folded in index order, so traces do not depend on the thread count.
"""

from __future__ import annotations

import csv
import enum
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterator, Optional, Sequence

import numpy as np

from ._kernels import sieve_block
from .errors import CapacityError, DomainError

DEFAULT_SEGMENT_SIZE = 1 << 20
MAX_X = 2**63 - 1
# bytes held per sieved integer: int64 cofactor product, two int8 tables, int64 prefix sum
_BYTES_PER_ELEMENT = 18
_MIN_SEGMENT = 1 << 12


class Kind(str, enum.Enum):
    MOBIUS = "mobius"
    LIOUVILLE = "liouville"
    TWISTED = "twisted"

    @classmethod
    def parse(cls, value) -> "Kind":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise DomainError(f"unknown summatory kind {value!r}") from None


# -- point functions ---------------------------------------------------------

def factorize(n: int) -> dict[int, int]:
    """Prime factorization of n >= 1 by trial division, as {p: exponent}."""
    n = int(n)
    if n < 1:
        raise DomainError(f"factorize requires n >= 1, got {n}")
    out: dict[int, int] = {}
    while n % 2 == 0:
        out[2] = out.get(2, 0) + 1
        n //= 2
    d = 3
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def omega(n: int) -> int:
    """Number of distinct prime divisors."""
    return len(factorize(n))


def big_omega(n: int) -> int:
    """Number of prime divisors counted with multiplicity."""
    return sum(factorize(n).values())


def mobius_point(n: int) -> int:
    f = factorize(n)
    if any(e > 1 for e in f.values()):
        return 0
    return -1 if len(f) % 2 else 1


def liouville_point(n: int) -> int:
    return -1 if sum(factorize(n).values()) % 2 else 1


# -- prime tables --------------------------------------------------------------

_prime_cache = np.array([2, 3, 5, 7], dtype=np.int64)
_prime_cache_limit = 10


def primes_up_to(limit: int) -> np.ndarray:
    """All primes <= limit as int64 (plain Eratosthenes)."""
    limit = int(limit)
    if limit < 2:
        return np.zeros(0, dtype=np.int64)
    flags = np.ones(limit + 1, dtype=bool)
    flags[:2] = False
    flags[4::2] = False
    for p in range(3, math.isqrt(limit) + 1, 2):
        if flags[p]:
            flags[p * p::2 * p] = False
    return np.flatnonzero(flags).astype(np.int64)


def _sieving_primes(hi: int) -> np.ndarray:
    """Primes up to sqrt(hi), from a cache grown on demand."""
    global _prime_cache, _prime_cache_limit
    need = math.isqrt(max(hi, 4)) + 1
    if need > _prime_cache_limit:
        limit = max(need, 2 * _prime_cache_limit)
        _prime_cache = primes_up_to(limit)
        _prime_cache_limit = limit
    return _prime_cache


# -- segments ----------------------------------------------------------------

@dataclass
class ArithmeticSegment:
    """Values of mu and lambda on the half-open block [lo, hi)."""

    lo: int
    hi: int
    mu: np.ndarray
    lam: np.ndarray

    def __len__(self) -> int:
        return self.hi - self.lo

    def values(self, kind) -> np.ndarray:
        kind = Kind.parse(kind)
        if kind is Kind.MOBIUS:
            return self.mu
        if kind is Kind.LIOUVILLE:
            return self.lam
        raise DomainError("segments carry only mobius and liouville values")

    @property
    def n(self) -> np.ndarray:
        return np.arange(self.lo, self.hi, dtype=np.int64)


def segment_size_limit(requested: Optional[int] = None) -> int:
    """Segment size after applying the ``MLAB_MAX_MEMORY`` byte cap."""
    size = int(requested or DEFAULT_SEGMENT_SIZE)
    if size < 1:
        raise DomainError("segment size must be positive")
    cap = os.environ.get("MLAB_MAX_MEMORY")
    if cap:
        allowed = int(float(cap)) // _BYTES_PER_ELEMENT
        if allowed < _MIN_SEGMENT:
            raise CapacityError(f"MLAB_MAX_MEMORY={cap} is below the minimum segment allocation")
        size = min(size, allowed)
    return size


def sieve_segment(lo: int, hi: int, segment_size: Optional[int] = None) -> ArithmeticSegment:
    """Sieve mu and lambda over [lo, hi)."""
    lo, hi = int(lo), int(hi)
    if lo < 1:
        raise DomainError(f"segment must start at lo >= 1, got {lo}")
    if hi <= lo:
        raise DomainError(f"empty segment [{lo}, {hi})")
    if hi - 1 > MAX_X:
        raise CapacityError(f"segment end {hi} overflows the 63-bit integer range")
    size = segment_size_limit(segment_size)
    if hi - lo > size:
        raise CapacityError(f"segment width {hi - lo} exceeds the configured size {size}")
    mu, lam = sieve_block(lo, hi, _sieving_primes(hi))
    return ArithmeticSegment(lo, hi, mu, lam)


def iter_segments(lo: int, hi: int, segment_size: Optional[int] = None,
                  threads: int = 1) -> Iterator[ArithmeticSegment]:
    """Yield consecutive segments covering [lo, hi) in increasing order.

    With ``threads > 1`` segments are sieved concurrently; the yield order is
    always by segment index.
    """
    size = segment_size_limit(segment_size)
    bounds = [(a, min(a + size, hi)) for a in range(lo, hi, size)]
    if threads <= 1 or len(bounds) < 2:
        for a, b in bounds:
            yield sieve_segment(a, b, size)
        return
    window = 2 * threads
    with ThreadPoolExecutor(max_workers=threads) as pool:
        for k in range(0, len(bounds), window):
            futures = [pool.submit(sieve_segment, a, b, size) for a, b in bounds[k:k + window]]
            for fut in futures:
                yield fut.result()


def mobius_table(n_max: int) -> np.ndarray:
    """mu(n) for 0 <= n <= n_max as int8, with mu(0) := 0."""
    out = np.zeros(n_max + 1, dtype=np.int8)
    if n_max >= 1:
        for seg in iter_segments(1, n_max + 1):
            out[seg.lo:seg.hi] = seg.mu
    return out


def liouville_table(n_max: int) -> np.ndarray:
    """lambda(n) for 0 <= n <= n_max as int8, with lambda(0) := 0."""
    out = np.zeros(n_max + 1, dtype=np.int8)
    if n_max >= 1:
        for seg in iter_segments(1, n_max + 1):
            out[seg.lo:seg.hi] = seg.lam
    return out


def summatory_table(kind, n_max: int) -> np.ndarray:
    """Dense S(n) for 0 <= n <= n_max (S = M or L), int64."""
    kind = Kind.parse(kind)
    table = mobius_table(n_max) if kind is Kind.MOBIUS else liouville_table(n_max)
    return np.cumsum(table, dtype=np.int64)


# -- summatory traces -----------------------------------------------------------

@dataclass(frozen=True)
class CheckpointPolicy:
    """Checkpoint every ``step`` integers, at every power of ten, and at X."""

    step: int = 10**4
    decades: bool = True

    def points(self, X: int) -> np.ndarray:
        pts = set()
        if self.step:
            pts.update(range(self.step, X + 1, self.step))
        if self.decades:
            p = 1
            while p <= X:
                pts.add(p)
                p *= 10
        pts.add(X)
        return np.array(sorted(pts), dtype=np.int64)

    def describe(self) -> str:
        parts = []
        if self.step:
            parts.append(f"every {self.step}")
        if self.decades:
            parts.append("powers of 10")
        parts.append("final x")
        return ", ".join(parts)


@dataclass
class SummatoryTrace:
    """Cumulative sums at checkpoints; ``values[i]`` is S(xs[i])."""

    kind: Kind
    xs: np.ndarray
    values: np.ndarray
    step_policy: str
    final_x: int
    meta: dict = field(default_factory=dict)

    @property
    def checkpoints(self) -> list[tuple[int, object]]:
        return [(int(x), _py(v)) for x, v in zip(self.xs, self.values)]

    def value_at(self, x: int):
        i = int(np.searchsorted(self.xs, x))
        if i >= len(self.xs) or self.xs[i] != x:
            raise KeyError(f"{x} is not a checkpoint")
        return _py(self.values[i])

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            write_trace_csv(self, fh)


def _py(v):
    if isinstance(v, (np.complexfloating, complex)):
        return complex(v)
    return int(v)


def write_trace_csv(trace: SummatoryTrace, fh) -> None:
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["x", "value", "kind"])
    for x, v in zip(trace.xs, trace.values):
        w.writerow([int(x), int(v), trace.kind.value])


def read_trace_csv(path) -> SummatoryTrace:
    with open(path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    if not rows:
        raise DomainError(f"{path}: no checkpoint rows")
    kind = Kind.parse(rows[0]["kind"])
    xs = np.array([int(r["x"]) for r in rows], dtype=np.int64)
    vals = np.array([int(r["value"]) for r in rows], dtype=np.int64)
    return SummatoryTrace(kind, xs, vals, "from csv", int(xs[-1]))


def _check_x(X: int, max_x: Optional[int]) -> int:
    X = int(X)
    if X < 1:
        raise DomainError(f"X must be >= 1, got {X}")
    limit = MAX_X if max_x is None else min(int(max_x), MAX_X)
    if X > limit:
        raise CapacityError(f"X={X} exceeds the configured maximum {limit}")
    return X


def iter_cumulative(kind, lo: int, hi: int, base: int = 0, segment_size: Optional[int] = None,
                    threads: int = 1) -> Iterator[tuple[int, np.ndarray]]:
    """Yield (start, S) blocks where S[i] = base + sum of f(n) for lo <= n <= start + i."""
    kind = Kind.parse(kind)
    running = int(base)
    for seg in iter_segments(lo, hi, segment_size, threads):
        cum = np.cumsum(seg.values(kind), dtype=np.int64)
        cum += running
        running = int(cum[-1])
        yield seg.lo, cum


def summatory_trace(kind, X: int, step_policy: Optional[CheckpointPolicy] = None, *,
                    threads: int = 1, segment_size: Optional[int] = None,
                    max_x: Optional[int] = None) -> SummatoryTrace:
    """Exact M(x) or L(x) at every checkpoint x <= X."""
    kind = Kind.parse(kind)
    if kind is Kind.TWISTED:
        raise DomainError("use characters.twisted_summatory for twisted traces")
    X = _check_x(X, max_x)
    policy = step_policy or CheckpointPolicy()
    xs = policy.points(X)
    values = np.empty(len(xs), dtype=np.int64)
    k = 0
    for start, cum in iter_cumulative(kind, 1, X + 1, 0, segment_size, threads):
        end = start + len(cum)
        j = int(np.searchsorted(xs, end, side="left"))
        if j > k:
            values[k:j] = cum[xs[k:j] - start]
            k = j
    return SummatoryTrace(kind, xs, values, policy.describe(), X)


def short_interval_sum(kind, x: int, y: int, *, segment_size: Optional[int] = None,
                       max_x: Optional[int] = None) -> int:
    """Sum of f(n) over x < n <= x + y, sieved directly on that interval."""
    x, y = int(x), int(y)
    if x < 1 or y < 0:
        raise DomainError(f"need x >= 1 and y >= 0, got x={x}, y={y}")
    if y == 0:
        return 0
    _check_x(x + y, max_x)
    kind = Kind.parse(kind)
    total = 0
    for seg in iter_segments(x + 1, x + y + 1, segment_size):
        total += int(seg.values(kind).sum(dtype=np.int64))
    return total


def brute_force_summatory(kind, xs: Sequence[int]) -> list[int]:
    """S(x) at the given x by pointwise trial factorization (slow reference)."""
    kind = Kind.parse(kind)
    f = mobius_point if kind is Kind.MOBIUS else liouville_point
    targets = sorted(set(int(x) for x in xs))
    out = {}
    total, n = 0, 0
    for x in targets:
        while n < x:
            n += 1
            total += f(n)
        out[x] = total
    return [out[int(x)] for x in xs]
