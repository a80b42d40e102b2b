"""Critical-line zeros, Chebyshev psi, and the truncated explicit formula."""

from __future__ import annotations

import csv
import logging
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import arith
from .errors import CapacityError, DomainError
from .zeta import eta_depth, eta_sum

log = logging.getLogger(__name__)

T_MAX = 500.0
PSI_MAX = 10**8
BRACKET_WIDTH = 1e-6
SCAN_START = 8.0


# -- zeros -------------------------------------------------------------------------

def riemann_siegel_theta(t):
    """theta(t) from the log-Gamma asymptotic, two correction terms."""
    t = np.asarray(t, dtype=np.float64)
    return (t / 2 * np.log(t / (2 * np.pi)) - t / 2 - np.pi / 8
            + 1 / (48 * t) + 7 / (5760 * t ** 3))


def hardy_z(t, depth: Optional[int] = None) -> np.ndarray:
    """Z(t) = Re(e^{i theta(t)} zeta(1/2 + it)), real on the critical line."""
    t = np.atleast_1d(np.asarray(t, dtype=np.float64))
    n = depth or eta_depth(float(np.max(np.abs(t))))
    s = 0.5 + 1j * t
    z = eta_sum(s, n) / (1 - 2.0 ** (1 - s))
    return (np.exp(1j * riemann_siegel_theta(t)) * z).real


def zero_count_estimate(T: float) -> float:
    """Smooth part of the zero counting function N(T)."""
    return T / (2 * math.pi) * math.log(T / (2 * math.pi * math.e)) + 7 / 8


@dataclass
class ZeroTable:
    gammas: list[float]
    bracket_width: list[float]
    T: float
    expected_count: float = 0.0
    count_mismatch: int = 0
    meta: dict = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.gammas)

    def upto(self, T: float) -> "ZeroTable":
        keep = [i for i, g in enumerate(self.gammas) if g <= T]
        return ZeroTable([self.gammas[i] for i in keep], [self.bracket_width[i] for i in keep], T,
                         zero_count_estimate(T) if T > 2 * math.pi else 0.0,
                         0, dict(self.meta))

    def to_csv(self, fh) -> None:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["index", "gamma", "bracket_width"])
        for i, (g, b) in enumerate(zip(self.gammas, self.bracket_width), 1):
            w.writerow([i, repr(g), repr(b)])

    @classmethod
    def read_csv(cls, path) -> "ZeroTable":
        with open(path, newline="") as fh:
            rows = list(csv.DictReader(fh))
        g = [float(r["gamma"]) for r in rows]
        b = [float(r["bracket_width"]) for r in rows]
        return cls(g, b, max(g) if g else 0.0)


def _bisect(lo: np.ndarray, hi: np.ndarray, flo: np.ndarray, depth: int, width: float):
    while len(lo) and np.max(hi - lo) > width:
        mid = 0.5 * (lo + hi)
        fm = hardy_z(mid, depth)
        same = np.sign(fm) == np.sign(flo)
        lo = np.where(same, mid, lo)
        flo = np.where(same, fm, flo)
        hi = np.where(same, hi, mid)
    return lo, hi


def find_zeros(T: float, step: float = 0.02, width: float = BRACKET_WIDTH) -> ZeroTable:
    """All zeros 1/2 + i gamma with 0 < gamma <= T, by sign changes of Z(t)."""
    T = float(T)
    if T > T_MAX:
        raise CapacityError(f"T={T} exceeds the zero-search ceiling {T_MAX}")
    if T < SCAN_START:
        return ZeroTable([], [], T)
    depth = eta_depth(T)
    expected = zero_count_estimate(T)
    for attempt in range(3):
        grid = np.arange(SCAN_START, T + step, step)
        grid = grid[grid <= T]
        if grid[-1] < T:
            grid = np.append(grid, T)
        vals = hardy_z(grid, depth)
        idx = np.flatnonzero(np.sign(vals[:-1]) * np.sign(vals[1:]) < 0)
        lo, hi = _bisect(grid[idx], grid[idx + 1], vals[idx], depth, width)
        gammas = 0.5 * (lo + hi)
        # a genuine zero has |zeta| small at the midpoint; a phase artefact does not
        s = 0.5 + 1j * gammas
        mags = np.abs(eta_sum(s, depth) / (1 - 2.0 ** (1 - s))) if len(gammas) else np.zeros(0)
        ok = mags < 1e-4
        gammas, lo, hi = gammas[ok], lo[ok], hi[ok]
        mismatch = len(gammas) - round(expected)
        if abs(mismatch) <= 1:
            break
        log.warning("zero count %d vs estimate %.2f at T=%g; refining grid", len(gammas), expected, T)
        step /= 4
    if abs(mismatch) > 1:
        log.warning("zero count mismatch persists: %d found, %.2f expected", len(gammas), expected)
    return ZeroTable([float(g) for g in gammas], [float(b) for b in hi - lo], T, expected, int(mismatch),
                     {"depth": depth, "step": step})


_zero_cache: Optional[ZeroTable] = None


def cached_zeros(T: float) -> ZeroTable:
    """find_zeros(T), reusing a previously computed taller table."""
    global _zero_cache
    if _zero_cache is None or _zero_cache.T < T:
        _zero_cache = find_zeros(T)
    return _zero_cache.upto(T) if _zero_cache.T > T else _zero_cache


# -- psi ---------------------------------------------------------------------------------

def chebyshev_psi(x: int) -> float:
    """psi(x) = sum of log p over prime powers p^k <= x (compensated sum)."""
    x = int(x)
    if x > PSI_MAX:
        raise CapacityError(f"x={x} exceeds {PSI_MAX}")
    if x < 2:
        return 0.0
    primes = arith.primes_up_to(x)
    logs = np.log(primes.astype(np.float64))
    # multiplicity of log p is the number of powers p^k <= x
    mult = np.ones(len(primes), dtype=np.int64)
    for i in range(len(primes)):
        p = int(primes[i])
        if p * p > x:
            break
        pk = p * p
        while pk <= x:
            mult[i] += 1
            pk *= p
    return math.fsum((logs * mult).tolist())


def explicit_psi(x: float, K: int, zeros: Optional[ZeroTable] = None) -> float:
    """x - sum_{k<=K} 2 Re(x^rho/rho) - log(2 pi) - log(1 - x^{-2})/2."""
    x = float(x)
    if x < 2:
        raise DomainError("explicit formula evaluated for x >= 2")
    K = int(K)
    if K < 0:
        raise DomainError("K must be >= 0")
    if zeros is None and K > 0:
        T = 50.0
        zeros = cached_zeros(T)
        while len(zeros) < K and T < T_MAX:
            T = min(T_MAX, 2 * T)
            zeros = cached_zeros(T)
    if K > (len(zeros) if zeros is not None else 0):
        raise CapacityError(f"K={K} exceeds the {0 if zeros is None else len(zeros)} tabulated zeros")
    total = x - math.log(2 * math.pi) - 0.5 * math.log1p(-x ** -2)
    if K:
        rho = 0.5 + 1j * np.asarray(zeros.gammas[:K])
        terms = 2 * (np.exp(rho * math.log(x)) / rho).real
        total -= math.fsum(terms.tolist())
    return total


# -- prime-free factorial intervals -------------------------------------------------------

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin for n < 3.3e24."""
    n = int(n)
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    if n >= 3317044064679887385961981:
        raise CapacityError("deterministic base set covers n < 3.3e24 only")
    d, r = n - 1, 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def factorial_interval(n: int) -> range:
    """Integers in (n! + 2, n! + n - 1]."""
    f = math.factorial(n)
    return range(f + 3, f + n)


def primefree_routes(n: int) -> tuple[bool, bool]:
    """(composite by k | n!+k, composite by primality test) for the interval of n."""
    n = int(n)
    if not 3 <= n <= 20:
        raise DomainError("n must satisfy 3 <= n <= 20")
    f = math.factorial(n)
    members = factorial_interval(n)
    by_divisor = all(math.gcd(m, m - f) == m - f and m - f > 1 for m in members)
    by_test = not any(is_prime(m) for m in members)
    return by_divisor, by_test


def primefree_interval(n: int) -> bool:
    by_divisor, by_test = primefree_routes(n)
    return by_divisor and by_test
