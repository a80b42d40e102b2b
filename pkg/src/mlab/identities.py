"""Finite identities checked exactly, and inequality claims evaluated on grids.

Inequality scans report what the numbers say; they never assert a claim.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from . import arith
from .errors import DomainError, SingularityError
from .explicit import cached_zeros
from .zeta import PREFACTOR_TOL, PointLike, _s, coefficient_series, zeta, zeta_many

INEQUALITY_TOL = 1e-9
EXCLUSION_RADIUS = 1e-2


# -- convolution coefficients ---------------------------------------------------------

def divisors(n: int) -> list[int]:
    """All positive divisors of n, ascending, from its factorization."""
    divs = [1]
    for p, e in arith.factorize(n).items():
        divs = [d * p ** k for d in divs for k in range(e + 1)]
    return sorted(divs)


def convolution_coefficient(n: int) -> int:
    """a(n) = sum_{d|n} (-1)^{n/d+1} mu(d), by divisor enumeration."""
    n = int(n)
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    total = 0
    for d in divisors(n):
        m = arith.mobius_point(d)
        if m:
            total += m if (n // d) % 2 else -m
    return total


def convolution_coefficients(n_max: int) -> np.ndarray:
    """a(n) for 0 <= n <= n_max by sieving over divisors d (a(0) := 0)."""
    mu = arith.mobius_table(n_max).astype(np.int64)
    a = np.zeros(n_max + 1, dtype=np.int64)
    for d in np.flatnonzero(mu):
        # multiples n = d*k get (-1)^{k+1} mu(d)
        a[d::2 * d] += mu[d]
        a[2 * d::2 * d] -= mu[d]
    return a


def case_table_value(n: int) -> tuple[int, str]:
    """The five-case closed form for a(n), with the name of the case used."""
    n = int(n)
    if n == 1:
        return 1, "n=1"
    if n == 2:
        return -2, "n=2"
    if n % 2:
        return 0, "odd n>1"
    if (n // 2) % 2:
        return 0, "n=2m, m odd >1"
    return 0, "n=2^v m, v>=2"


# -- product identity ----------------------------------------------------------------------

def alternating_series(s: PointLike, N: int) -> complex:
    """Plain partial sum sum_{n<=N} (-1)^{n+1} n^{-s} (no acceleration)."""
    s = _s(s)
    parts = []
    for a in range(1, N + 1, 1 << 20):
        n = np.arange(a, min(a + (1 << 20), N + 1), dtype=np.float64)
        sign = np.where(n % 2 == 1, 1.0, -1.0)
        parts.append(complex((sign * np.exp(-s * np.log(n))).sum()))
    return complex(math.fsum(p.real for p in parts), math.fsum(p.imag for p in parts))


def product_identity_check(s: PointLike, N: int) -> float:
    """|(1-2^{1-s})^{-1} eta_N(s) * sum_{n<=N} mu(n) n^{-s} - 1|."""
    s = _s(s)
    pre = 1 - 2 ** (1 - s)
    if abs(pre) <= PREFACTOR_TOL:
        raise SingularityError(f"1 - 2^(1-s) vanishes at s={s}")
    eta = alternating_series(s, N)
    inv = coefficient_series(arith.Kind.MOBIUS, s, N)
    return abs(eta * inv / pre - 1)


def product_identity_closed_form(s: PointLike) -> complex:
    """(1-2^{1-s})^{-1} (1 - 2 * 2^{-s}): the identity's last algebraic step."""
    s = _s(s)
    pre = 1 - 2 ** (1 - s)
    if abs(pre) <= PREFACTOR_TOL:
        raise SingularityError(f"1 - 2^(1-s) vanishes at s={s}")
    return (1 - 2 * 2 ** (-s)) / pre


# -- local factors ----------------------------------------------------------------------

def local_factor_check(p: int, s: PointLike) -> tuple[float, float, bool]:
    """Compare the local factors of |1/zeta(s)| and |zeta(s)/zeta(2s)| at prime p."""
    s = _s(s)
    if s.real <= 0:
        raise DomainError("local factors are compared for Re(s) > 0")
    p = int(p)
    if p < 2 or arith.factorize(p) != {p: 1}:
        raise DomainError(f"{p} is not prime")
    if p == 2:
        two_s = 2 ** s
        if abs(two_s - 1) < PREFACTOR_TOL or abs(two_s - 2) < PREFACTOR_TOL:
            raise SingularityError(f"2^s in {{1, 2}} at s={s}")
        lhs = abs(1 - 2 ** (-s))
        rhs = abs((1 - 1 / (two_s - 1)) * (1 - 2 ** (-2 * s)) / (1 - 2 ** (1 - s)))
    else:
        z = p ** (-s)
        lhs, rhs = abs(1 - z), abs(1 + z)
    return lhs, rhs, lhs <= rhs + INEQUALITY_TOL


# -- inequality scans ------------------------------------------------------------------------

@dataclass
class InequalityReport:
    """Per-point lhs/rhs magnitudes; ``holds[i]`` iff lhs[i] <= rhs[i] + tolerance."""

    grid: list[complex]
    lhs: list[float]
    rhs: list[float]
    holds: list[bool]
    tolerance: float = INEQUALITY_TOL
    skipped: list[complex] = field(default_factory=list)

    @property
    def margins(self) -> np.ndarray:
        return np.asarray(self.rhs) - np.asarray(self.lhs)

    @property
    def summary(self) -> dict:
        m = self.margins
        n = len(self.grid)
        held = int(sum(self.holds))
        out = {"points": n, "holds": held, "violations": n - held, "skipped": len(self.skipped)}
        if n:
            i = int(np.argmin(m))
            ratio = np.asarray(self.lhs) / np.asarray(self.rhs)
            out.update(min_margin=float(m[i]), argmin_sigma=self.grid[i].real,
                       argmin_t=self.grid[i].imag, max_violation_ratio=float(ratio.max()))
        return out

    def to_csv(self, fh) -> None:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["sigma", "t", "lhs", "rhs", "holds", "margin"])
        for s, a, b, h in zip(self.grid, self.lhs, self.rhs, self.holds):
            w.writerow([repr(s.real), repr(s.imag), repr(a), repr(b), int(h), repr(b - a)])

    def summary_text(self) -> str:
        return "\n".join(f"{k}={v}" for k, v in self.summary.items())


def default_grid(sigmas: Optional[Sequence[float]] = None,
                 ts: Optional[Sequence[float]] = None) -> list[complex]:
    if sigmas is None:
        sigmas = np.round(np.arange(0.55, 2.0 + 1e-9, 0.05), 10)
    if ts is None:
        ts = np.round(np.arange(0.0, 50.0 + 1e-9, 0.5), 10)
    return [complex(float(a), float(b)) for a in sigmas for b in ts]


def theorem16_grid() -> list[complex]:
    sigmas = np.round(np.arange(1.05, 4.0 + 1e-9, 0.05), 10)
    ts = np.round(np.arange(-100.0, 100.0 + 1e-9, 0.5), 10)
    return default_grid(sigmas, ts)


def _excluded(s: complex, radius: float, gammas) -> bool:
    if abs(s - 1) < radius or abs(s - 0.5) < radius:
        return True
    return any(abs(s - complex(0.5, g)) < radius or abs(s - complex(0.5, -g)) < radius
               for g in gammas)


def _scan(points, radius: float) -> InequalityReport:
    grid, lhs, rhs, holds, skipped = [], [], [], [], []
    points = [_s(p) for p in points]
    gammas = []
    if radius > 0 and points:
        top = max(abs(s.imag) for s in points) + 1.0
        gammas = [g for g in cached_zeros(min(top, 500.0)).gammas]
    kept = []
    for s in points:
        (skipped if _excluded(s, radius, gammas) else kept).append(s)
    zs = zeta_many(kept)
    z2s = zeta_many([2 * s for s in kept])
    for s, z, z2 in zip(kept, zs, z2s):
        if z == 0:
            skipped.append(s)
            continue
        a, b = float(1 / abs(z)), float(abs(z / z2))
        grid.append(s)
        lhs.append(a)
        rhs.append(b)
        holds.append(a <= b + INEQUALITY_TOL)
    return InequalityReport(grid, lhs, rhs, holds, skipped=skipped)


def theorem18_scan(points: Optional[Sequence[PointLike]] = None,
                   radius: float = EXCLUSION_RADIUS) -> InequalityReport:
    """|1/zeta(s)| versus |zeta(s)/zeta(2s)| for Re(s) > 1/2."""
    points = default_grid() if points is None else points
    for p in points:
        if _s(p).real <= 0.5:
            raise DomainError("the scan covers Re(s) > 1/2 only")
    return _scan(points, radius)


def theorem16_check(points: Optional[Sequence[PointLike]] = None) -> InequalityReport:
    """The same comparison restricted to Re(s) > 1."""
    points = theorem16_grid() if points is None else points
    for p in points:
        if _s(p).real <= 1:
            raise DomainError("this check needs Re(s) > 1 strictly")
    return _scan(points, 0.0)


def real_sigma_bound_check(points: Sequence[PointLike]) -> InequalityReport:
    """|1/zeta(s)| <= zeta(sigma)/zeta(2 sigma) on Re(s) > 1 (the absolutely convergent bound)."""
    grid, lhs, rhs, holds = [], [], [], []
    for p in points:
        s = _s(p)
        if s.real <= 1:
            raise DomainError("needs Re(s) > 1")
        a = 1 / abs(zeta(s))
        b = (zeta(s.real) / zeta(2 * s.real)).real
        grid.append(s)
        lhs.append(a)
        rhs.append(b)
        holds.append(a <= b + INEQUALITY_TOL)
    return InequalityReport(grid, lhs, rhs, holds)
