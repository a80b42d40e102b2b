"""Riemann zeta, its reciprocal, and zeta(2s)/zeta(s) by several representations.

Every representation is an independent route to the same function, so the
routes check one another wherever their domains overlap.  Values outside a
route's half-plane of absolute convergence are tagged ``conditional`` and are
treated as data only.
"""

from __future__ import annotations

import cmath
import csv
import enum
import logging
import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Optional, Sequence, Union

import numpy as np

from . import arith
from .arith import Kind
from .errors import DomainError, SingularityError

log = logging.getLogger(__name__)

ETA_DEPTH = 64
ETA_WARN_T = 100.0
PREFACTOR_TOL = 1e-10
_EPS = 2.0 ** -52


class Method(str, enum.Enum):
    DIRICHLET = "dirichlet"
    ETA = "eta"
    FRACPART_INTEGRAL = "fracpart_integral"
    EULER_PRODUCT = "euler_product"
    REFLECT = "reflect"
    MOBIUS_SERIES = "mobius_series"
    M_INTEGRAL = "m_integral"
    LAMBDA_SERIES = "lambda_series"
    L_INTEGRAL = "l_integral"
    QUOTIENT = "quotient"


class EulerVariant(str, enum.Enum):
    CLASSICAL = "classical"
    ETA_REARRANGED = "eta_rearranged"
    INVERSE = "inverse"


@dataclass(frozen=True)
class ComplexPoint:
    sigma: float
    t: float

    def __post_init__(self):
        if not (math.isfinite(self.sigma) and math.isfinite(self.t)):
            raise DomainError(f"non-finite point ({self.sigma}, {self.t})")

    @property
    def s(self) -> complex:
        return complex(self.sigma, self.t)

    @classmethod
    def of(cls, s: "PointLike") -> "ComplexPoint":
        if isinstance(s, cls):
            return s
        z = complex(s)
        return cls(float(z.real), float(z.imag))


PointLike = Union[ComplexPoint, complex, float, int]


@dataclass
class EvalResult:
    """A value plus provenance.

    ``error_estimate`` bounds the truncation error when ``conditional`` is
    False; otherwise it only records the size of the last term used.
    """

    value: complex
    method: Method
    truncation: int
    error_estimate: float
    conditional: bool = False
    note: str = ""

    def __complex__(self) -> complex:
        return complex(self.value)

    def __abs__(self) -> float:
        return abs(self.value)


def _s(s: PointLike) -> complex:
    return ComplexPoint.of(s).s


def _fsum_complex(parts: Iterable[complex]) -> complex:
    parts = list(parts)
    return complex(math.fsum(p.real for p in parts), math.fsum(p.imag for p in parts))


def _powers(n: np.ndarray, s: complex) -> np.ndarray:
    """n**(-s) for an integer array n."""
    return np.exp(-s * np.log(n.astype(np.float64)))


def _step_diff(n: np.ndarray, s: complex) -> np.ndarray:
    """n**(-s) - (n+1)**(-s) without cancellation."""
    nf = n.astype(np.float64)
    return -np.exp(-s * np.log(nf)) * np.expm1(-s * np.log1p(1.0 / nf))


# -- Gamma -------------------------------------------------------------------

_LANCZOS_G = 7
_LANCZOS = (
    0.99999999999980993, 676.5203681218851, -1259.1392167224028,
    771.32342877765313, -176.61502916214059, 12.507343278686905,
    -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7,
)


def gamma(z: complex) -> complex:
    """Complex Gamma by the Lanczos approximation (g=7, 9 terms)."""
    z = complex(z)
    if z.imag == 0 and z.real <= 0 and z.real == math.floor(z.real):
        raise SingularityError(f"Gamma has a pole at {z.real:g}")
    if z.real < 0.5:
        return cmath.pi / (cmath.sin(cmath.pi * z) * gamma(1 - z))
    z -= 1
    x = _LANCZOS[0]
    for i in range(1, len(_LANCZOS)):
        x += _LANCZOS[i] / (z + i)
    t = z + _LANCZOS_G + 0.5
    return math.sqrt(2 * math.pi) * t ** (z + 0.5) * cmath.exp(-t) * x


# -- Dirichlet series ------------------------------------------------------------

# B_2k / (2k)! for k = 1..6
_BERNOULLI_OVER_FACT = (
    1 / 12, -1 / 720, 1 / 30240, -1 / 1209600, 1 / 47900160, -691 / 1307674368000,
)


def _em_tail(s: complex, N: int, terms: int = 5) -> tuple[complex, float]:
    """Euler-Maclaurin tail of sum_{n>N} n^{-s}, and a bound on what it omits."""
    Nf = float(N)
    tail = Nf ** (1 - s) / (s - 1) - 0.5 * Nf ** (-s)
    rising = s
    for k in range(terms):
        tail += _BERNOULLI_OVER_FACT[k] * rising * Nf ** (-s - 2 * k - 1)
        rising *= (s + 2 * k + 1) * (s + 2 * k + 2)
    nxt = abs(_BERNOULLI_OVER_FACT[terms] * rising * Nf ** (-s - 2 * terms - 1))
    sigma = s.real + 2 * terms + 1
    bound = nxt * abs(s + 2 * terms + 1) / sigma if sigma > 0 else math.inf
    return tail, bound


def zeta_dirichlet(s: PointLike, N: int, tail_correct: bool = False) -> EvalResult:
    """Partial sum of n^{-s} for n <= N, optionally with the Euler-Maclaurin tail."""
    s = _s(s)
    if s.real <= 1:
        raise DomainError("the Dirichlet series needs Re(s) > 1")
    N = int(N)
    if N < 1:
        raise DomainError("N must be >= 1")
    parts = []
    for a in range(1, N + 1, 1 << 20):
        n = np.arange(a, min(a + (1 << 20), N + 1), dtype=np.int64)
        parts.append(complex(_powers(n, s).sum()))
    value = _fsum_complex(parts)
    if tail_correct:
        tail, err = _em_tail(s, N)
        value += tail
        err += N * _EPS
        note = "euler-maclaurin tail"
    else:
        err = N ** (1 - s.real) / (s.real - 1)
        note = ""
    return EvalResult(value, Method.DIRICHLET, N, err, note=note)


@lru_cache(maxsize=32)
def eta_weights(n: int) -> np.ndarray:
    """Alternating-series acceleration weights (d_n - d_k)/d_n, k < n.

    The d_k are partial sums of Chebyshev-polynomial coefficients; computed in
    exact rationals, then rounded once, so large depths do not overflow.
    """
    d = []
    acc = Fraction(0)
    term = Fraction(1)  # i = 0 term
    for i in range(n + 1):
        if i > 0:
            # ratio of consecutive terms n (n+i-1)! 4^i / ((n-i)! (2i)!)
            term *= Fraction(4 * (n + i - 1) * (n - i + 1), (2 * i) * (2 * i - 1))
        acc += term
        d.append(acc)
    dn = d[n]
    return np.array([float((dn - d[k]) / dn) for k in range(n)])


def eta_depth(t: float) -> int:
    """Acceleration depth adequate for height |t| in double precision."""
    return max(ETA_DEPTH, int(math.ceil(1.1 * abs(t))) + 32)


def _eta_error(t: float, n: int, scale: float) -> float:
    # empirical envelope of the truncation error plus a rounding floor
    trunc = 3.0 * math.exp(1.1 * abs(t) - n * math.log(3 + math.sqrt(8)))
    return trunc + 4 * n * _EPS * scale


def eta_sum(s: np.ndarray, n: int) -> np.ndarray:
    """Accelerated alternating sum sum (-1)^{k+1} k^{-s} for an array of s."""
    s = np.atleast_1d(np.asarray(s, dtype=np.complex128))
    w = eta_weights(n) * np.where(np.arange(n) % 2 == 0, 1.0, -1.0)
    logk = np.log(np.arange(1, n + 1, dtype=np.float64))
    out = np.empty(s.shape, dtype=np.complex128)
    flat_s = s.ravel()
    flat = out.ravel()
    chunk = max(1, 4_000_000 // n)
    for a in range(0, flat_s.size, chunk):
        blk = flat_s[a:a + chunk]
        flat[a:a + chunk] = np.exp(-np.outer(blk, logk)) @ w
    return out


def _eta_prefactor(s: complex, tol: float) -> complex:
    pre = 1 - 2 ** (1 - s)
    if abs(pre) <= tol:
        raise SingularityError(f"1 - 2^(1-s) vanishes at s={s}")
    return pre


def zeta_eta(s: PointLike, terms: Optional[int] = None, tol: float = PREFACTOR_TOL) -> EvalResult:
    """zeta(s) = eta(s) / (1 - 2^{1-s}) with accelerated eta, Re(s) > 0."""
    s = _s(s)
    if s.real <= 0:
        raise DomainError("zeta_eta needs Re(s) > 0")
    if s == 1:
        raise SingularityError("zeta has its pole at s = 1")
    pre = _eta_prefactor(s, tol)
    n = int(terms) if terms else eta_depth(s.imag)
    if abs(s.imag) > ETA_WARN_T and n <= ETA_DEPTH:
        warnings.warn(f"eta acceleration at depth {n} degrades for |t|={abs(s.imag):g}", RuntimeWarning)
    value = complex(eta_sum(np.array([s]), n)[0]) / pre
    err = _eta_error(s.imag, n, 1.0) / abs(pre)
    return EvalResult(value, Method.ETA, n, err)


def zeta_fracpart_integral(s: PointLike, X: int) -> EvalResult:
    """s/(s-1) - s * int_1^X ((x)) x^{-s-1} dx, integrated exactly per unit step."""
    s = _s(s)
    if s.real <= 0:
        raise DomainError("the fractional-part integral needs Re(s) > 0")
    if s == 1:
        raise SingularityError("zeta has its pole at s = 1")
    X = int(X)
    if X < 1:
        raise DomainError("X must be >= 1")
    parts = []
    for a in range(1, X, 1 << 20):
        n = np.arange(a, min(a + (1 << 20), X), dtype=np.float64)
        logn = np.log(n)
        l1p = np.log1p(1.0 / n)
        # int_n^{n+1} (x - n) x^{-s-1} dx
        first = np.exp((1 - s) * logn) * np.expm1((1 - s) * l1p) / (1 - s)
        second = n * np.exp(-s * logn) * np.expm1(-s * l1p) / s
        parts.append(complex((first + second).sum()))
    integral = _fsum_complex(parts)
    value = s / (s - 1) - s * integral
    err = abs(s) * X ** (-s.real) / s.real
    return EvalResult(value, Method.FRACPART_INTEGRAL, X, err)


# -- functional equation -----------------------------------------------------------

def _is_int(x: float) -> bool:
    return x == math.floor(x)


def zeta_reflect(s: PointLike) -> EvalResult:
    """zeta(s) = 2^s pi^{s-1} sin(pi s / 2) Gamma(1-s) zeta(1-s), for Re(s) < 1/2."""
    s = _s(s)
    if s.real >= 0.5:
        raise DomainError("zeta_reflect is for Re(s) < 1/2; use zeta_eta")
    if s.imag == 0 and _is_int(s.real):
        k = int(s.real)
        if k < 0 and k % 2 == 0:
            return EvalResult(0j, Method.REFLECT, 0, 0.0, note="trivial zero")
        if k == 0:
            # sin(pi s/2) zeta(1-s) -> -1/(2 pi) * pi as s -> 0
            return EvalResult(-0.5 + 0j, Method.REFLECT, 0, 0.0, note="limit at s=0")
    inner = _zeta_right(1 - s)
    factor = 2 ** s * cmath.pi ** (s - 1) * cmath.sin(cmath.pi * s / 2) * gamma(1 - s)
    value = factor * inner.value
    err = abs(factor) * inner.error_estimate + 1e-14 * abs(value)
    return EvalResult(value, Method.REFLECT, inner.truncation, err)


def zeta_reflect_printed(s: PointLike) -> complex:
    """The reflection with the literal prefactor 2 * pi^{s-1} (for comparison only)."""
    s = _s(s)
    inner = _zeta_right(1 - s).value
    return 2 * cmath.pi ** (s - 1) * cmath.sin(cmath.pi * s / 2) * gamma(1 - s) * inner


def functional_equation_report(points: Sequence[PointLike]) -> list[dict]:
    """Compare both reflection prefactors against zeta_eta at points with 0 < Re(s) < 1/2."""
    rows = []
    for p in points:
        s = _s(p)
        direct = zeta_eta(s).value
        corrected = zeta_reflect(s).value
        printed = zeta_reflect_printed(s)
        rows.append({
            "sigma": s.real, "t": s.imag,
            "direct": direct, "corrected": corrected, "printed": printed,
            "corrected_residual": abs(corrected - direct),
            "printed_residual": abs(printed - direct),
            "ratio_corrected_over_printed": corrected / printed if printed else complex("nan"),
            "expected_ratio": 2 ** (s - 1),
        })
    return rows


def _zeta_right(s: complex) -> EvalResult:
    """zeta for Re(s) > 0 by eta, or Euler-Maclaurin where the eta prefactor vanishes."""
    if s.real > 0 and abs(1 - 2 ** (1 - s)) > 1e-3:
        return zeta_eta(s)
    N = max(64, int(abs(s.imag)))
    n = np.arange(1, N + 1, dtype=np.int64)
    tail, err = _em_tail(s, N)
    value = complex(_powers(n, s).sum()) + tail
    return EvalResult(value, Method.DIRICHLET, N, err + N * _EPS, conditional=s.real <= 1,
                      note="euler-maclaurin continuation")


def zeta(s: PointLike) -> complex:
    """Best available double-precision zeta(s) for s != 1, |t| <= 500."""
    s = _s(s)
    if s == 1:
        raise SingularityError("zeta has its pole at s = 1")
    if s.real < 0.5:
        return zeta_reflect(s).value
    return _zeta_right(s).value


def zeta_many(points: Sequence[PointLike]) -> np.ndarray:
    """zeta at many points; the Re(s) > 0 ones share one accelerated eta pass."""
    s = np.array([_s(p) for p in points], dtype=np.complex128)
    out = np.empty(len(s), dtype=np.complex128)
    if not len(s):
        return out
    pre = 1 - 2.0 ** (1 - s)
    fast = (s.real >= 0.5) & (np.abs(pre) > 1e-3)
    if fast.any():
        n = eta_depth(float(np.abs(s[fast].imag).max()))
        out[fast] = eta_sum(s[fast], n) / pre[fast]
    for i in np.flatnonzero(~fast):
        out[i] = zeta(complex(s[i]))
    return out


# -- growth --------------------------------------------------------------------------

def growth_bound(sigma: float, t: float) -> float:
    """Order of magnitude of zeta(sigma + it) in each sigma band, t > 1."""
    lt = math.log(t)
    if sigma >= 2:
        return 1.0
    if sigma >= 1:
        return lt
    if sigma >= 0:
        return t ** ((1 - sigma) / 2) * lt
    return t ** (0.5 - sigma) * lt


def growth_probe(sigmas: Sequence[float], t_grid: Optional[Sequence[float]] = None,
                 t0: float = 2.0, t_max: float = 500.0) -> list[dict]:
    """Max over the grid of |zeta(sigma+it)| / band bound, one row per sigma."""
    if t_grid is None:
        t_grid = np.linspace(t0, t_max, 500)
    t_grid = [float(t) for t in t_grid if t0 <= t <= t_max]
    rows = []
    for sigma in sigmas:
        best, arg = -1.0, None
        for t in t_grid:
            if sigma == 1 and abs(t) < 1e-12:
                continue
            r = abs(zeta(complex(sigma, t))) / growth_bound(sigma, t)
            if r > best:
                best, arg = r, t
        band = ("sigma>=2" if sigma >= 2 else "1<=sigma<2" if sigma >= 1
                else "0<=sigma<1" if sigma >= 0 else "sigma<0")
        rows.append({"sigma": float(sigma), "band": band, "max_ratio": best,
                     "argmax_t": arg, "points": len(t_grid)})
    return rows


# -- reciprocal and lambda series -------------------------------------------------

def coefficient_series(kind, s: PointLike, N: int) -> complex:
    """sum_{n<=N} f(n) n^{-s} with f = mu or lambda from the sieve."""
    s = _s(s)
    N = int(N)
    if N < 1:
        raise DomainError("N must be >= 1")
    parts = []
    for seg in arith.iter_segments(1, N + 1):
        vals = seg.values(kind).astype(np.float64)
        parts.append(complex((vals * _powers(seg.n, s)).sum()))
    return _fsum_complex(parts)


def step_integral(kind, s: PointLike, X: float) -> complex:
    """s * int_1^X S(x) x^{-s-1} dx over the step function S = M or L, exactly.

    Equals sum_{n<X} S(n) (n^{-s} - (n+1)^{-s}) plus the partial last step.
    """
    s = _s(s)
    X = float(X)
    if X < 1:
        raise DomainError("X must be >= 1")
    Nf = int(math.floor(X))
    parts = []
    last = 0
    if Nf >= 2:
        for start, cum in arith.iter_cumulative(kind, 1, Nf):
            n = np.arange(start, start + len(cum), dtype=np.int64)
            parts.append(complex((cum * _step_diff(n, s)).sum()))
            last = int(cum[-1])
    S_N = last + (arith.mobius_point(Nf) if Kind.parse(kind) is Kind.MOBIUS
                  else arith.liouville_point(Nf))
    if X > Nf:
        parts.append(S_N * (Nf ** (-s) - X ** (-s)))
    return _fsum_complex(parts)


def _series_result(value, method, N, s, conditional_below=1.0):
    sigma = s.real
    if sigma > conditional_below:
        err = N ** (1 - sigma) / (sigma - 1)
        return EvalResult(value, method, N, err)
    return EvalResult(value, method, N, N ** (-sigma), conditional=True)


def inv_zeta_series(s: PointLike, N: int) -> EvalResult:
    """1/zeta(s) as sum_{n<=N} mu(n) n^{-s}."""
    s = _s(s)
    return _series_result(coefficient_series(Kind.MOBIUS, s, N), Method.MOBIUS_SERIES, int(N), s)


def inv_zeta_boundary(s: PointLike, X: float) -> complex:
    """Closed-form boundary term: integral minus partial series = -M(floor X) X^{-s}."""
    s = _s(s)
    Nf = int(math.floor(X))
    M = int(arith.summatory_trace(Kind.MOBIUS, Nf, arith.CheckpointPolicy(step=0, decades=False)).values[-1])
    return -M * float(X) ** (-s)


def inv_zeta_integral(s: PointLike, X: float) -> EvalResult:
    """1/zeta(s) as the exact step integral s * int_1^X M(x) x^{-s-1} dx."""
    s = _s(s)
    value = step_integral(Kind.MOBIUS, s, X)
    Nf = int(math.floor(X))
    if s.real > 1:
        # tail of the series plus the boundary term M(X) X^{-s}
        err = Nf ** (1 - s.real) / (s.real - 1) + Nf ** (1 - s.real) if Nf > 1 else math.inf
        return EvalResult(value, Method.M_INTEGRAL, Nf, err)
    return EvalResult(value, Method.M_INTEGRAL, Nf, Nf ** (-s.real), conditional=True)


def lambda_ratio(s: PointLike, method="lambda_series", truncation: int = 10**5) -> EvalResult:
    """zeta(2s)/zeta(s) by the lambda series, the L(x) step integral, or a quotient."""
    s = _s(s)
    method = Method(method) if not isinstance(method, Method) else method
    if s == 0.5:
        raise SingularityError("zeta(2s) has its pole at s = 1/2")
    if method is Method.LAMBDA_SERIES:
        return _series_result(coefficient_series(Kind.LIOUVILLE, s, truncation), method, int(truncation), s)
    if method is Method.L_INTEGRAL:
        value = step_integral(Kind.LIOUVILLE, s, truncation)
        Nf = int(math.floor(truncation))
        if s.real > 1 and Nf > 1:
            return EvalResult(value, method, Nf, Nf ** (1 - s.real) / (s.real - 1) + Nf ** (1 - s.real))
        return EvalResult(value, method, Nf, Nf ** (-s.real), conditional=True)
    if method is Method.QUOTIENT:
        num = zeta_eta(2 * s)
        den = zeta_eta(s)
        if abs(den.value) < 1e-12:
            raise SingularityError(f"zeta(s) vanishes at s={s}; the quotient has a pole")
        value = num.value / den.value
        err = (num.error_estimate + abs(value) * den.error_estimate) / abs(den.value)
        return EvalResult(value, method, den.truncation, err)
    raise DomainError(f"lambda_ratio does not support method {method.value}")


# -- Euler products --------------------------------------------------------------------

def euler_product(s: PointLike, P: int, variant="classical") -> EvalResult:
    """Truncated Euler product over primes p <= P."""
    s = _s(s)
    variant = EulerVariant(variant) if not isinstance(variant, EulerVariant) else variant
    primes = arith.primes_up_to(int(P))
    conditional = s.real <= 1
    if variant is EulerVariant.CLASSICAL and conditional:
        raise DomainError("the classical Euler product needs Re(s) > 1")
    local = _powers(primes, s)  # p^{-s}
    if variant is EulerVariant.CLASSICAL:
        value = complex(np.prod(1.0 / (1.0 - local)))
    elif variant is EulerVariant.INVERSE:
        value = complex(np.prod(1.0 - local))
    else:
        two_s = 2 ** s
        if abs(two_s - 1) < PREFACTOR_TOL:
            raise SingularityError(f"2^s = 1 at s={s}")
        pre = _eta_prefactor(s, PREFACTOR_TOL)
        odd = local[primes > 2]
        value = complex((1 - 1 / (two_s - 1)) / pre * np.prod(1.0 / (1.0 - odd)))
    if conditional:
        err = float(P) ** (-s.real)
    else:
        # |log tail| <= sum_{p>P} p^{-sigma}/(1 - p^{-sigma}) <= 2 P^{1-sigma}/(sigma-1)
        tail = 2 * float(P) ** (1 - s.real) / (s.real - 1)
        err = abs(value) * math.expm1(min(tail, 700.0))
    return EvalResult(value, Method.EULER_PRODUCT, int(P), err, conditional=conditional,
                      note=variant.value)


# -- grid reports ----------------------------------------------------------------------

_GRID_METHODS = {
    Method.DIRICHLET: lambda s, n: zeta_dirichlet(s, n, tail_correct=True),
    Method.ETA: lambda s, n: zeta_eta(s),
    Method.FRACPART_INTEGRAL: lambda s, n: zeta_fracpart_integral(s, n),
    Method.EULER_PRODUCT: lambda s, n: euler_product(s, n),
    Method.REFLECT: lambda s, n: zeta_reflect(s),
    Method.MOBIUS_SERIES: lambda s, n: inv_zeta_series(s, n),
    Method.M_INTEGRAL: lambda s, n: inv_zeta_integral(s, n),
}


def grid_scan(points: Sequence[PointLike], methods: Sequence,
              truncation: int = 1000) -> list[tuple[complex, EvalResult]]:
    """Evaluate each method at each point; points outside a method's domain are skipped."""
    out = []
    for p in points:
        s = _s(p)
        for m in methods:
            m = Method(m) if not isinstance(m, Method) else m
            try:
                r = _GRID_METHODS[m](s, truncation)
            except DomainError as exc:
                log.info("skip %s at %s: %s", m.value, s, exc)
                continue
            out.append((s, r))
    return out


def write_grid_csv(results: Sequence[tuple[complex, EvalResult]], fh) -> None:
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["sigma", "t", "method", "re", "im", "err", "conditional"])
    for s, r in results:
        w.writerow([repr(s.real), repr(s.imag), r.method.value, repr(r.value.real),
                    repr(r.value.imag), repr(r.error_estimate), int(r.conditional)])
