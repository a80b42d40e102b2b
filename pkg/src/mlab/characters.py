"""Dirichlet characters mod q, twisted Möbius sums, and 1/L(s, chi).

Characters are full value tables built from the CRT decomposition of the
unit group.  Twisted sums are accumulated per residue class as exact
integers, then combined with the character values, so real characters and
characters of order dividing 4 give exact results.
"""

from __future__ import annotations

import cmath
import csv
import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

from . import arith
from .arith import CheckpointPolicy, Kind, SummatoryTrace
from .errors import CapacityError, DomainError
from .zeta import EvalResult, Method, PointLike, _fsum_complex, _powers, _s, _step_diff

MAX_MODULUS = 10**4
_EPS = 2.0 ** -52


@dataclass(frozen=True, eq=False)
class DirichletCharacter:
    modulus: int
    values: np.ndarray          # complex128, length q
    is_principal: bool
    index: int = 0
    order: int = 1

    def __call__(self, n: int) -> complex:
        return complex(self.values[int(n) % self.modulus])

    @property
    def is_real(self) -> bool:
        return self.order <= 2

    @property
    def exact(self) -> bool:
        """Values are Gaussian integers, so integer-weighted sums are exact."""
        return 4 % self.order == 0


def totient(q: int) -> int:
    result = q
    for p in arith.factorize(q):
        result = result // p * (p - 1)
    return result


def _primitive_root(p: int) -> int:
    """Smallest primitive root of an odd prime p."""
    factors = list(arith.factorize(p - 1))
    for g in range(2, p):
        if all(pow(g, (p - 1) // f, p) != 1 for f in factors):
            return g
    raise AssertionError(f"no primitive root mod {p}")


def _components(p: int, e: int) -> list[tuple[int, int, dict[int, int]]]:
    """Cyclic factors of (Z/p^e)^* as (order, generator, discrete-log table)."""
    pe = p ** e
    if p == 2:
        if e == 1:
            return []
        if e == 2:
            return [(2, 3, {1: 0, 3: 1})]
        # units mod 2^e are +-5^k
        half = 1 << (e - 2)
        minus_one, five = {}, {}
        x = 1
        for k in range(half):
            minus_one[x] = 0
            minus_one[pe - x] = 1
            five[x] = k
            five[pe - x] = k
            x = x * 5 % pe
        return [(2, pe - 1, minus_one), (half, 5, five)]
    g = _primitive_root(p)
    if e > 1 and pow(g, p - 1, p * p) == 1:
        g += p
    order = pe // p * (p - 1)
    table = {}
    x = 1
    for k in range(order):
        table[x] = k
        x = x * g % pe
    return [(order, g, table)]


_EXACT_ROOTS = {Fraction(0): 1 + 0j, Fraction(1, 4): 1j, Fraction(1, 2): -1 + 0j, Fraction(3, 4): -1j}


def _root_of_unity(frac: Fraction) -> complex:
    frac = frac % 1
    if frac in _EXACT_ROOTS:
        return _EXACT_ROOTS[frac]
    return cmath.exp(2j * math.pi * float(frac))


def character_group(q: int, max_modulus: int = MAX_MODULUS) -> list[DirichletCharacter]:
    """All phi(q) characters mod q; index 0 is the principal character."""
    q = int(q)
    if q < 1:
        raise DomainError(f"modulus must be >= 1, got {q}")
    if q > max_modulus:
        raise CapacityError(f"modulus {q} exceeds the configured bound {max_modulus}")
    parts = []  # (prime power, order, log table)
    for p, e in sorted(arith.factorize(q).items()) if q > 1 else []:
        for order, _g, table in _components(p, e):
            parts.append((p ** e, order, table))
    units = [a for a in range(q) if math.gcd(a, q) == 1] if q > 1 else [0]
    # discrete-log coordinates of every unit
    coords = {a: tuple(tbl[a % pe] for pe, _o, tbl in parts) for a in units}
    orders = [o for _pe, o, _t in parts]
    chars = []
    for idx, exps in enumerate(itertools.product(*[range(o) for o in orders])):
        vals = np.zeros(q, dtype=np.complex128)
        char_order = 1
        for j, o in zip(exps, orders):
            f = Fraction(j, o)
            char_order = char_order * f.denominator // math.gcd(char_order, f.denominator)
        for a in units:
            frac = sum((Fraction(j * c, o) for j, c, o in zip(exps, coords[a], orders)), Fraction(0))
            vals[a] = _root_of_unity(frac)
        chars.append(DirichletCharacter(q, vals, all(j == 0 for j in exps), idx, char_order))
    return chars


def _residue_counts(X: int, q: int, xs: np.ndarray) -> np.ndarray:
    """C[k, a] = sum of mu(n) over n <= xs[k] with n = a mod q (exact int64)."""
    out = np.zeros((len(xs), q), dtype=np.int64)
    running = np.zeros(q, dtype=np.int64)
    k = 0
    for seg in arith.iter_segments(1, X + 1):
        res = seg.n % q
        pos = 0
        while k < len(xs) and xs[k] < seg.hi:
            cut = int(xs[k]) - seg.lo + 1
            running += np.bincount(res[pos:cut], weights=seg.mu[pos:cut], minlength=q).astype(np.int64)
            out[k] = running
            pos = cut
            k += 1
        if pos < len(seg):
            running += np.bincount(res[pos:], weights=seg.mu[pos:], minlength=q).astype(np.int64)
    return out


def _combine(values: np.ndarray, counts: np.ndarray) -> complex:
    terms = [complex(v) * int(c) for v, c in zip(values, counts) if c and v != 0]
    return _fsum_complex(terms)


def twisted_summatory(chi: DirichletCharacter, X: int, step_policy: Optional[CheckpointPolicy] = None,
                      max_x: Optional[int] = None) -> SummatoryTrace:
    """M_chi(x) = sum_{n<=x} mu(n) chi(n) at each checkpoint."""
    X = arith._check_x(X, max_x)
    policy = step_policy or CheckpointPolicy()
    xs = policy.points(X)
    counts = _residue_counts(X, chi.modulus, xs)
    values = np.array([_combine(chi.values, c) for c in counts], dtype=np.complex128)
    err = 0.0 if chi.exact else float(np.abs(counts).sum(axis=1).max()) * chi.modulus * _EPS
    meta = {"q": chi.modulus, "char_index": chi.index, "order": chi.order, "error_bound": err}
    return SummatoryTrace(Kind.TWISTED, xs, values, policy.describe(), X, meta)


def twisted_dense(chars: list[DirichletCharacter], X: int) -> np.ndarray:
    """M_chi(x) for every x in 1..X and every character (rows), as complex128.

    Uses the residue-class decomposition: per-class Möbius sums are exact
    integers and each character only reweights the q classes.
    """
    if not chars:
        return np.zeros((0, X), dtype=np.complex128)
    q = chars[0].modulus
    mu = arith.mobius_table(X)[1:].astype(np.int64)
    res = np.arange(1, X + 1) % q
    per_class = np.zeros((q, X), dtype=np.int64)
    for a in range(q):
        sel = np.where(res == a, mu, 0)
        per_class[a] = np.cumsum(sel)
    table = np.stack([c.values for c in chars])
    return table @ per_class


def write_twisted_csv(trace: SummatoryTrace, fh) -> None:
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["x", "re", "im", "q", "char_index"])
    q, idx = trace.meta.get("q"), trace.meta.get("char_index")
    for x, v in zip(trace.xs, trace.values):
        w.writerow([int(x), repr(float(v.real)), repr(float(v.imag)), q, idx])


def twisted_bound_scan(q: int, X: int) -> list[dict]:
    """Compare |M_chi(x)| with phi(q) * max_{t<=x} |M(t)| (and with phi(q)|M(x)|) for x <= X."""
    chars = character_group(q)
    phi = len(chars)
    dense = np.abs(twisted_dense(chars, X))
    M = np.cumsum(arith.mobius_table(X)[1:], dtype=np.int64)
    running = np.maximum.accumulate(np.abs(M)).astype(np.float64)
    endpoint = np.abs(M).astype(np.float64)
    tol = 1e-9
    rows = []
    for c, mags in zip(chars, dense):
        rm_bound = phi * running
        ep_bound = phi * endpoint
        viol = mags > rm_bound + tol
        ratio = mags / rm_bound
        worst = int(np.argmax(ratio))
        rows.append({
            "q": q, "char_index": c.index, "order": c.order,
            "violations_running_max": int(viol.sum()),
            "first_violation_x": int(np.argmax(viol)) + 1 if viol.any() else None,
            "max_ratio_running_max": float(ratio[worst]), "argmax_x": worst + 1,
            "violations_endpoint": int((mags > ep_bound + tol).sum()),
        })
    return rows


def l_inverse_series(s: PointLike, chi: DirichletCharacter, N: int) -> EvalResult:
    """sum_{n<=N} mu(n) chi(n) n^{-s}."""
    s = _s(s)
    N = int(N)
    if N < 1:
        raise DomainError("N must be >= 1")
    parts = []
    for seg in arith.iter_segments(1, N + 1):
        n = seg.n
        w = seg.mu * chi.values[n % chi.modulus]
        nz = w != 0
        parts.append(complex((w[nz] * _powers(n[nz], s)).sum()))
    value = _fsum_complex(parts)
    if s.real > 1:
        return EvalResult(value, Method.MOBIUS_SERIES, N, N ** (1 - s.real) / (s.real - 1))
    return EvalResult(value, Method.MOBIUS_SERIES, N, N ** (-s.real), conditional=True)


def l_inverse_integral(s: PointLike, chi: DirichletCharacter, X: float) -> EvalResult:
    """s * int_1^X M_chi(x) x^{-s-1} dx over the step function, exactly."""
    s = _s(s)
    X = float(X)
    if X < 1:
        raise DomainError("X must be >= 1")
    Nf = int(math.floor(X))
    parts = []
    running = 0j
    q = chi.modulus
    for seg in arith.iter_segments(1, Nf + 1):
        w = seg.mu * chi.values[seg.n % q]
        cum = np.cumsum(w) + running
        running = complex(cum[-1])
        upto = len(seg) if seg.hi <= Nf else len(seg) - 1  # steps n < Nf only
        n = seg.n[:upto]
        if upto:
            parts.append(complex((cum[:upto] * _step_diff(n, s)).sum()))
    if X > Nf:
        parts.append(running * (Nf ** (-s) - X ** (-s)))
    value = _fsum_complex(parts)
    if s.real > 1 and Nf > 1:
        err = Nf ** (1 - s.real) / (s.real - 1) + Nf ** (1 - s.real)
        return EvalResult(value, Method.M_INTEGRAL, Nf, err)
    return EvalResult(value, Method.M_INTEGRAL, Nf, Nf ** (-s.real), conditional=s.real <= 1)
