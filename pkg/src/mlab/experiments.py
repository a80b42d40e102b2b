"""Batch experiments over M(x) and L(x): growth ratios, extremes, integral probes,
short-interval sums.  Everything here emits data; nothing asserts an asymptotic claim.
"""

from __future__ import annotations

import csv
import enum
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from . import arith
from ._kernels import ratio_extrema
from .arith import CheckpointPolicy, Kind
from .errors import DomainError, SingularityError
from .zeta import _fsum_complex, _step_diff, zeta_eta

# extreme values of M(x)/sqrt(x) known from the literature (liminf / limsup bounds)
LITERATURE_LIMINF = -1.009
LITERATURE_LIMSUP = 1.06


def ratio_trace(kind, X_max: int, step_policy: Optional[CheckpointPolicy] = None,
                threads: int = 1) -> list[tuple[int, int, float]]:
    """(x, S(x), S(x)/sqrt(x)) at each checkpoint."""
    if int(X_max) > 10**9:
        raise arith.CapacityError("ratio traces are capped at X_max = 10^9")
    tr = arith.summatory_trace(kind, X_max, step_policy, threads=threads)
    return [(int(x), int(v), int(v) / math.sqrt(int(x))) for x, v in zip(tr.xs, tr.values)]


def write_ratio_csv(rows, fh, kind) -> None:
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["x", "value", "ratio", "kind"])
    for x, v, r in rows:
        w.writerow([x, v, repr(r), Kind.parse(kind).value])


@dataclass
class Extremes:
    kind: Kind
    X_max: int
    min_ratio: float
    argmin: int
    max_ratio: float
    argmax: int

    def report_lines(self) -> list[str]:
        return [
            f"kind={self.kind.value} X_max={self.X_max}",
            f"min S(x)/sqrt(x) = {self.min_ratio!r} at x = {self.argmin}",
            f"max S(x)/sqrt(x) = {self.max_ratio!r} at x = {self.argmax}",
            f"context: liminf M(x)/sqrt(x) < {LITERATURE_LIMINF} and limsup > {LITERATURE_LIMSUP} "
            "are asymptotic statements; no finite scan can reach or refute them",
        ]


def extreme_scan(kind, X_max: int, threads: int = 1, segment_size: Optional[int] = None) -> Extremes:
    """Exact extrema of S(x)/sqrt(x) over every integer 1 <= x <= X_max."""
    kind = Kind.parse(kind)
    X_max = arith._check_x(X_max, 10**9)
    lo_r, lo_x, hi_r, hi_x = math.inf, 1, -math.inf, 1
    for start, cum in arith.iter_cumulative(kind, 1, X_max + 1, 0, segment_size, threads):
        a, ax, b, bx = ratio_extrema(cum, start)
        # strict comparisons keep the first occurrence
        if a < lo_r:
            lo_r, lo_x = float(a), int(ax)
        if b > hi_r:
            hi_r, hi_x = float(b), int(bx)
    return Extremes(kind, X_max, lo_r, lo_x, hi_r, hi_x)


def longest_constant_run(kind, X: int, value: int = 1) -> tuple[int, int]:
    """Longest run of consecutive n <= X with f(n) == value, as (length, start)."""
    best = (0, 0)
    cur_len, cur_start = 0, 1
    for seg in arith.iter_segments(1, int(X) + 1):
        misses = np.flatnonzero(seg.values(kind) != value)
        if misses.size == 0:
            if cur_len == 0:
                cur_start = seg.lo
            cur_len += len(seg)
            continue
        if misses[0] > 0:
            if cur_len == 0:
                cur_start = seg.lo
            cur_len += int(misses[0])
        if cur_len > best[0]:
            best = (cur_len, cur_start)
        gaps = np.diff(misses) - 1
        if gaps.size:
            k = int(np.argmax(gaps))
            if gaps[k] > best[0]:
                best = (int(gaps[k]), seg.lo + int(misses[k]) + 1)
        cur_len = len(seg) - 1 - int(misses[-1])
        cur_start = seg.lo + int(misses[-1]) + 1
    if cur_len > best[0]:
        best = (cur_len, cur_start)
    return best


# -- integral probes --------------------------------------------------------------------

class Theorem(enum.IntEnum):
    THEOREM1 = 1
    THEOREM2 = 2


@dataclass
class ProbeRow:
    X: float
    integral: complex
    target: complex
    gap: float
    target_as_printed: Optional[complex] = None


def step_integrals(kind, s: complex, X_list: Sequence[float]) -> list[complex]:
    """s * int_1^X S(x) x^{-s-1} dx for each X in an increasing list, in one sweep."""
    Xs = [float(X) for X in X_list]
    if any(b <= a for a, b in zip(Xs, Xs[1:])):
        raise DomainError("X_list must be strictly increasing")
    if Xs and Xs[0] < 1:
        raise DomainError("X must be >= 1")
    out = []
    parts: list[complex] = []
    done = 1  # steps n < done already summed
    S_prev = 0
    for X in Xs:
        Nf = int(math.floor(X))
        if Nf > done:
            for start, cum in arith.iter_cumulative(kind, done, Nf, S_prev):
                n = np.arange(start, start + len(cum), dtype=np.int64)
                parts.append(complex((cum * _step_diff(n, s)).sum()))
                S_prev = int(cum[-1])
            done = Nf
        f = arith.mobius_point if Kind.parse(kind) is Kind.MOBIUS else arith.liouville_point
        S_N = S_prev + f(Nf) if Nf >= 1 else 0
        extra = S_N * (Nf ** (-s) - X ** (-s)) if X > Nf else 0j
        out.append(_fsum_complex(parts + [extra]))
    return out


def theorem_probe(theorem, epsilon: float, X_list: Sequence[float]) -> list[ProbeRow]:
    """Integral data at s = 1/2 + epsilon next to its closed-form target.

    theorem 1: (1/2+e) int M(x) x^{-3/2-e} dx against 1/zeta(1/2+e).
    theorem 2: int L(x) x^{-3/2-e} dx against zeta(1+2e)/((1/2+e) zeta(1/2+e));
    the target without the zeta(1+2e) factor is carried as ``target_as_printed``.
    """
    theorem = Theorem(int(theorem))
    epsilon = float(epsilon)
    if epsilon <= 0:
        raise DomainError("epsilon must be > 0")
    s = complex(0.5 + epsilon, 0.0)
    if abs(s - 1) < 1e-12:
        raise SingularityError("s = 1/2 + epsilon hits the pole of zeta at 1")
    zs = zeta_eta(s).value
    if theorem is Theorem.THEOREM1:
        ints = step_integrals(Kind.MOBIUS, s, X_list)
        target = 1 / zs
        printed = None
    else:
        ints = [v / s for v in step_integrals(Kind.LIOUVILLE, s, X_list)]
        target = zeta_eta(2 * s).value / (s * zs)
        printed = 1 / (s * zs)
    return [ProbeRow(float(X), v, target, abs(v - target), printed) for X, v in zip(X_list, ints)]


def write_probe_csv(rows: Sequence[ProbeRow], fh) -> None:
    w = csv.writer(fh, lineterminator="\n")
    printed = any(r.target_as_printed is not None for r in rows)
    head = ["X", "integral", "target", "gap"] + (["target_as_printed", "gap_as_printed"] if printed else [])
    w.writerow(head)
    for r in rows:
        row = [repr(r.X), repr(r.integral.real), repr(r.target.real), repr(r.gap)]
        if printed:
            row += [repr(r.target_as_printed.real), repr(abs(r.integral - r.target_as_printed))]
        w.writerow(row)


# -- short intervals -------------------------------------------------------------------------

def interval_length(x: int, policy: str, C: float = 2.0) -> int:
    if policy == "sqrt":
        return math.isqrt(int(x))
    if policy == "log_power":
        return int(math.log(x) ** C)
    raise DomainError(f"unknown y policy {policy!r}")


@dataclass
class IntervalStudy:
    kind: Kind
    points: list[tuple[int, int, int]]      # (x, y, sum)
    beta: Optional[float] = None
    intercept: Optional[float] = None
    residual: Optional[float] = None
    flags: list[str] = field(default_factory=list)


def short_interval_study(kind, x_grid: Sequence[int], y_policy: str = "sqrt", C: float = 2.0,
                         beta_fit: bool = True) -> IntervalStudy:
    """|sum_{x<n<=x+y} f(n)| over a grid of x, with an OLS fit of log|sum| on log y."""
    kind = Kind.parse(kind)
    pts = []
    for x in x_grid:
        y = interval_length(x, y_policy, C)
        pts.append((int(x), y, arith.short_interval_sum(kind, x, y)))
    study = IntervalStudy(kind, pts)
    if not beta_fit:
        return study
    usable = [(y, abs(v)) for _x, y, v in pts if v != 0 and y > 0]
    dropped = len(pts) - len(usable)
    if dropped:
        study.flags.append(f"dropped {dropped} zero-sum intervals")
    if len(usable) < 3:
        study.flags.append("fit skipped: fewer than 3 nonzero intervals")
        return study
    ly = np.log([u[0] for u in usable])
    lv = np.log([u[1] for u in usable])
    if np.ptp(ly) == 0:
        study.flags.append("fit skipped: all interval lengths equal")
        return study
    slope, icpt = np.polyfit(ly, lv, 1)
    study.beta, study.intercept = float(slope), float(icpt)
    study.residual = float(np.sqrt(np.mean((lv - (slope * ly + icpt)) ** 2)))
    return study


def write_interval_csv(study: IntervalStudy, fh) -> None:
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["x", "y", "sum", "kind"])
    for x, y, v in study.points:
        w.writerow([x, y, v, study.kind.value])
