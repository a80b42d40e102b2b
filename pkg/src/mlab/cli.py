"""Command-line batch runner.

Every subcommand writes CSV to ``--out`` (or stdout) and a manifest line with
the package version, a hash of the run configuration and the wall time to
stderr, plus a ``<out>.manifest`` sidecar when writing to a file.  The CSV
body never contains the manifest, so identical configurations produce
byte-identical CSV files.
"""

from __future__ import annotations

import argparse
import contextlib
import dataclasses
import hashlib
import json
import logging
import math
import sys
import time
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from . import __version__, arith, characters, experiments, explicit, identities, zeta
from .errors import CapacityError, DomainError

log = logging.getLogger("mlab")

EXIT_OK, EXIT_USAGE, EXIT_CAPACITY, EXIT_VERIFY = 0, 2, 3, 4
SUITES = ("identities", "sieve", "zeta", "characters", "explicit")


@dataclass
class RunConfig:
    subcommand: str
    X_max: Optional[int] = None
    kind: str = "mobius"
    epsilon: Optional[float] = None
    theorem: int = 1
    sigma: list[float] = field(default_factory=list)
    t: list[float] = field(default_factory=list)
    q: Optional[int] = None
    char_index: int = 1
    x_list: list[float] = field(default_factory=list)
    step: int = 10**4
    methods: list[str] = field(default_factory=lambda: ["eta", "dirichlet"])
    truncation: int = 1000
    zeros: int = 100
    y_policy: str = "sqrt"
    C: float = 2.0
    suite: str = "all"
    out: Optional[str] = None
    threads: int = 1
    seed: Optional[int] = None      # reserved: every computation is deterministic

    def __post_init__(self):
        if self.subcommand == "probe" and (self.epsilon is None or self.epsilon <= 0):
            raise DomainError("probe needs --epsilon > 0")
        if self.threads < 1:
            raise DomainError("--threads must be >= 1")

    def digest(self) -> str:
        cfg = dataclasses.asdict(self)
        cfg.pop("out")
        return hashlib.sha256(json.dumps(cfg, sort_keys=True).encode()).hexdigest()[:16]


def _float_list(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _int_like(text: str) -> int:
    v = float(text)
    if v != int(v):
        raise argparse.ArgumentTypeError(f"{text} is not an integer")
    return int(v)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="CSV output path (default: stdout)")
    common.add_argument("--threads", type=int, default=1)
    common.add_argument("--seed", type=int, help="reserved; has no effect")

    parser = argparse.ArgumentParser(prog="mlab", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"mlab {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("summatory", parents=[common], help="M(x) or L(x) at checkpoints")
    p.add_argument("--kind", choices=["mobius", "liouville"], default="mobius")
    p.add_argument("--xmax", type=_int_like, required=True)
    p.add_argument("--step", type=_int_like, default=10**4, help="checkpoint spacing, 0 for decades only")

    p = sub.add_parser("twisted", parents=[common], help="M_chi(x) for one character mod q")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--char-index", type=int, default=1)
    p.add_argument("--xmax", type=_int_like, required=True)
    p.add_argument("--step", type=_int_like, default=10**4)

    p = sub.add_parser("zeta", parents=[common], help="zeta and 1/zeta on a sigma x t grid")
    p.add_argument("--sigma", type=_float_list, required=True)
    p.add_argument("--t", type=_float_list, default=[0.0])
    p.add_argument("--method", type=lambda v: v.split(","), default=["eta", "dirichlet"],
                   help=f"comma list from {','.join(m.value for m in zeta._GRID_METHODS)}")
    p.add_argument("--truncation", type=_int_like, default=1000)

    p = sub.add_parser("verify", help="run a verification suite and print a pass/fail table")
    p.add_argument("--suite", choices=SUITES + ("all",), default="all")

    p = sub.add_parser("zeros", parents=[common], help="critical-line zeros up to height T")
    p.add_argument("--t", type=float, required=True, help="height T")

    p = sub.add_parser("psi", parents=[common], help="psi(x) against the truncated explicit formula")
    p.add_argument("--xlist", type=_float_list, required=True)
    p.add_argument("--zeros", type=int, default=100, help="number of zeros K")

    p = sub.add_parser("probe", parents=[common], help="integral probe at s = 1/2 + epsilon")
    p.add_argument("--theorem", type=int, choices=[1, 2], default=1)
    p.add_argument("--epsilon", type=float, required=True)
    p.add_argument("--xlist", type=_float_list, required=True)

    p = sub.add_parser("intervals", parents=[common], help="short-interval sums and exponent fit")
    p.add_argument("--kind", choices=["mobius", "liouville"], default="mobius")
    p.add_argument("--xlist", type=_float_list, required=True)
    p.add_argument("--ypolicy", choices=["sqrt", "log_power"], default="sqrt")
    p.add_argument("--C", type=float, default=2.0)

    p = sub.add_parser("extremes", parents=[common], help="extrema of S(x)/sqrt(x)")
    p.add_argument("--kind", choices=["mobius", "liouville"], default="mobius")
    p.add_argument("--xmax", type=_int_like, required=True)
    p.add_argument("--step", type=_int_like, default=10**4)
    return parser


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    get = lambda name, default=None: getattr(ns, name, default)  # noqa: E731
    sigma, t = get("sigma", []), get("t")
    if ns.subcommand == "zeros":
        t = [t]
    return RunConfig(
        subcommand=ns.subcommand, X_max=get("xmax"), kind=get("kind", "mobius"),
        epsilon=get("epsilon"), theorem=get("theorem", 1), sigma=sigma or [], t=t or [],
        q=get("q"), char_index=get("char_index", 1),
        x_list=get("xlist") or [], step=get("step", 10**4), methods=get("method") or ["eta", "dirichlet"],
        truncation=get("truncation", 1000), zeros=get("zeros", 100), y_policy=get("ypolicy", "sqrt"),
        C=get("C", 2.0), suite=get("suite", "all"), out=get("out"), threads=get("threads", 1) or 1,
        seed=get("seed"),
    )


# -- subcommands --------------------------------------------------------------------------

def _policy(cfg: RunConfig) -> arith.CheckpointPolicy:
    return arith.CheckpointPolicy(step=int(cfg.step), decades=True)


def _cmd_summatory(cfg, fh, info):
    tr = arith.summatory_trace(cfg.kind, cfg.X_max, _policy(cfg), threads=cfg.threads)
    arith.write_trace_csv(tr, fh)


def _cmd_twisted(cfg, fh, info):
    chars = characters.character_group(cfg.q)
    if not 0 <= cfg.char_index < len(chars):
        raise DomainError(f"character index must be in [0, {len(chars) - 1}]")
    tr = characters.twisted_summatory(chars[cfg.char_index], cfg.X_max, _policy(cfg))
    characters.write_twisted_csv(tr, fh)


def _cmd_zeta(cfg, fh, info):
    pts = [complex(a, b) for a in cfg.sigma for b in cfg.t]
    try:
        methods = [zeta.Method(m) for m in cfg.methods]
    except ValueError as exc:
        raise DomainError(str(exc)) from None
    zeta.write_grid_csv(zeta.grid_scan(pts, methods, cfg.truncation), fh)


def _cmd_zeros(cfg, fh, info):
    table = explicit.find_zeros(cfg.t[0])
    table.to_csv(fh)
    info.append(f"zeros={len(table)} expected={table.expected_count:.2f} mismatch={table.count_mismatch}")


def _cmd_psi(cfg, fh, info):
    import csv
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["x", "psi", "explicit", "K", "residual"])
    for x in cfg.x_list:
        psi = explicit.chebyshev_psi(math.floor(x))
        ex = explicit.explicit_psi(x, cfg.zeros)
        w.writerow([repr(x), repr(psi), repr(ex), cfg.zeros, repr(abs(ex - psi))])


def _cmd_probe(cfg, fh, info):
    rows = experiments.theorem_probe(cfg.theorem, cfg.epsilon, cfg.x_list)
    experiments.write_probe_csv(rows, fh)


def _cmd_intervals(cfg, fh, info):
    study = experiments.short_interval_study(cfg.kind, [int(x) for x in cfg.x_list], cfg.y_policy, cfg.C)
    experiments.write_interval_csv(study, fh)
    info.append(f"beta={study.beta} intercept={study.intercept} residual={study.residual}")
    info.extend(study.flags)


def _cmd_extremes(cfg, fh, info):
    rows = experiments.ratio_trace(cfg.kind, cfg.X_max, _policy(cfg), cfg.threads)
    experiments.write_ratio_csv(rows, fh, cfg.kind)
    info.extend(experiments.extreme_scan(cfg.kind, cfg.X_max, cfg.threads).report_lines())


# -- verification suites ------------------------------------------------------------------

Check = tuple[str, bool, str]


def _suite_identities() -> list[Check]:
    n_max = 10**4
    a = identities.convolution_coefficients(n_max)
    bad = [n for n in range(1, n_max + 1) if a[n] != identities.case_table_value(n)[0]]
    closed = abs(identities.product_identity_closed_form(2.0) - 1)
    prod = identities.product_identity_check(2.0, 10**5)
    return [
        ("a(n) matches case table, n<=1e4", not bad, f"mismatches={len(bad)}"),
        ("a(1)=1, a(2)=-2", a[1] == 1 and a[2] == -2, f"a(1)={a[1]} a(2)={a[2]}"),
        ("closed form equals 1 at s=2", closed < 1e-15, f"residual={closed:.3g}"),
        ("product identity at s=2, N=1e5", prod < 1e-4, f"residual={prod:.3g}"),
    ]


def _suite_sieve() -> list[Check]:
    seg = arith.sieve_segment(1, 10**4 + 1)
    mu_ok = all(seg.mu[i] == arith.mobius_point(i + 1) for i in range(len(seg)))
    lam_ok = all(seg.lam[i] == arith.liouville_point(i + 1) for i in range(len(seg)))
    M = arith.summatory_trace("mobius", 10**6).value_at(10**6)
    L = arith.summatory_trace("liouville", 10**6).value_at(10**6)
    return [
        ("mu sieve equals factorization, n<=1e4", mu_ok, ""),
        ("lambda sieve equals factorization, n<=1e4", lam_ok, ""),
        ("M(1e6) = 212", M == 212, f"M={M}"),
        ("L(1e6) = -530", L == -530, f"L={L}"),
    ]


def _suite_zeta() -> list[Check]:
    z2 = abs(zeta.zeta_eta(2).value - math.pi ** 2 / 6)
    zm1 = abs(zeta.zeta_reflect(-1).value + 1 / 12)
    s = complex(2, 10)
    agree = abs(zeta.zeta_eta(s).value - zeta.zeta_dirichlet(s, 1000, tail_correct=True).value)
    tel = abs(zeta.inv_zeta_integral(s, 10**4).value
              - zeta.inv_zeta_series(s, 10**4).value - zeta.inv_zeta_boundary(s, 10**4))
    return [
        ("zeta(2) = pi^2/6", z2 < 1e-13, f"err={z2:.3g}"),
        ("zeta(-1) = -1/12 by reflection", zm1 < 1e-9, f"err={zm1:.3g}"),
        ("eta vs tail-corrected Dirichlet at 2+10i", agree < 1e-8, f"err={agree:.3g}"),
        ("telescoping at 2+10i, X=1e4", tel < 1e-12, f"err={tel:.3g}"),
    ]


def _suite_characters() -> list[Check]:
    chars = characters.character_group(12)
    table = np.stack([c.values for c in chars])
    gram = table @ table.conj().T
    orth = np.allclose(gram, 4 * np.eye(len(chars)))
    chi4 = characters.character_group(4)[1]
    m10 = characters.twisted_summatory(chi4, 10).value_at(10)
    return [
        ("phi(12) = 4 characters", len(chars) == 4, f"count={len(chars)}"),
        ("orthogonality mod 12", bool(orth), ""),
        ("M_chi(10) = 2 for the character mod 4", m10 == 2, f"value={m10}"),
    ]


def _suite_explicit() -> list[Check]:
    z = explicit.find_zeros(30).gammas
    ref = (14.1347, 21.0220, 25.0108)
    zok = len(z) == 3 and all(abs(a - b) < 1e-3 for a, b in zip(z, ref))
    psi10 = explicit.chebyshev_psi(10)
    pf = all(explicit.primefree_interval(n) for n in range(3, 21))
    return [
        ("first three zeros", zok, " ".join(f"{g:.6f}" for g in z)),
        ("psi(10) = log 2520", abs(psi10 - math.log(2520)) < 1e-12, f"psi={psi10!r}"),
        ("prime-free factorial intervals, 3<=n<=20", pf, ""),
    ]


_SUITES: dict[str, Callable[[], list[Check]]] = {
    "identities": _suite_identities, "sieve": _suite_sieve, "zeta": _suite_zeta,
    "characters": _suite_characters, "explicit": _suite_explicit,
}


def run_suite(name: str) -> list[tuple[str, str, bool, str]]:
    names = SUITES if name == "all" else (name,)
    return [(n, *row) for n in names for row in _SUITES[n]()]


def _cmd_verify(cfg, fh, info) -> int:
    rows = run_suite(cfg.suite)
    width = max(len(r[1]) for r in rows)
    for suite, name, ok, detail in rows:
        print(f"{'PASS' if ok else 'FAIL'}  {suite:<10}  {name:<{width}}  {detail}", file=fh)
    failed = sum(not r[2] for r in rows)
    print(f"{len(rows) - failed}/{len(rows)} checks passed", file=fh)
    return EXIT_VERIFY if failed else EXIT_OK


_COMMANDS = {
    "summatory": _cmd_summatory, "twisted": _cmd_twisted, "zeta": _cmd_zeta, "verify": _cmd_verify,
    "zeros": _cmd_zeros, "psi": _cmd_psi, "probe": _cmd_probe, "intervals": _cmd_intervals,
    "extremes": _cmd_extremes,
}


@contextlib.contextmanager
def _output(path: Optional[str]):
    if path is None:
        yield sys.stdout
    else:
        with open(path, "w", newline="") as fh:
            yield fh


def run(config: RunConfig) -> int:
    """Execute one configured subcommand; returns the process exit status."""
    start = time.perf_counter()
    info: list[str] = []
    try:
        with _output(config.out) as fh:
            status = _COMMANDS[config.subcommand](config, fh, info) or EXIT_OK
    except CapacityError as exc:
        print(f"mlab: capacity: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    except DomainError as exc:
        print(f"mlab: {exc}", file=sys.stderr)
        return EXIT_USAGE
    for line in info:
        print(line, file=sys.stderr)
    manifest = (f"# mlab version={__version__} config={config.digest()} "
                f"subcommand={config.subcommand} threads={config.threads} "
                f"wall={time.perf_counter() - start:.3f}s")
    print(manifest, file=sys.stderr)
    if config.out:
        with open(config.out + ".manifest", "w") as fh:
            fh.write(manifest + "\n")
            fh.writelines(line + "\n" for line in info)
    return status


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if ns.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        config = config_from_args(ns)
    except DomainError as exc:
        parser.print_usage(sys.stderr)
        print(f"mlab: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return run(config)


if __name__ == "__main__":
    sys.exit(main())
