"""Independent reference implementations used as test oracles.

Nothing here imports the sieve kernel: the arithmetic oracles use a plain
smallest-prime-factor table, and the analytic oracles use mpmath at 30 digits.
"""

import csv
from pathlib import Path

import mpmath
import numpy as np
import pytest

mpmath.mp.dps = 30
DATA = Path(__file__).parent / "data"


def spf_table(n_max: int) -> np.ndarray:
    spf = np.zeros(n_max + 1, dtype=np.int64)
    for p in range(2, n_max + 1):
        if spf[p] == 0:
            block = spf[p::p]
            block[block == 0] = p
    return spf


def oracle_mu_lambda(n_max: int):
    """mu and lambda for 0..n_max by repeated division with the spf table."""
    spf = spf_table(n_max)
    mu = np.zeros(n_max + 1, dtype=np.int64)
    lam = np.zeros(n_max + 1, dtype=np.int64)
    mu[1] = lam[1] = 1
    for n in range(2, n_max + 1):
        p = spf[n]
        m = n // p
        lam[n] = -lam[m]
        mu[n] = 0 if m % p == 0 else -mu[m]
    return mu, lam


def mp_zeta(s: complex) -> complex:
    return complex(mpmath.zeta(mpmath.mpc(s.real, s.imag)))


def reference_zeros():
    with open(DATA / "zeros_t100.csv") as fh:
        return [float(r["gamma"]) for r in csv.DictReader(fh)]


@pytest.fixture(scope="session")
def oracle_small():
    return oracle_mu_lambda(10**5)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import summary_lines
    except ImportError:
        return
    lines = summary_lines()
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
