import io
import math

import mpmath
import numpy as np
import pytest

from mlab import explicit as E
from mlab.errors import CapacityError, DomainError

from conftest import reference_zeros, spf_table


def test_first_zeros():
    z = E.find_zeros(30)
    assert len(z) == 3
    for g, ref in zip(z.gammas, (14.134725141734693, 21.022039638771555, 25.010857580145688)):
        assert abs(g - ref) < 1e-5


def test_zeros_to_100_match_fixture():
    ref = reference_zeros()
    z = E.find_zeros(100)
    assert len(z) == len(ref) == 29
    assert max(abs(a - b) for a, b in zip(z.gammas, ref)) < 1e-5
    assert abs(len(z) - E.zero_count_estimate(100)) <= 1.5


def test_zero_table_csv_round_trip(tmp_path):
    z = E.find_zeros(40)
    path = tmp_path / "z.csv"
    with open(path, "w", newline="") as fh:
        z.to_csv(fh)
    back = E.ZeroTable.read_csv(path)
    assert back.gammas == z.gammas
    assert E.find_zeros(5).gammas == []
    with pytest.raises(CapacityError):
        E.find_zeros(501)


def test_hardy_z_real_and_sign_changes():
    t = np.array([14.0, 14.3])
    z = E.hardy_z(t)
    assert z[0] * z[1] < 0
    for tt in (10.0, 50.0):
        ref = float(mpmath.siegelz(tt))
        assert abs(E.hardy_z(tt)[0] - ref) < 1e-8


def test_psi_against_spf_oracle():
    spf = spf_table(10**4)
    def von_mangoldt(n):
        p = spf[n]
        while n % p == 0:
            n //= p
        return math.log(p) if n == 1 else 0.0
    ref = math.fsum(von_mangoldt(n) for n in range(2, 10**4 + 1))
    assert abs(E.chebyshev_psi(10**4) - ref) < 1e-9
    assert E.chebyshev_psi(1) == 0.0
    assert abs(E.chebyshev_psi(10) - math.log(2520)) < 1e-12


def test_explicit_formula_with_no_zeros_is_elementary():
    x = 100.5
    assert E.explicit_psi(x, 0) == pytest.approx(x - math.log(2 * math.pi) - 0.5 * math.log(1 - x ** -2))
    with pytest.raises(DomainError):
        E.explicit_psi(1.5, 10)


def test_explicit_formula_tracks_psi():
    # the residual shrinks with K overall, though not monotonically
    assert abs(E.explicit_psi(1000.5, 200) - E.chebyshev_psi(1000)) < 1.0


def test_miller_rabin():
    primes = set(int(p) for p in np.flatnonzero(spf_table(5000) == np.arange(5001)) if p >= 2)
    assert {n for n in range(5001) if E.is_prime(n)} == primes
    assert E.is_prime(2**61 - 1) and not E.is_prime(3215031751)


def test_primefree_routes():
    for n in range(3, 21):
        assert E.primefree_routes(n) == (True, True)
    with pytest.raises(DomainError):
        E.primefree_interval(2)
