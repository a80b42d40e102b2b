import io
import math

import numpy as np
import pytest

from mlab import characters as C
from mlab.arith import CheckpointPolicy
from mlab.errors import CapacityError, DomainError

from conftest import oracle_mu_lambda


@pytest.mark.parametrize("q", [1, 2, 3, 4, 5, 8, 12, 16, 30, 45, 48, 97])
def test_group_structure(q):
    chars = C.character_group(q)
    assert len(chars) == C.totient(q)
    assert chars[0].is_principal
    table = np.stack([c.values for c in chars])
    # row orthogonality and complete multiplicativity
    np.testing.assert_allclose(table @ table.conj().T, C.totient(q) * np.eye(len(chars)), atol=1e-9)
    for c in chars:
        for a in range(q):
            for b in range(0, q, max(1, q // 7)):
                assert abs(c(a * b) - c(a) * c(b)) < 1e-12
        assert abs(c(1) - 1) == 0


def test_mod5_character_values():
    chars = C.character_group(5)
    quartic = [c for c in chars if c.order == 4]
    assert len(quartic) == 2
    vals = {complex(c(2)) for c in quartic}
    assert vals == {1j, -1j}


def test_vanishes_off_units():
    for c in C.character_group(12):
        assert all(c(n) == 0 for n in range(12) if math.gcd(n, 12) > 1)


def test_group_errors():
    with pytest.raises(DomainError):
        C.character_group(0)
    with pytest.raises(CapacityError):
        C.character_group(10**5)


def test_twisted_sum_matches_direct():
    mu, _ = oracle_mu_lambda(20000)
    for q in (4, 7, 15):
        for c in C.character_group(q):
            tr = C.twisted_summatory(c, 20000, CheckpointPolicy(step=999))
            direct = np.cumsum([mu[n] * c(n) for n in range(20001)])
            np.testing.assert_allclose(tr.values, direct[tr.xs], atol=1e-9)
            if c.exact:
                assert tr.meta["error_bound"] == 0.0


def test_principal_mod1_is_mertens():
    c = C.character_group(1)[0]
    assert C.twisted_summatory(c, 10**5, CheckpointPolicy(step=0)).value_at(10**5) == -48


def test_mod4_value_at_10():
    assert C.twisted_summatory(C.character_group(4)[1], 10).value_at(10) == 2


def test_twisted_dense_agrees_with_trace():
    chars = C.character_group(9)
    dense = C.twisted_dense(chars, 5000)
    for c, row in zip(chars, dense):
        tr = C.twisted_summatory(c, 5000, CheckpointPolicy(step=250))
        np.testing.assert_allclose(row[tr.xs - 1], tr.values, atol=1e-9)


def test_twisted_csv_header():
    tr = C.twisted_summatory(C.character_group(5)[1], 100, CheckpointPolicy(step=0))
    fh = io.StringIO()
    C.write_twisted_csv(tr, fh)
    lines = fh.getvalue().splitlines()
    assert lines[0] == "x,re,im,q,char_index"
    assert lines[-1].endswith(",5,1")


def test_running_max_form_reports_violations_for_q2():
    # the odd-n Mobius sum is sum_k M(x/2^k), which outgrows max|M| early
    rows = C.twisted_bound_scan(2, 1000)
    assert rows[0]["violations_running_max"] > 0
    assert rows[0]["first_violation_x"] == 11


def test_l_inverse_routes_agree():
    chi = C.character_group(5)[1]
    s = 1.5
    a = C.l_inverse_series(s, chi, 10**5)
    b = C.l_inverse_integral(s, chi, 10**5)
    assert abs(a.value - b.value) < 1e-5
    assert b.method.value == "m_integral"
