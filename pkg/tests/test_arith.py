import io

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mlab import arith
from mlab.arith import CheckpointPolicy, Kind
from mlab.errors import CapacityError, DomainError

from conftest import oracle_mu_lambda

# M and L at powers of ten, frozen from the smallest-prime-factor oracle
M_DECADES = [1, -1, 1, 2, -23, -48, 212]
L_DECADES = [1, 0, -2, -14, -94, -288, -530]


def test_point_functions_small_values():
    assert [arith.mobius_point(n) for n in range(1, 11)] == [1, -1, -1, 0, -1, 1, -1, 0, 0, 1]
    assert [arith.liouville_point(n) for n in range(1, 11)] == [1, -1, -1, 1, -1, 1, -1, -1, 1, 1]
    assert arith.omega(360) == 3 and arith.big_omega(360) == 6
    assert arith.factorize(1) == {}


@pytest.mark.parametrize("n", [0, -5])
def test_point_functions_reject_nonpositive(n):
    with pytest.raises(DomainError):
        arith.mobius_point(n)


def test_sieve_matches_oracle(oracle_small):
    mu, lam = oracle_small
    seg = arith.sieve_segment(1, len(mu))
    np.testing.assert_array_equal(seg.mu, mu[1:])
    np.testing.assert_array_equal(seg.lam, lam[1:])


def test_segment_invariants():
    seg = arith.sieve_segment(10**12, 10**12 + 5000)
    assert set(np.unique(seg.lam)) <= {-1, 1}
    for i in range(0, 5000, 97):
        n = 10**12 + i
        assert seg.mu[i] == arith.mobius_point(n)
        assert seg.lam[i] == arith.liouville_point(n)


@given(st.integers(1, 10**9), st.integers(1, 300))
@settings(max_examples=40, deadline=None)
def test_sieve_window_matches_point_functions(lo, width):
    seg = arith.sieve_segment(lo, lo + width)
    for i in (0, width // 2, width - 1):
        assert seg.mu[i] == arith.mobius_point(lo + i)
        assert seg.lam[i] == arith.liouville_point(lo + i)


def test_mu_zero_iff_not_squarefree():
    seg = arith.sieve_segment(1, 2001)
    for n, m in zip(seg.n, seg.mu):
        has_square = any(n % (d * d) == 0 for d in range(2, int(n ** 0.5) + 1))
        assert (m == 0) == has_square


def test_sieve_segment_errors():
    with pytest.raises(DomainError):
        arith.sieve_segment(0, 10)
    with pytest.raises(DomainError):
        arith.sieve_segment(10, 10)
    with pytest.raises(CapacityError):
        arith.sieve_segment(1, 10**6, segment_size=1000)


def test_memory_cap_env(monkeypatch):
    monkeypatch.setenv("MLAB_MAX_MEMORY", str(18 * 5000))
    assert arith.segment_size_limit() == 5000
    monkeypatch.setenv("MLAB_MAX_MEMORY", "100")
    with pytest.raises(CapacityError):
        arith.segment_size_limit()


def test_decade_values():
    pol = CheckpointPolicy(step=0)
    assert arith.summatory_trace("mobius", 10**6, pol).values.tolist() == M_DECADES
    assert arith.summatory_trace("liouville", 10**6, pol).values.tolist() == L_DECADES


def test_trace_matches_oracle_cumsum():
    mu, lam = oracle_mu_lambda(10**5)
    M = np.cumsum(mu)
    tr = arith.summatory_trace(Kind.MOBIUS, 10**5, CheckpointPolicy(step=777), segment_size=4096)
    np.testing.assert_array_equal(tr.values, M[tr.xs])


def test_trace_edge_x_values():
    assert arith.summatory_trace("mobius", 1).checkpoints == [(1, 1)]
    with pytest.raises(DomainError):
        arith.summatory_trace("mobius", 0)
    with pytest.raises(CapacityError):
        arith.summatory_trace("mobius", 10**7, max_x=10**6)


def test_thread_and_segment_invariance():
    pol = CheckpointPolicy(step=12345)
    ref = arith.summatory_trace("liouville", 3 * 10**6, pol)
    for threads, seg in [(1, 1 << 16), (4, 1 << 16), (3, 100_003)]:
        tr = arith.summatory_trace("liouville", 3 * 10**6, pol, threads=threads, segment_size=seg)
        np.testing.assert_array_equal(tr.values, ref.values)


def test_checkpoint_policy():
    assert CheckpointPolicy(step=0).points(1234).tolist() == [1, 10, 100, 1000, 1234]
    assert CheckpointPolicy(step=500, decades=False).points(1200).tolist() == [500, 1000, 1200]


def test_csv_round_trip(tmp_path):
    tr = arith.summatory_trace("mobius", 10**4, CheckpointPolicy(step=1000))
    path = tmp_path / "m.csv"
    tr.to_csv(path)
    back = arith.read_trace_csv(path)
    assert back.kind is Kind.MOBIUS
    np.testing.assert_array_equal(back.values, tr.values)
    assert path.read_text().splitlines()[0] == "x,value,kind"


def test_short_interval_equals_trace_difference():
    M = arith.summatory_table("mobius", 2 * 10**5)
    for x, y in [(1, 10), (1000, 500), (123456, 3000), (10**5, 0)]:
        assert arith.short_interval_sum("mobius", x, y) == M[x + y] - M[x]


def test_brute_force_summatory():
    assert arith.brute_force_summatory("mobius", [100, 10]) == [1, -1]


def test_kind_parse():
    assert Kind.parse("MOBIUS") is Kind.MOBIUS
    with pytest.raises(DomainError):
        Kind.parse("nope")
