"""Compiled inner loops for the segmented sieve.

Kept separate so the pure-Python modules stay importable and readable;
every function here is ``nogil`` so segments can be sieved from a thread pool.
"""

import numpy as np
import numba as nb


@nb.njit(cache=True, nogil=True)
def sieve_block(lo, hi, primes):
    """Return (mu, lam) as int8 arrays for the integers lo <= n < hi.

    ``primes`` must contain every prime p with p*p < hi.  Each resident keeps
    the product of the prime powers found so far; a product short of n means
    exactly one prime factor above sqrt(hi) is left over.
    """
    n = hi - lo
    prod = np.ones(n, np.int64)
    mu = np.ones(n, np.int8)
    lam = np.ones(n, np.int8)
    for i in range(primes.shape[0]):
        p = primes[i]
        if p * p >= hi:
            break
        for j in range((-lo) % p, n, p):
            mu[j] = -mu[j]
        pp = p * p
        for j in range((-lo) % pp, n, pp):
            mu[j] = 0
        pk = p
        while True:
            for j in range((-lo) % pk, n, pk):
                lam[j] = -lam[j]
                prod[j] *= p
            if pk > (hi - 1) // p:
                break
            pk *= p
    for j in range(n):
        if prod[j] != lo + j:
            mu[j] = -mu[j]
            lam[j] = -lam[j]
    return mu, lam


@nb.njit(cache=True, nogil=True)
def ratio_extrema(cum, lo):
    """Min/max of cum[i] / sqrt(lo + i) and their arguments."""
    best_min = np.inf
    best_max = -np.inf
    arg_min = lo
    arg_max = lo
    for i in range(cum.shape[0]):
        r = cum[i] / np.sqrt(np.float64(lo + i))
        if r < best_min:
            best_min = r
            arg_min = lo + i
        if r > best_max:
            best_max = r
            arg_max = lo + i
    return best_min, arg_min, best_max, arg_max
