import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from lprimedist import arith
from lprimedist.errors import InvalidModulusError

from oracles import convolution_by_divisors, smallest_generator, von_mangoldt


@pytest.mark.parametrize("n,expected", [(1, False), (2, False), (3, True), (4, False),
                                        (59, True), (101, True), (257, True), (91, False)])
def test_is_odd_prime(n, expected):
    assert arith.is_odd_prime(n) is expected


@pytest.mark.parametrize("q", [3, 5, 7, 11, 13, 59, 101, 257, 509, 4001])
def test_primitive_root_is_smallest_generator(q):
    assert arith.primitive_root(q) == smallest_generator(q)


def test_primitive_root_examples():
    assert (arith.primitive_root(3), arith.primitive_root(5), arith.primitive_root(7)) == (2, 2, 3)


def test_primitive_root_rejects_composite():
    with pytest.raises(InvalidModulusError):
        arith.primitive_root(15)


@pytest.mark.parametrize("q", [3, 59, 101, 257, 2003])
def test_primitive_root_has_full_order(q):
    g = arith.primitive_root(q)
    assert all(pow(g, (q - 1) // r, q) != 1 for r in arith.prime_factors(q - 1))


def test_mangoldt_examples():
    s = arith.mangoldt_sieve(100)
    assert s[8] == math.log(2)
    assert s[6] == 0
    assert s[7] == math.log(7)
    assert s[1] == 0


def test_mangoldt_matches_trial_division():
    s = arith.mangoldt_sieve(2000)
    expected = np.array([0.0] + [von_mangoldt(n) for n in range(1, 2001)])
    np.testing.assert_allclose(s.values, expected, rtol=0, atol=1e-15)
    assert np.all(s.values >= 0)


def test_chebyshev_scale():
    psi = math.fsum(arith.mangoldt_sieve(10**5).values)
    assert abs(psi - 1e5) <= 0.05 * 1e5


def test_convolution_examples():
    c2 = arith.lambda_convolution(2, 100)
    assert c2[4] == pytest.approx(math.log(2) ** 2, abs=1e-15)
    assert c2[12] == pytest.approx(2 * math.log(2) * math.log(3), abs=1e-14)
    c0 = arith.lambda_convolution(0, 100)
    assert c0[1] == 1 and np.count_nonzero(c0.values) == 1
    np.testing.assert_array_equal(arith.lambda_convolution(1, 100).values, arith.mangoldt_sieve(100).values)


@pytest.mark.parametrize("k", [2, 3, 4])
def test_convolution_matches_enumeration(k):
    c = arith.lambda_convolution(k, 400)
    for m in range(1, 401):
        assert c[m] == pytest.approx(convolution_by_divisors(k, m), abs=1e-11)


def test_log_power_bound_small():
    logm = np.log(np.arange(2, 5001, dtype=np.float64))
    for k in range(1, 5):
        c = arith.lambda_convolution(k, 5000).values[2:]
        assert np.all(c <= logm**k + 1e-12)


@pytest.mark.parametrize("q,n,expected", [(7, 10, 7), (7, 14, 1), (12, 10, 3), (1, 5, 1), (30, 7, 30)])
def test_coprime_part_examples(q, n, expected):
    assert arith.coprime_part(q, n) == expected


@given(st.integers(1, 2000), st.integers(1, 2000))
def test_coprime_part_properties(q, n):
    d = arith.coprime_part(q, n)
    assert q % d == 0 and math.gcd(d, n) == 1
    # any divisor of q coprime to n divides d, hence d is the largest one
    for e in range(d + 1, q + 1):
        if q % e == 0:
            assert math.gcd(e, n) > 1


def test_primes_between_matches_sieve():
    whole = arith.prime_sieve(10**5)
    parts = np.concatenate(list(arith.primes_between(1, 10**5, segment=7919)))
    np.testing.assert_array_equal(parts, whole)
