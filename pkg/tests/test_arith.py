import math

import pytest
from hypothesis import given, strategies as st

from onecounter.arith import (DomainError, bit, crr, crt_reconstruct, lcm_upto,
                              parity_divisible_count, primes_first)


@pytest.mark.parametrize("m,expected", [(1, [2]), (3, [2, 3, 5]), (5, [2, 3, 5, 7, 11])])
def test_primes_first(m, expected):
    assert primes_first(m) == expected


def test_primes_first_rejects_zero():
    with pytest.raises(DomainError):
        primes_first(0)


@pytest.mark.parametrize("k,expected", [(1, 1), (4, 12), (13, 360360)])
def test_lcm_upto(k, expected):
    assert lcm_upto(k) == expected


def test_lcm_upto_empty():
    with pytest.raises(DomainError):
        lcm_upto(0)


@pytest.mark.parametrize("k", range(7, 40))
def test_lcm_nair_bounds(k):
    assert 2**k <= lcm_upto(k) <= 4**k


def test_crr_examples():
    x = crr([2, 3], 3)
    assert x.value(1, 1) == 1 and x.value(2, 0) == 1
    assert x.value(1, 0) == 0
    assert crr([2], 0).value(1, 0) == 1
    assert crr([2, 3, 5], 29).residues() == (1, 2, 4)


def test_crr_range():
    with pytest.raises(DomainError):
        crr([2, 3], 6)
    with pytest.raises(DomainError):
        crr([2, 3], -1)


@given(st.integers(1, 5), st.data())
def test_crt_round_trip(m, data):
    primes = primes_first(m)
    M = data.draw(st.integers(0, math.prod(primes) - 1))
    x = crr(primes, M)
    assert crt_reconstruct(primes, x.residues()) == M
    # one-hot per block
    for i, p in enumerate(primes, start=1):
        assert sum(x.value(i, r) for r in range(p)) == 1


@pytest.mark.parametrize("i,n,expected", [(1, 1, 1), (3, 4, 1), (2, 5, 0)])
def test_bit(i, n, expected):
    assert bit(i, n) == expected


@pytest.mark.parametrize("i,n,expected", [(1, 3, "odd"), (2, 4, "even"), (3, 12, "odd")])
def test_parity_divisible_count(i, n, expected):
    assert parity_divisible_count(i, n) == expected


@given(st.integers(1, 10), st.integers(0, 3000))
def test_parity_matches_count(i, n):
    count = sum(1 for v in range(1, n + 1) if v % 2 ** (i - 1) == 0)
    assert parity_divisible_count(i, n) == ("odd" if count % 2 else "even")
    # bit_i(n) is the parity of the number of multiples of 2^(i-1) up to n
    assert bit(i, n) == count % 2


def test_bit_big_numbers():
    n = 10**18 + 5
    assert bit(1, n) == 1
    assert sum(bit(i, n) << (i - 1) for i in range(1, 70)) == n
