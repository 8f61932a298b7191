from fractions import Fraction

import numpy as np
import pytest
import sympy
from hypothesis import given, settings, strategies as st

from dalgebra.domain import QQ, ZZ, Zmod, from_modulus
from dalgebra.errors import FormatError, NonPrimeModulus
from dalgebra.linalg import (crt_pair, min_last_vector, nullspace_mod_p, primitive_integer_vector,
                             word_primes)
from dalgebra.ntheory import (is_prime, prime_power, rational_reconstruct, sqrt_mod_prime,
                              sqrt_mod_prime_power)
from dalgebra.series import PowerSeries
from dalgebra.seriesio import read_series, read_series_with_name, write_series


def test_primality_matches_sieve():
    sieve = set(sympy.primerange(2, 5000))
    assert {n for n in range(5000) if is_prime(n)} == sieve


def test_prime_power_detection():
    assert prime_power(32) == (2, 5)
    assert prime_power(7) == (7, 1)
    assert prime_power(12) is None
    assert prime_power(1) is None


def test_domains():
    assert from_modulus(0) == ZZ
    assert from_modulus(32) == Zmod(2, 5)
    with pytest.raises(Exception):
        from_modulus(12)
    assert Zmod(5, 2).modulus == 25
    assert QQ.is_field and Zmod(7).is_field and not Zmod(2, 5).is_field


@settings(max_examples=60)
@given(st.sampled_from([3, 5, 7, 11, 13, 101, 32749]), st.integers(1, 10**6))
def test_sqrt_mod_prime(p, a):
    a %= p
    r = sqrt_mod_prime(a, p)
    if r is None:
        assert pow(a, (p - 1) // 2, p) == p - 1
    else:
        assert r * r % p == a


@settings(max_examples=40)
@given(st.sampled_from([3, 5, 7, 11]), st.integers(2, 4), st.integers(1, 10**6))
def test_hensel_square_root(p, r, b):
    m = p ** r
    if b % p == 0:
        return
    a = b * b % m
    x = sqrt_mod_prime_power(a, p, r)
    assert x * x % m == a


@settings(max_examples=80)
@given(st.integers(-1000, 1000), st.integers(1, 1000))
def test_rational_reconstruction_round_trip(n, d):
    q = Fraction(n, d)
    m = 2147483647 * 2147483629
    a = q.numerator * pow(q.denominator, -1, m) % m
    assert rational_reconstruct(a, m) == q


@settings(max_examples=40)
@given(st.integers(-10**12, 10**12))
def test_crt_pair(x):
    r, m = crt_pair(x % 1000003, 1000003, x % 998244353, 998244353)
    assert m == 1000003 * 998244353
    assert (r - x) % m == 0


def test_word_primes_are_descending_primes():
    ps = list(word_primes(5, bits=15))
    assert ps == sorted(ps, reverse=True)
    assert ps[0] == 32749 and all(sympy.isprime(p) for p in ps)


def test_nullspace_and_min_last_vector():
    p = 101
    M = np.array([[1, 1, 0, 0], [0, 0, 1, 1]])
    B = nullspace_mod_p(M, p)
    assert B.shape == (2, 4)
    assert not (M @ B.T % p).any()
    vec, idx, dim = min_last_vector(B, p)
    assert dim == 2 and idx == 1
    assert list(vec) == [p - 1, 1, 0, 0]


def test_primitive_integer_vector():
    assert primitive_integer_vector([Fraction(-1, 2), Fraction(1, 3), 0]) == [3, -2, 0]


# series file format

def test_round_trip_integer(tmp_path):
    s = PowerSeries.from_list([0, 0, 12, 24, -168, 10**40])
    path = tmp_path / "a.series"
    write_series(s, path, "tutte q=4")
    back, name = read_series_with_name(path)
    assert back == s and name == "tutte q=4"


def test_round_trip_rational_and_modular(tmp_path):
    r = PowerSeries(QQ, [1, Fraction(-1, 2), 3])
    write_series(r, tmp_path / "r")
    assert read_series(tmp_path / "r") == r
    m = PowerSeries(Zmod(2, 5), [1, 31, 0, 7])
    write_series(m, tmp_path / "m")
    text = (tmp_path / "m").read_text()
    assert text.startswith("#modulus 2^5\n#order 3\n")
    assert read_series(tmp_path / "m") == m


@settings(max_examples=30)
@given(st.lists(st.integers(-10**50, 10**50), min_size=1, max_size=50))
def test_round_trip_property(tmp_path_factory, coeffs):
    path = tmp_path_factory.mktemp("io") / "s"
    s = PowerSeries(ZZ, coeffs)
    write_series(s, path)
    assert read_series(path) == s


@pytest.mark.parametrize("body, where", [
    ("#order 2\n1\n2\n3\n", "modulus"),
    ("#modulus 7\n#order 3\n1\n2\n3\n", "expected 4"),
    ("#modulus 7\n#order 1\n1\n9\n", "out of range"),
    ("#modulus 0\n#order 1\n1\nx\n", "bad coefficient"),
    ("#modulus 12\n#order 0\n1\n", "12"),
])
def test_malformed_files(tmp_path, body, where):
    path = tmp_path / "bad"
    path.write_text(body)
    with pytest.raises((FormatError, NonPrimeModulus)) as exc:
        read_series(path)
    assert where in str(exc.value)
