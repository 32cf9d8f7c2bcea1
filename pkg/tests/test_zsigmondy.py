from __future__ import annotations

import pytest
from hypothesis import given
from hypothesis import strategies as st
from sympy import factorint

from nearcyc.nearfield import construct_nearfield
from nearcyc.numtheory import multiplicative_order
from nearcyc.scheme import build_cyclotomic
from nearcyc.zsigmondy import (
    ZsigmondyError,
    cyclotomic_coefficients,
    cyclotomic_poly_value,
    distinct_prime_count,
    greatest_prime_factor,
    is_zsigmondy_exception,
    semilinear_check,
    semilinear_hypothesis_prime,
    zsigmondy_primes,
)


def naive_zsigmondy(q, n):
    out = []
    for r in range(2, q**n):
        if (q**n - 1) % r == 0 and all(r % s for s in range(2, int(r**0.5) + 1)):
            if all((q**i - 1) % r for i in range(1, n)):
                out.append(r)
    return out


def test_examples():
    assert zsigmondy_primes(2, 6) == []
    assert zsigmondy_primes(2, 4) == [5]
    assert 5 % 4 == 1
    assert zsigmondy_primes(13, 2, 5) == [7]


@pytest.mark.parametrize("q", [2, 3, 4, 5, 7, 8, 9])
@pytest.mark.parametrize("n", [1, 2, 3, 4, 5, 6])
def test_matches_divisor_scan(q, n):
    if q**n > 20000:
        return
    assert zsigmondy_primes(q, n) == naive_zsigmondy(q, n)


@given(st.integers(2, 60), st.integers(1, 12), st.integers(0, 20))
def test_order_characterization(q, n, k):
    for r in zsigmondy_primes(q, n, k):
        assert r > k
        assert multiplicative_order(q % r, r) == n
        assert (r - 1) % n == 0


def test_overflow_and_bad_input():
    with pytest.raises(ZsigmondyError):
        zsigmondy_primes(2, 200)
    with pytest.raises(ValueError):
        zsigmondy_primes(1, 3)
    with pytest.raises(ZsigmondyError):
        cyclotomic_poly_value(3, 2**130)


def test_exception_list():
    assert is_zsigmondy_exception(2, 6)
    assert is_zsigmondy_exception(7, 2) and is_zsigmondy_exception(3, 2)
    assert not is_zsigmondy_exception(5, 2)
    assert not is_zsigmondy_exception(2, 4)


def test_cyclotomic_values():
    assert cyclotomic_poly_value(6, 2, 1) == 3
    assert greatest_prime_factor(3) == 3
    for q in [2, 3, 7, 16]:
        assert cyclotomic_poly_value(1, q, 1) == q - 1
    assert distinct_prime_count(12) == 2
    assert cyclotomic_coefficients(6) == (1, -1, 1)
    # homogenized form
    assert cyclotomic_poly_value(6, 3, 2) == 9 - 6 + 4


@given(st.integers(2, 30), st.integers(1, 10))
def test_phi_divides_and_matches_product(q, n):
    v = cyclotomic_poly_value(n, q, 1)
    assert (q**n - 1) % v == 0
    # q^n - 1 is the product of Phi_d(q) over d | n
    prod = 1
    for d in range(1, n + 1):
        if n % d == 0:
            prod *= cyclotomic_poly_value(d, q, 1)
    assert prod == q**n - 1


@given(st.integers(2, 10**6))
def test_prime_helpers(m):
    f = factorint(m)
    assert greatest_prime_factor(m) == max(f)
    assert distinct_prime_count(m) == len(f)


# -- the semilinear criterion on schemes --


def test_hypothesis_none_at_order9():
    nf = construct_nearfield(3, 2)
    for K in nf.mult_group.subgroups():
        assert semilinear_hypothesis_prime(build_cyclotomic(nf, K)) is None


def test_hypothesis_at_order169():
    nf = construct_nearfield(13, 2)
    for K in nf.mult_group.subgroups():
        r = semilinear_hypothesis_prime(build_cyclotomic(nf, K))
        if len(K) % 7 == 0 and len(K) < 168:
            assert r == 7
        else:
            assert r is None


def test_vacuous_when_not_applicable():
    nf = construct_nearfield(3, 2)
    res = semilinear_check(build_cyclotomic(nf, nf.mult_group.subgroups()[2]))
    assert not res.applicable and res.ok


def test_order169_valency84():
    nf = construct_nearfield(13, 2)
    K = next(K for K in nf.mult_group.subgroups() if len(K) == 84)
    res = semilinear_check(build_cyclotomic(nf, K))
    assert res.applicable and res.prime == 7
    assert res.primitive and res.semilinear and res.ok
