"""Small integer helpers shared by the field, near-field and Zsigmondy code."""

from __future__ import annotations

from functools import lru_cache
from math import gcd

from sympy import factorint, isprime


def is_prime(n: int) -> bool:
    return n >= 2 and bool(isprime(n))


@lru_cache(maxsize=4096)
def factorize(n: int) -> tuple[tuple[int, int], ...]:
    """Prime factorization of ``n >= 1`` as sorted ``(prime, exponent)`` pairs."""
    if n < 1:
        raise ValueError(f"cannot factor {n}")
    return tuple(sorted(factorint(n).items()))


def prime_factors(n: int) -> list[int]:
    return [r for r, _ in factorize(n)]


def prime_power(q: int) -> tuple[int, int] | None:
    """Return ``(p, d)`` with ``q == p**d``, or None if q is not a prime power."""
    if q < 2:
        return None
    f = factorize(q)
    if len(f) != 1:
        return None
    return f[0]


def euler_phi(n: int) -> int:
    result = n
    for r in prime_factors(n):
        result = result // r * (r - 1)
    return result


def multiplicative_order(a: int, n: int) -> int:
    """Order of ``a`` in the unit group mod ``n``; 1 when ``n == 1``."""
    if n == 1:
        return 1
    if gcd(a, n) != 1:
        raise ValueError(f"{a} is not a unit mod {n}")
    order = euler_phi(n)
    for r, _ in factorize(order):
        while order % r == 0 and pow(a, order // r, n) == 1:
            order //= r
    return order


def divisors(n: int) -> list[int]:
    divs = [1]
    for r, k in factorize(n):
        divs = [d * r**i for d in divs for i in range(k + 1)]
    return sorted(divs)
