"""Zsigmondy primes, cyclotomic polynomial values, and the semilinearity
criterion for schemes whose valency has a large Zsigmondy prime divisor.

A Zsigmondy prime for ``(q, n)`` divides ``q^n - 1`` but no ``q^i - 1`` with
``1 <= i < n``; equivalently the multiplicative order of ``q`` modulo ``r`` is
exactly ``n``, which forces ``r = 1 (mod n)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from sympy import Poly, cyclotomic_poly, symbols

from .numtheory import factorize, prime_factors
from .perm_group import MatrixGroup, is_semilinear, mul, perm_order
from .scheme import (
    CyclotomicScheme,
    SchemeError,
    aut_bruteforce,
    base_group,
    is_primitive,
    span_field,
)

INT_BITS = 128
_LIMIT = 1 << INT_BITS


class ZsigmondyError(OverflowError):
    pass


def _check_width(value: int, what: str) -> int:
    if abs(value) >= _LIMIT:
        raise ZsigmondyError(f"{what} does not fit in {INT_BITS}-bit arithmetic")
    return value


def zsigmondy_primes(q: int, n: int, k: int = 0) -> list[int]:
    """Sorted primes ``r > k`` dividing ``q^n - 1`` but no ``q^i - 1``, ``i < n``."""
    if q < 2 or n < 1:
        raise ValueError(f"need q >= 2 and n >= 1, got ({q}, {n})")
    top = _check_width(q**n, "q^n")
    if top - 1 == 1:
        return []
    out = []
    for r in prime_factors(top - 1):
        if r <= k:
            continue
        if all((q**i - 1) % r for i in range(1, n)):
            out.append(r)
    return out


def is_zsigmondy_exception(q: int, n: int) -> bool:
    """The pairs with no Zsigmondy prime: ``(2, 6)``, ``n = 2`` with ``q + 1`` a
    power of two, and the degenerate ``(2, 1)`` where ``q^n - 1 = 1``."""
    if (q, n) in ((2, 6), (2, 1)):
        return True
    return n == 2 and (q + 1) & q == 0


@lru_cache(maxsize=256)
def cyclotomic_coefficients(n: int) -> tuple[int, ...]:
    """Integer coefficients of the ``n``-th cyclotomic polynomial, constant
    term first."""
    if n < 1:
        raise ValueError("n must be positive")
    x = symbols("x")
    coeffs = Poly(cyclotomic_poly(n, x), x).all_coeffs()
    return tuple(int(c) for c in reversed(coeffs))


def cyclotomic_poly_value(n: int, alpha: int, beta: int = 1) -> int:
    """Homogenized value ``Phi_n(alpha, beta) = beta^phi(n) Phi_n(alpha / beta)``."""
    c = cyclotomic_coefficients(n)
    deg = len(c) - 1
    _check_width(alpha, "alpha")
    _check_width(beta, "beta")
    total = sum(ci * alpha**i * beta ** (deg - i) for i, ci in enumerate(c))
    return _check_width(total, f"Phi_{n}({alpha}, {beta})")


def greatest_prime_factor(m: int) -> int:
    """Largest prime dividing ``|m|``; 1 for ``|m| <= 1``."""
    m = abs(m)
    return factorize(m)[-1][0] if m > 1 else 1


def distinct_prime_count(m: int) -> int:
    m = abs(m)
    return len(factorize(m)) if m > 1 else 0


# -- schemes of valency divisible by a large Zsigmondy prime --


def semilinear_hypothesis_prime(cs: CyclotomicScheme) -> int | None:
    """Smallest prime ``r`` dividing the valency with ``r`` a Zsigmondy prime
    for ``(p, dn)`` and ``r > 2dn + 1``; None for the trivial scheme or when no
    such prime exists."""
    nf = cs.nearfield
    m = cs.valency
    if m >= nf.order - 1:
        return None
    dn = nf.dimension
    for r in zsigmondy_primes(nf.p, dn, 2 * dn + 1):
        if m % r == 0:
            return r
    return None


@dataclass(frozen=True)
class SemilinearCheck:
    applicable: bool
    prime: int | None = None
    primitive: bool | None = None
    semilinear: bool | None = None
    stabilizer_order: int | None = None

    @property
    def ok(self) -> bool:
        return not self.applicable or bool(self.primitive and self.semilinear)


def cyclic_subgroup_of_order(G: MatrixGroup, r: int) -> list[int]:
    """Indices (into ``G.matrices``) of the cyclic subgroup generated by the
    first element of order ``r``."""
    perms = G.perms
    index = {g: i for i, g in enumerate(perms)}
    for i, g in enumerate(perms):
        if perm_order(g) == r:
            out = [i]
            x = g
            for _ in range(r - 1):
                x = mul(x, g)
                out.append(index[x])
            return sorted(out)
    raise SchemeError(f"no element of order {r} in the base group")


def semilinear_check(cs: CyclotomicScheme) -> SemilinearCheck:
    """When the valency has a qualifying Zsigmondy prime ``r``: build the field
    spanned by a cyclic subgroup of order ``r`` of the base group, and test
    that the scheme is primitive and that every automorphism fixing 0 is
    semilinear over that field.  Vacuous otherwise."""
    r = semilinear_hypothesis_prime(cs)
    if r is None:
        return SemilinearCheck(applicable=False)
    G = base_group(cs.nearfield, cs.K)
    idx = cyclic_subgroup_of_order(G, r)
    F = span_field(G.space, [G.matrices[i] for i in idx])
    stab = aut_bruteforce(cs.scheme).stabilizer(0)
    return SemilinearCheck(
        applicable=True,
        prime=r,
        primitive=is_primitive(cs.scheme),
        semilinear=is_semilinear(stab, F),
        stabilizer_order=stab.order,
    )


def semilinear_conclusion_check(cs: CyclotomicScheme) -> bool:
    return semilinear_check(cs).ok


def zsigmondy_table(bound: int = 2**16) -> list[tuple[int, int, list[int]]]:
    """``(q, n, Z_0(q, n))`` for every prime power ``q`` and ``n`` with
    ``2 <= q^n <= bound``."""
    from .numtheory import prime_power

    out = []
    for q in range(2, bound + 1):
        if prime_power(q) is None:
            continue
        n = 1
        while q**n <= bound:
            out.append((q, n, zsigmondy_primes(q, n)))
            n += 1
    return out


__all__ = [
    "SemilinearCheck",
    "ZsigmondyError",
    "cyclic_subgroup_of_order",
    "cyclotomic_coefficients",
    "cyclotomic_poly_value",
    "distinct_prime_count",
    "greatest_prime_factor",
    "is_zsigmondy_exception",
    "semilinear_check",
    "semilinear_conclusion_check",
    "semilinear_hypothesis_prime",
    "zsigmondy_primes",
    "zsigmondy_table",
]
