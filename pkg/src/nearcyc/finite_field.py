"""Table-driven arithmetic in GF(p^e).

Elements are stored as integers ``x = c_0 + c_1 p + ... + c_{e-1} p^{e-1}``
where ``(c_0, ..., c_{e-1})`` are the coordinates over the prime field in the
polynomial basis ``1, t, ..., t^{e-1}``.  The same integer doubles as the index
of the corresponding vector of ``GF(p)^e``, so field elements, points of the
linear space and permutation indices interconvert without translation.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .numtheory import is_prime, prime_factors

DEFAULT_ORDER_BOUND = 2**20
ADD_TABLE_BOUND = 2**10


class FieldError(ValueError):
    pass


# -- polynomial helpers over GF(p); coefficient lists, constant term first --


def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _polymod(a: list[int], m: list[int], p: int) -> list[int]:
    """Remainder of ``a`` modulo the monic polynomial ``m``."""
    a = _trim(list(a))
    dm = len(m) - 1
    while len(a) - 1 >= dm:
        lead = a[-1]
        shift = len(a) - 1 - dm
        for i, c in enumerate(m):
            a[shift + i] = (a[shift + i] - lead * c) % p
        _trim(a)
    return a


def _polymulmod(a: list[int], b: list[int], m: list[int], p: int) -> list[int]:
    if not a or not b:
        return []
    prod = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                prod[i + j] = (prod[i + j] + x * y) % p
    return _polymod(prod, m, p)


def _polypowmod(a: list[int], k: int, m: list[int], p: int) -> list[int]:
    result = [1]
    base = _polymod(a, m, p)
    while k:
        if k & 1:
            result = _polymulmod(result, base, m, p)
        base = _polymulmod(base, base, m, p)
        k >>= 1
    return result


def is_irreducible(modulus: list[int], p: int) -> bool:
    """Trial division of a monic polynomial by every monic polynomial of
    degree ``1 .. deg // 2``."""
    deg = len(modulus) - 1
    if deg < 1:
        return False
    if deg == 1:
        return True
    for k in range(1, deg // 2 + 1):
        for low in itertools.product(range(p), repeat=k):
            if not _polymod(modulus, list(low) + [1], p):
                return False
    return True


def smallest_irreducible(p: int, e: int) -> list[int]:
    """Lexicographically smallest monic irreducible of degree ``e``; vectors
    are compared from the constant term upward."""
    if e == 1:
        return [0, 1]
    for low in itertools.product(range(p), repeat=e):
        if low[0] == 0:
            continue  # divisible by t
        cand = list(low) + [1]
        if is_irreducible(cand, p):
            return cand
    raise FieldError(f"no irreducible polynomial of degree {e} over GF({p})")  # pragma: no cover


@dataclass(frozen=True, eq=False)
class FiniteField:
    """GF(p^e) with a fixed modulus and primitive element ``g``.

    ``exp[i] = g**i`` for ``0 <= i < p^e - 1`` and ``log`` is its inverse on the
    nonzero elements (``log[0] == -1``).
    """

    p: int
    e: int
    modulus: tuple[int, ...]
    generator: int
    exp: np.ndarray = field(repr=False)
    log: np.ndarray = field(repr=False)

    @property
    def order(self) -> int:
        return self.p**self.e

    @property
    def unit_order(self) -> int:
        return self.p**self.e - 1

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, FiniteField)
            and (self.p, self.e, self.modulus) == (other.p, other.e, other.modulus)
        )

    def __hash__(self) -> int:
        return hash((self.p, self.e, self.modulus))

    # -- coordinates --

    @cached_property
    def digits(self) -> np.ndarray:
        """``digits[x]`` is the coordinate vector of element ``x``."""
        x = np.arange(self.order, dtype=np.int64)
        out = np.empty((self.order, self.e), dtype=np.int64)
        for i in range(self.e):
            out[:, i] = x % self.p
            x //= self.p
        return out

    @cached_property
    def _place(self) -> np.ndarray:
        return self.p ** np.arange(self.e, dtype=np.int64)

    def coeffs(self, x: int) -> tuple[int, ...]:
        return tuple(int(c) for c in self.digits[x])

    def element(self, coeffs) -> int:
        coeffs = list(coeffs)
        if len(coeffs) != self.e or any(not 0 <= c < self.p for c in coeffs):
            raise FieldError(f"invalid coordinate vector {coeffs!r}")
        return int(sum(c * self.p**i for i, c in enumerate(coeffs)))

    def encode(self, digit_rows: np.ndarray) -> np.ndarray:
        return (np.asarray(digit_rows) % self.p) @ self._place

    # -- arithmetic (scalars or integer arrays) --

    @cached_property
    def add_table(self) -> np.ndarray:
        if self.order > ADD_TABLE_BOUND:
            raise FieldError("addition table only kept for small fields")
        d = self.digits
        return self.encode(d[:, None, :] + d[None, :, :])

    def add(self, a, b):
        if self.p == 2:
            return np.bitwise_xor(a, b)
        if self.order <= ADD_TABLE_BOUND:
            return self.add_table[a, b]
        return self.encode(self.digits[a] + self.digits[b])

    @cached_property
    def neg_table(self) -> np.ndarray:
        return self.encode(-self.digits)

    def neg(self, a):
        return self.neg_table[a]

    def sub(self, a, b):
        return self.add(a, self.neg_table[b])

    def scalar(self, c: int, a):
        """Multiply by the prime-field scalar ``c``."""
        return self.encode(c * self.digits[a])

    def mul(self, a, b):
        a = np.asarray(a)
        b = np.asarray(b)
        out = self.exp[(self.log[a] + self.log[b]) % self.unit_order]
        return np.where((a == 0) | (b == 0), 0, out)

    @cached_property
    def mul_table(self) -> np.ndarray:
        x = np.arange(self.order)
        return self.mul(x[:, None], x[None, :])

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("0 has no inverse")
        return int(self.exp[(-int(self.log[a])) % self.unit_order])

    def power(self, a: int, k: int) -> int:
        if a == 0:
            if k <= 0:
                raise ZeroDivisionError("0 to a non-positive power")
            return 0
        return int(self.exp[(int(self.log[a]) * k) % self.unit_order])

    def element_order(self, a: int) -> int:
        from math import gcd

        if a == 0:
            raise FieldError("0 has no multiplicative order")
        return self.unit_order // gcd(int(self.log[a]), self.unit_order)

    def to_dict(self) -> dict:
        return {"p": self.p, "e": self.e, "modulus": list(self.modulus)}


def _mult_matrix(a: list[int], modulus: list[int], p: int, e: int) -> np.ndarray:
    """Matrix (column convention) of ``x -> a*x`` in the polynomial basis."""
    cols = []
    for i in range(e):
        prod = _polymulmod(a, [0] * i + [1], modulus, p)
        cols.append(prod + [0] * (e - len(prod)))
    return np.array(cols, dtype=np.int64).T


def _find_primitive(p: int, e: int, modulus: list[int]) -> list[int]:
    unit_order = p**e - 1
    cofactors = [unit_order // r for r in prime_factors(unit_order)] if unit_order > 1 else []
    for coeffs in itertools.product(range(p), repeat=e):
        cand = _trim(list(coeffs))
        if not cand:
            continue
        if _polypowmod(cand, unit_order, modulus, p) != [1]:
            continue  # pragma: no cover - every nonzero element satisfies this
        if all(_polypowmod(cand, c, modulus, p) != [1] for c in cofactors):
            return cand
    raise FieldError("no primitive element found")  # pragma: no cover


def make_field(p: int, e: int = 1, bound: int = DEFAULT_ORDER_BOUND) -> FiniteField:
    """Build GF(p^e) deterministically from ``(p, e)``."""
    if not is_prime(p):
        raise FieldError(f"{p} is not prime")
    if e < 1:
        raise FieldError(f"degree must be positive, got {e}")
    if p**e > bound:
        raise FieldError(f"field order {p}^{e} exceeds bound {bound}")
    return _make_field_cached(p, e)


_FIELD_CACHE: dict[tuple[int, int], FiniteField] = {}


def _make_field_cached(p: int, e: int) -> FiniteField:
    key = (p, e)
    if key not in _FIELD_CACHE:
        _FIELD_CACHE[key] = _build_field(p, e)
    return _FIELD_CACHE[key]


def _build_field(p: int, e: int) -> FiniteField:
    modulus = smallest_irreducible(p, e)
    g = _find_primitive(p, e, modulus)
    q = p**e
    unit_order = q - 1
    place = p ** np.arange(e, dtype=np.int64)

    # powers of g in blocks: row j of the next block is g^B times row j of the last
    mg = _mult_matrix(g, modulus, p, e)
    block = min(unit_order, 1024)
    rows = np.zeros((block, e), dtype=np.int64)
    rows[0, 0] = 1
    for i in range(1, block):
        rows[i] = (mg @ rows[i - 1]) % p
    gb = _polypowmod(g, block, modulus, p)
    step = _mult_matrix(gb, modulus, p, e)
    chunks = [rows]
    total = block
    while total < unit_order:
        rows = (chunks[-1] @ step.T) % p
        chunks.append(rows)
        total += block
    exp = (np.concatenate(chunks)[:unit_order] @ place).astype(np.int64)
    log = np.full(q, -1, dtype=np.int64)
    log[exp] = np.arange(unit_order, dtype=np.int64)
    if (log[1:] < 0).any():
        raise FieldError("generator does not have full order")  # pragma: no cover
    exp.setflags(write=False)
    log.setflags(write=False)
    return FiniteField(
        p=p,
        e=e,
        modulus=tuple(modulus),
        generator=int(sum(c * p**i for i, c in enumerate(g))),
        exp=exp,
        log=log,
    )


def primitive_element(F: FiniteField) -> int:
    return F.generator


def discrete_log(F: FiniteField, x: int) -> int:
    if x == 0:
        raise FieldError("discrete log of zero")
    return int(F.log[x])


def frobenius(F: FiniteField, x, j: int, d: int = 1):
    """``x ** (p^d)^j``: the ``j``-th power of the Frobenius of GF(p^e) over
    its subfield of order ``p^d``."""
    if d < 1 or F.e % d:
        raise FieldError(f"{d} does not divide the degree {F.e}")
    if j < 0:
        raise FieldError("negative Frobenius exponent")
    k = pow(F.p, d * j, F.unit_order) if F.unit_order > 1 else 0
    x = np.asarray(x)
    out = F.exp[(F.log[x] * k) % F.unit_order] if F.unit_order > 1 else x
    result = np.where(x == 0, 0, out)
    return int(result) if result.ndim == 0 else result
