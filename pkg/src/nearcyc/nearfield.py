"""Dickson near-fields.

A Dickson near-field of order ``q^n`` lives on the additive group of
``GF(q^n)``.  Its product twists the field product by a power of the Frobenius
over ``GF(q)`` that depends on the coset of the right factor modulo the index-n
subgroup of ``GF(q^n)^x``::

    a o b = a^(q^j(b)) * b

Here ``j(g^m)`` is the unique ``j`` in ``[0, n)`` with ``(q^j - 1)/(q - 1) == m``
(mod n).  The near-field variants of a fixed pair ``(q, n)`` relabel the cosets
through a unit ``u`` mod n, which amounts to replacing ``g`` with ``g^u``.
"""

from __future__ import annotations

import csv
import itertools
from dataclasses import dataclass, field
from functools import cached_property
from math import gcd
from pathlib import Path

import numpy as np

from .finite_field import FiniteField, make_field
from .linalg import independent_subset, inverse_mod_p, vector_space
from .numtheory import euler_phi, multiplicative_order, prime_factors, prime_power

CUBIC_CHECK_BOUND = 2**12
CAYLEY_TABLE_BOUND = 2**12


class NearFieldError(ValueError):
    pass


@dataclass(frozen=True)
class DicksonPair:
    q: int
    n: int
    p: int
    d: int

    @classmethod
    def of(cls, q: int, n: int) -> "DicksonPair":
        if not validate_dickson_pair(q, n):
            raise NearFieldError(f"({q}, {n}) is not a Dickson pair")
        p, d = prime_power(q)
        return cls(q, n, p, d)

    @property
    def order(self) -> int:
        return self.q**self.n


def validate_dickson_pair(q: int, n: int) -> bool:
    if prime_power(q) is None:
        raise NearFieldError(f"{q} is not a prime power")
    if n < 1:
        raise NearFieldError(f"n must be positive, got {n}")
    if any((q - 1) % r for r in prime_factors(n)):
        return False
    return not (n % 4 == 0 and (q - 1) % 4)


def _k_param(p: int, n: int) -> int:
    return 1 if n == 1 else multiplicative_order(p, n)


def count_dickson_nearfields(q: int, n: int) -> int:
    pair = DicksonPair.of(q, n)
    return euler_phi(n) // _k_param(pair.p, n)


def variant_units(q: int, n: int) -> list[int]:
    """Smallest representative of each coset of <p> in the units mod n, ascending."""
    pair = DicksonPair.of(q, n)
    if n == 1:
        return [1]
    seen: set[int] = set()
    reps = []
    for u in range(1, n):
        if gcd(u, n) != 1 or u in seen:
            continue
        reps.append(u)
        x = u
        while x not in seen:
            seen.add(x)
            x = x * pair.p % n
    return reps


def classical_coupling(q: int, n: int) -> np.ndarray:
    """``J[m]`` = the Frobenius exponent attached to coset index ``m`` mod n."""
    J = np.full(n, -1, dtype=np.int64)
    for j in range(n):
        m = ((q**j - 1) // (q - 1)) % n
        if J[m] != -1:
            raise NearFieldError(f"coset residues of ({q}, {n}) are not distinct")
        J[m] = j
    return J


@dataclass(frozen=True, eq=False)
class DicksonNearField:
    pair: DicksonPair
    field: FiniteField
    variant: int
    unit: int
    coupling: np.ndarray = field(repr=False)

    @property
    def q(self) -> int:
        return self.pair.q

    @property
    def n(self) -> int:
        return self.pair.n

    @property
    def p(self) -> int:
        return self.field.p

    @property
    def order(self) -> int:
        return self.field.order

    @property
    def dimension(self) -> int:
        return self.field.e

    @property
    def is_field(self) -> bool:
        return self.n == 1

    @cached_property
    def frob_exponent(self) -> np.ndarray:
        """Frobenius exponent ``j(x)`` for every nonzero element, by log index."""
        u_inv = pow(self.unit, -1, self.n) if self.n > 1 else 0
        m = np.arange(self.field.unit_order, dtype=np.int64)
        return self.coupling[(m * u_inv) % self.n]

    @cached_property
    def _qpow_by_log(self) -> np.ndarray:
        """``q^j(g^b) mod (q^n - 1)`` indexed by the log ``b``."""
        U = self.field.unit_order
        powers = np.array([pow(self.q, j, U) if U > 1 else 0 for j in range(self.n)], dtype=np.int64)
        return powers[self.frob_exponent]

    def mul_log(self, a, b):
        """Log of ``g^a o g^b``."""
        U = self.field.unit_order
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        return (a * self._qpow_by_log[b] + b) % U

    def mul(self, a, b):
        """``a o b = a^(sigma_b) * b`` on field elements (ints or arrays)."""
        F = self.field
        a = np.asarray(a)
        b = np.asarray(b)
        out = F.exp[self.mul_log(F.log[a], F.log[b])]
        res = np.where((a == 0) | (b == 0), 0, out)
        return int(res) if res.ndim == 0 else res

    @cached_property
    def mul_table(self) -> np.ndarray:
        """``mul_table[a, b] = a o b`` over all elements."""
        if self.order > CAYLEY_TABLE_BOUND:
            raise NearFieldError("multiplication table only kept up to 2^12 elements")
        x = np.arange(self.order)
        return self.mul(x[:, None], x[None, :])

    def inverse(self, a: int) -> int:
        return int(self.field.exp[self.mult_group.inverse[int(self.field.log[a])]])

    @cached_property
    def mult_group(self) -> "MultGroup":
        U = self.field.unit_order
        if U > CAYLEY_TABLE_BOUND:
            raise NearFieldError("multiplicative group table only kept up to 2^12 elements")
        m = np.arange(U)
        table = self.mul_log(m[:, None], m[None, :])
        return MultGroup(labels=self.field.exp.copy(), table=table)

    def is_mult_abelian(self) -> bool:
        t = self.mult_group.table
        return bool((t == t.T).all())

    def label(self) -> str:
        return f"NF({self.q},{self.n})#{self.variant}"

    def export_table_csv(self, path: str | Path) -> None:
        """Write the products of nonzero elements as logs: row log(x), column
        log(y), entry log(y o x)."""
        t = self.mult_group.table
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["x\\y"] + list(range(t.shape[0])))
            for x in range(t.shape[0]):
                w.writerow([x] + [int(v) for v in t[:, x]])


def construct_nearfield(q: int, n: int, variant: int = 0) -> DicksonNearField:
    pair = DicksonPair.of(q, n)
    units = variant_units(q, n)
    if not 0 <= variant < len(units):
        raise NearFieldError(f"variant {variant} out of range for ({q}, {n}); {len(units)} available")
    F = make_field(pair.p, pair.d * n)
    J = classical_coupling(q, n) if n > 1 else np.zeros(1, dtype=np.int64)
    J.setflags(write=False)
    return DicksonNearField(pair=pair, field=F, variant=variant, unit=units[variant], coupling=J)


def nearfield_with_unit(q: int, n: int, unit: int) -> DicksonNearField:
    """The near-field whose cosets are relabelled by an arbitrary unit mod n
    (the variants use one unit per coset of ``<p>``)."""
    pair = DicksonPair.of(q, n)
    if n > 1 and gcd(unit, n) != 1:
        raise NearFieldError(f"{unit} is not a unit mod {n}")
    F = make_field(pair.p, pair.d * n)
    J = classical_coupling(q, n) if n > 1 else np.zeros(1, dtype=np.int64)
    J.setflags(write=False)
    u = unit % n if n > 1 else 1
    units = variant_units(q, n)
    variant = units.index(u) if u in units else -1
    return DicksonNearField(pair=pair, field=F, variant=variant, unit=u, coupling=J)


def with_coupling(nf: DicksonNearField, coupling) -> DicksonNearField:
    """Same field and labelling with an arbitrary coupling array (for negative controls)."""
    J = np.asarray(coupling, dtype=np.int64).copy()
    if J.shape != (nf.n,):
        raise NearFieldError("coupling must have one entry per coset")
    J.setflags(write=False)
    return DicksonNearField(pair=nf.pair, field=nf.field, variant=nf.variant, unit=nf.unit, coupling=J)


def enumerate_nearfields(max_order: int) -> list[DicksonNearField]:
    """Every Dickson near-field (all variants) of order at most ``max_order``,
    ordered by ``(q, n, variant)``."""
    out = []
    for q in range(2, max_order + 1):
        if prime_power(q) is None:
            continue
        n = 1
        while q**n <= max_order:
            if validate_dickson_pair(q, n):
                for v in range(count_dickson_nearfields(q, n)):
                    out.append(construct_nearfield(q, n, v))
            n += 1
    return out


# -- axioms --


@dataclass
class AxiomReport:
    results: dict[str, bool]
    witnesses: dict[str, tuple]

    @property
    def passed(self) -> bool:
        return all(self.results.values())

    def __str__(self) -> str:
        lines = []
        for name, ok in self.results.items():
            extra = "" if ok else f" witness={self.witnesses.get(name)}"
            lines.append(f"{name}: {'ok' if ok else 'FAIL'}{extra}")
        return "\n".join(lines)


def _small_int(N: int):
    return np.int16 if N <= 2**15 else np.int32


def _addition_table(F: FiniteField) -> np.ndarray:
    if F.order <= 2**10:
        return F.add_table
    x = np.arange(F.order)
    return F.add(x[:, None], x[None, :])


def verify_nearfield_axioms(nf: DicksonNearField, bound: int = CUBIC_CHECK_BOUND) -> AxiomReport:
    """Exhaustive check of the near-field axioms on the element tables."""
    N = nf.order
    if N > bound:
        raise NearFieldError(f"order {N} exceeds exhaustive bound {bound}")
    F = nf.field
    M = nf.mul_table
    x = np.arange(N)
    results: dict[str, bool] = {}
    witnesses: dict[str, tuple] = {}

    zero_ok = bool((M[:, 0] == 0).all() and (M[0, :] == 0).all())
    results["zero"] = zero_ok
    if not zero_ok:
        bad = np.argwhere((M[:, 0] != 0))
        witnesses["zero"] = (int(bad[0, 0]), 0) if len(bad) else (0, int(np.argwhere(M[0] != 0)[0, 0]))

    # (a + b) o c == a o c + b o c; columns of M are read as contiguous rows of M.T
    MT = np.ascontiguousarray(M.T, dtype=_small_int(N))
    A = _addition_table(F).astype(_small_int(N))
    results["right_distributive"] = True
    for c in range(N):
        col = MT[c]
        lhs = np.take(col, A)
        rhs = np.take(A, col, axis=0).take(col, axis=1)
        if not np.array_equal(lhs, rhs):
            bad = np.argwhere(lhs != rhs)
            results["right_distributive"] = False
            witnesses["right_distributive"] = (int(bad[0, 0]), int(bad[0, 1]), c)
            break

    # (a o b) o c == a o (b o c) on nonzero elements
    results["associative"] = True
    nz = x[1:]
    ab = np.ascontiguousarray(M[1:, 1:], dtype=_small_int(N))
    rows = np.ascontiguousarray(M[1:], dtype=_small_int(N))
    for c in nz:
        col = MT[c]
        lhs = np.take(col, ab)
        rhs = np.take(rows, col[1:], axis=1)
        if not np.array_equal(lhs, rhs):
            bad = np.argwhere(lhs != rhs)
            results["associative"] = False
            witnesses["associative"] = (int(nz[bad[0, 0]]), int(nz[bad[0, 1]]), int(c))
            break

    ident = [e for e in nz if (M[nz, e] == nz).all() and (M[e, nz] == nz).all()]
    results["identity"] = len(ident) == 1
    if not ident:
        witnesses["identity"] = ()
    else:
        e = ident[0]
        left = (M[nz][:, nz] == e).any(axis=1)
        right = (M[nz][:, nz] == e).any(axis=0)
        inv_ok = bool(left.all() and right.all())
        results["inverses"] = inv_ok
        if not inv_ok:
            witnesses["inverses"] = (int(nz[np.argmin(left & right)]),)
        # closure: products of nonzero elements are nonzero
        closed = bool((M[nz][:, nz] != 0).all())
        results["closed"] = closed
        if not closed:
            bad = np.argwhere(M[nz][:, nz] == 0)[0]
            witnesses["closed"] = (int(nz[bad[0]]), int(nz[bad[1]]))
    if "inverses" not in results:
        results["inverses"] = False
    return AxiomReport(results, witnesses)


# -- the multiplicative group --


@dataclass(eq=False)
class MultGroup:
    """A finite group by Cayley table on positions ``0..n-1``; ``labels[i]``
    names position ``i`` externally.  Position 0 must be the identity."""

    labels: np.ndarray
    table: np.ndarray

    def __post_init__(self):
        n = len(self.labels)
        if self.table.shape != (n, n):
            raise ValueError("table shape does not match labels")
        ar = np.arange(n)
        if not ((self.table[0] == ar).all() and (self.table[:, 0] == ar).all()):
            raise ValueError("position 0 is not the identity")

    @classmethod
    def from_table(cls, table, labels=None) -> "MultGroup":
        table = np.asarray(table, dtype=np.int64)
        if labels is None:
            labels = np.arange(len(table))
        return cls(labels=np.asarray(labels), table=table)

    @property
    def order(self) -> int:
        return len(self.labels)

    @cached_property
    def inverse(self) -> np.ndarray:
        return np.argmax(self.table == 0, axis=1)

    @cached_property
    def element_orders(self) -> np.ndarray:
        n = self.order
        orders = np.zeros(n, dtype=np.int64)
        for i in range(n):
            k, x = 1, i
            while x != 0:
                x = int(self.table[x, i])
                k += 1
            orders[i] = k
        return orders

    def is_abelian(self) -> bool:
        return bool((self.table == self.table.T).all())

    def _closure(self, gens: list[int]) -> int:
        """Bitmask of the subgroup generated by ``gens``."""
        t = self.table
        mask = 1
        elems = [0]
        for h in elems:
            for g in gens:
                x = int(t[h, g])
                if not mask >> x & 1:
                    mask |= 1 << x
                    elems.append(x)
        return mask

    def _cyclic(self, g: int) -> int:
        return self._closure([g])

    def subgroup_masks(self) -> list[tuple[int, tuple[int, ...]]]:
        """All subgroups as ``(bitmask, generators)`` by cyclic extension."""
        if self.order > CAYLEY_TABLE_BOUND:
            raise NearFieldError("subgroup enumeration bound exceeded")
        orders = self.element_orders
        cyclic: dict[int, int] = {}
        for g in range(self.order):
            if len(prime_factors(int(orders[g]))) <= 1:
                m = self._cyclic(g)
                cyclic.setdefault(m, g)
        prime_power_cyclics = sorted(cyclic.items(), key=lambda kv: bin(kv[0]).count("1"))
        found: dict[int, tuple[int, ...]] = {1: ()}
        frontier = [1]
        while frontier:
            nxt = []
            for H in frontier:
                gens = found[H]
                for C, g in prime_power_cyclics:
                    if C & ~H == 0:
                        continue
                    J = self._closure(list(gens) + [g])
                    if J not in found:
                        found[J] = tuple(gens) + (g,)
                        nxt.append(J)
            frontier = nxt
        return list(found.items())

    def subgroups(self) -> list[list[int]]:
        """Every subgroup as a sorted list of labels, sorted by (order, lex)."""
        out = []
        for mask, _ in self.subgroup_masks():
            pos = [i for i in range(self.order) if mask >> i & 1]
            out.append(sorted(int(self.labels[i]) for i in pos))
        out.sort(key=lambda s: (len(s), s))
        return out


def enumerate_subgroups(M: MultGroup) -> list[list[int]]:
    return M.subgroups()


def sylow_types(M: MultGroup) -> dict[int, str]:
    """Classify each Sylow subgroup as 'cyclic', 'quaternion' or 'other'."""
    out = {}
    subs = M.subgroup_masks()
    for r, k in _factor_pairs(M.order):
        target = r**k
        for mask, _ in subs:
            if bin(mask).count("1") == target:
                pos = [i for i in range(M.order) if mask >> i & 1]
                ords = M.element_orders[pos]
                if (ords == target).any():
                    out[r] = "cyclic"
                elif r == 2 and int((ords == 2).sum()) == 1:
                    out[r] = "quaternion"
                else:
                    out[r] = "other"
                break
    return out


def _factor_pairs(n: int):
    from .numtheory import factorize

    return factorize(n) if n > 1 else ()


# -- isomorphism of near-fields --


def _span_basis(F: FiniteField, vectors) -> list[int]:
    """Greedy choice of linearly independent elements (over GF(p)) from ``vectors``."""
    vectors = [int(v) for v in vectors]
    return [vectors[i] for i in independent_subset(F.digits[vectors], F.p)][: F.e]


def _linear_extension(F: FiniteField, basis: list[int], images: list[int]) -> np.ndarray:
    """Point map of the GF(p)-linear map sending ``basis[i] -> images[i]``."""
    B = F.digits[basis].T  # columns are basis vectors
    M = (F.digits[images].T @ inverse_mod_p(B, F.p)) % F.p
    return vector_space(F.p, F.e).matrix_to_perm(M)


def nearfield_isomorphism(A: DicksonNearField, B: DicksonNearField) -> np.ndarray | None:
    """A bijection ``f`` (as a point map) with ``f(x+y) = f(x)+f(y)`` and
    ``f(x o y) = f(x) o f(y)``, or None.

    An isomorphism is GF(p)-linear and restricts to a group isomorphism of the
    multiplicative groups, so it is pinned down by the images of a few
    multiplicative generators whose powers span the space.  Candidate images
    are restricted to elements of matching multiplicative order and every
    candidate is checked against the full tables.
    """
    if A.order != B.order or A.p != B.p:
        return None
    F = A.field
    if B.field != F:
        return None
    GA, GB = A.mult_group, B.mult_group
    if sorted(GA.element_orders) != sorted(GB.element_orders):
        return None
    MA, MB = A.mul_table, B.mul_table

    # generators on the A side, largest order first, until they generate everything
    order_rank = sorted(range(GA.order), key=lambda i: (-GA.element_orders[i], i))
    full = (1 << GA.order) - 1
    gens: list[int] = []
    for cand in order_rank:
        if gens and GA._closure(gens) >> cand & 1:
            continue
        gens.append(cand)
        if GA._closure(gens) == full:
            break

    # words expressing every group element in the generators (BFS on A)
    words = {0: ()}
    queue = [0]
    for h in queue:
        for gi, g in enumerate(gens):
            x = int(GA.table[h, g])
            if x not in words:
                words[x] = words[h] + (gi,)
                queue.append(x)

    # the first generator's powers usually span V already; then its image
    # alone fixes the linear map and the other images are forced
    first_powers = [w for w in words if all(gi == 0 for gi in words[w])]
    first_powers.sort(key=lambda i: len(words[i]))
    if len(_span_basis(F, [int(F.exp[i]) for i in first_powers])) == F.e:
        levels = 1
        span_source = first_powers
    else:
        levels = len(gens)
        span_source = sorted(words, key=lambda i: len(words[i]))
    basis = _span_basis(F, [int(F.exp[i]) for i in span_source])
    basis_logs = [int(F.log[b]) for b in basis]

    candidates = [
        [j for j in range(GB.order) if GB.element_orders[j] == GA.element_orders[g]]
        for g in gens[:levels]
    ]
    x = np.arange(F.order)
    for imgs in itertools.product(*candidates):

        def image(i: int) -> int:
            y = 0
            for gi in words[i]:
                y = int(GB.table[y, imgs[gi]])
            return y

        targets = [int(F.exp[image(b)]) for b in basis_logs]
        if len(_span_basis(F, targets)) < F.e:
            continue
        f = _linear_extension(F, basis, targets)
        # cheap rejection on the span source before the full table check
        if any(f[int(F.exp[w])] != int(F.exp[image(w)]) for w in span_source):
            continue
        if len(np.unique(f)) != F.order:
            continue
        if (f[MA] == MB[f[x][:, None], f[x][None, :]]).all():
            return f
    return None


def isomorphism_classes(nfs: list[DicksonNearField]) -> list[list[int]]:
    """Partition indices of ``nfs`` into near-field isomorphism classes."""
    classes: list[list[int]] = []
    for i, nf in enumerate(nfs):
        for cls in classes:
            if nearfield_isomorphism(nfs[cls[0]], nf) is not None:
                cls.append(i)
                break
        else:
            classes.append([i])
    return classes
