"""Vectors and matrices over a prime field, with points of ``GF(p)^b`` indexed
by their base-p digits (``x = sum c_i p^i``; the zero vector is index 0)."""

from __future__ import annotations

from functools import cached_property, lru_cache

import numpy as np


class VectorSpace:
    def __init__(self, p: int, dim: int):
        self.p = p
        self.dim = dim
        self.size = p**dim

    def __repr__(self) -> str:
        return f"VectorSpace(p={self.p}, dim={self.dim})"

    def __eq__(self, other) -> bool:
        return isinstance(other, VectorSpace) and (self.p, self.dim) == (other.p, other.dim)

    def __hash__(self) -> int:
        return hash((self.p, self.dim))

    @cached_property
    def digits(self) -> np.ndarray:
        x = np.arange(self.size, dtype=np.int64)
        out = np.empty((self.size, self.dim), dtype=np.int64)
        for i in range(self.dim):
            out[:, i] = x % self.p
            x //= self.p
        return out

    @cached_property
    def place(self) -> np.ndarray:
        return self.p ** np.arange(self.dim, dtype=np.int64)

    def encode(self, rows) -> np.ndarray:
        return (np.asarray(rows) % self.p) @ self.place

    @cached_property
    def add_table(self) -> np.ndarray:
        d = self.digits
        return self.encode(d[:, None, :] + d[None, :, :])

    @cached_property
    def neg(self) -> np.ndarray:
        return self.encode(-self.digits)

    @cached_property
    def sub_table(self) -> np.ndarray:
        """``sub_table[x, y] = y - x``."""
        return self.add_table[self.neg[:, None], np.arange(self.size)[None, :]]

    def basis(self) -> list[int]:
        return [self.p**i for i in range(self.dim)]

    def matrix_to_perm(self, M: np.ndarray) -> np.ndarray:
        """Point map ``x -> M x`` (column convention)."""
        return self.encode(self.digits @ np.asarray(M).T)

    def perm_to_matrix(self, perm) -> np.ndarray:
        """Matrix whose columns are the images of the basis vectors."""
        perm = np.asarray(perm)
        return self.digits[perm[self.basis()]].T.copy()

    def translation(self, c: int) -> np.ndarray:
        return self.add_table[:, c].copy()

    def is_additive(self, perm) -> bool:
        perm = np.asarray(perm)
        A = self.add_table
        return bool((perm[A] == A[perm[:, None], perm[None, :]]).all())


@lru_cache(maxsize=None)
def vector_space(p: int, dim: int) -> VectorSpace:
    return VectorSpace(p, dim)


def rank_mod_p(rows, p: int) -> int:
    A = np.array(rows, dtype=np.int64) % p
    if A.size == 0:
        return 0
    r = 0
    nrows, ncols = A.shape
    for c in range(ncols):
        piv = next((i for i in range(r, nrows) if A[i, c]), None)
        if piv is None:
            continue
        A[[r, piv]] = A[[piv, r]]
        A[r] = (A[r] * pow(int(A[r, c]), -1, p)) % p
        for i in range(nrows):
            if i != r and A[i, c]:
                A[i] = (A[i] - A[i, c] * A[r]) % p
        r += 1
        if r == nrows:
            break
    return r


def inverse_mod_p(A: np.ndarray, p: int) -> np.ndarray:
    n = A.shape[0]
    aug = np.concatenate([np.asarray(A, dtype=np.int64) % p, np.eye(n, dtype=np.int64)], axis=1)
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r, col] % p), None)
        if piv is None:
            raise ValueError("singular matrix")
        aug[[col, piv]] = aug[[piv, col]]
        aug[col] = (aug[col] * pow(int(aug[col, col]), -1, p)) % p
        for r in range(n):
            if r != col and aug[r, col]:
                aug[r] = (aug[r] - aug[r, col] * aug[col]) % p
    return aug[:, n:]


def independent_subset(rows, p: int) -> list[int]:
    """Indices of a greedy maximal linearly independent subset of ``rows``."""
    basis_rows: list[np.ndarray] = []
    pivots: list[int] = []
    chosen = []
    for idx, v in enumerate(rows):
        r = np.asarray(v, dtype=np.int64) % p
        for row, piv in zip(basis_rows, pivots):
            if r[piv]:
                r = (r - r[piv] * row) % p
        nz = np.nonzero(r)[0]
        if len(nz):
            piv = int(nz[0])
            r = (r * pow(int(r[piv]), -1, p)) % p
            basis_rows.append(r)
            pivots.append(piv)
            chosen.append(idx)
    return chosen


class FieldStructure:
    """A field multiplication placed on the points of ``GF(p)^dim`` whose
    addition is the vector addition.

    ``mul_table[x, y]`` is the product of points ``x`` and ``y``; ``one`` is
    the multiplicative identity.
    """

    def __init__(self, space: VectorSpace, mul_table: np.ndarray, one: int):
        self.space = space
        self.mul_table = np.asarray(mul_table, dtype=np.int64)
        self.one = int(one)
        N = space.size
        if self.mul_table.shape != (N, N):
            raise ValueError("multiplication table does not match the space")

    @classmethod
    def from_finite_field(cls, F) -> "FieldStructure":
        return cls(vector_space(F.p, F.e), F.mul_table, 1)

    @property
    def p(self) -> int:
        return self.space.p

    @property
    def order(self) -> int:
        return self.space.size

    @cached_property
    def generator(self) -> int:
        N = self.order
        for g in range(1, N):
            x, k = g, 1
            while x != self.one:
                x = int(self.mul_table[x, g])
                k += 1
                if k > N:
                    break
            if k == N - 1:
                return g
        raise ValueError("no primitive element; not a field")

    @cached_property
    def exp(self) -> np.ndarray:
        out = np.empty(self.order - 1, dtype=np.int64)
        x = self.one
        for i in range(self.order - 1):
            out[i] = x
            x = int(self.mul_table[x, self.generator])
        return out

    @cached_property
    def log(self) -> np.ndarray:
        out = np.full(self.order, -1, dtype=np.int64)
        out[self.exp] = np.arange(self.order - 1)
        return out

    def frobenius_map(self, j: int) -> np.ndarray:
        """Point map ``x -> x^(p^j)``."""
        U = self.order - 1
        k = pow(self.p, j, U) if U > 1 else 0
        out = np.zeros(self.order, dtype=np.int64)
        out[1:] = self.exp[(self.log[1:] * k) % U] if U > 1 else self.exp[0]
        return out

    def singer_cycle(self) -> np.ndarray:
        """Point map of multiplication by the primitive element."""
        return self.mul_table[:, self.generator].copy()

    def is_field(self) -> bool:
        """Exhaustive check of the field axioms against the vector addition."""
        M = self.mul_table
        A = self.space.add_table
        N = self.order
        x = np.arange(N)
        if not (M == M.T).all():
            return False
        if not ((M[self.one] == x).all() and (M[0] == 0).all()):
            return False
        nz = x[1:]
        if (M[np.ix_(nz, nz)] == 0).any():
            return False
        for c in range(N):
            if not (M[A, c] == A[M[:, c][:, None], M[:, c][None, :]]).all():
                return False
        for c in nz:
            if not (M[M[np.ix_(nz, nz)], c] == M[nz[:, None], M[nz, c][None, :]]).all():
                return False
        return True
