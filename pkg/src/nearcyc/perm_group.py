"""Permutation groups and matrix groups over prime fields.

Permutations are tuples of images and act on the right: ``x^g = g[x]`` and
``x^(gh) = h[g[x]]``.  A :class:`PermGroup` keeps a deterministic
Schreier-Sims stabilizer chain for order and membership and can enumerate its
elements when it is small enough.  :class:`MatrixGroup` stores an explicit
list of invertible matrices acting on ``GF(p)^b``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, Sequence

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .linalg import FieldStructure, VectorSpace, vector_space

Perm = tuple

ENUMERATION_BOUND = 10**6
LINEAR_SEARCH_BOUND = 2**10


class GroupError(ValueError):
    pass


# -- permutation primitives --


def identity(n: int) -> Perm:
    return tuple(range(n))


def mul(a: Perm, b: Perm) -> Perm:
    """``a`` then ``b``."""
    return tuple(map(b.__getitem__, a))


def inv(a: Perm) -> Perm:
    out = [0] * len(a)
    for i, x in enumerate(a):
        out[x] = i
    return tuple(out)


def is_identity(a: Perm) -> bool:
    return all(i == x for i, x in enumerate(a))


def as_perm(x) -> Perm:
    return tuple(int(v) for v in x)


def check_perm(a: Sequence[int]) -> None:
    if sorted(a) != list(range(len(a))):
        raise GroupError("not a permutation")


def cycle_perm(n: int, *cycles: Sequence[int]) -> Perm:
    out = list(range(n))
    for c in cycles:
        for i, x in enumerate(c):
            out[x] = c[(i + 1) % len(c)]
    return tuple(out)


# -- stabilizer chain --


class _Level:
    __slots__ = ("point", "gens", "trans", "trans_inv", "done")

    def __init__(self, point: int):
        self.point = point
        self.gens: list[Perm] = []
        self.trans: dict[int, Perm] = {}
        self.trans_inv: dict[int, Perm] = {}
        self.done: set[tuple[int, int]] = set()


class _Chain:
    """Deterministic Schreier-Sims.  Transversal entries, once set, are never
    replaced, so a Schreier generator that sifted to the identity stays
    verified when the chain grows."""

    def __init__(self, degree: int, gens: Iterable[Perm], base_prefix: Sequence[int] = ()):
        self.degree = degree
        self.id = identity(degree)
        self.levels: list[_Level] = []
        for b in base_prefix:
            self._new_level(b)
        gens = [g for g in gens if not is_identity(g)]
        for g in gens:
            if all(g[lv.point] == lv.point for lv in self.levels):
                self._new_level(next(i for i, x in enumerate(g) if x != i))
        for g in gens:
            for lv in self.levels:
                lv.gens.append(g)
                if g[lv.point] != lv.point:
                    break
        for lv in self.levels:
            lv.trans = {lv.point: self.id}
            lv.trans_inv = {lv.point: self.id}
            self._extend_orbit(lv)
        self._complete()

    def _new_level(self, point: int) -> _Level:
        lv = _Level(point)
        lv.trans = {point: self.id}
        lv.trans_inv = {point: self.id}
        self.levels.append(lv)
        return lv

    @staticmethod
    def _extend_orbit(lv: _Level) -> None:
        queue = list(lv.trans)
        for x in queue:
            ux = lv.trans[x]
            for g in lv.gens:
                y = g[x]
                if y not in lv.trans:
                    u = mul(ux, g)
                    lv.trans[y] = u
                    lv.trans_inv[y] = inv(u)
                    queue.append(y)

    def sift(self, g: Perm, start: int = 0) -> tuple[Perm, int]:
        for i in range(start, len(self.levels)):
            lv = self.levels[i]
            b = g[lv.point]
            if b not in lv.trans:
                return g, i
            if b != lv.point:
                g = mul(g, lv.trans_inv[b])
        return g, len(self.levels)

    def _complete(self) -> None:
        i = len(self.levels) - 1
        while i >= 0:
            lv = self.levels[i]
            new_gen = None
            for beta in list(lv.trans):
                for si, s in enumerate(lv.gens):
                    if (beta, si) in lv.done:
                        continue
                    h = mul(mul(lv.trans[beta], s), lv.trans_inv[s[beta]])
                    h, j = self.sift(h, i + 1)
                    if not is_identity(h):
                        new_gen = (h, j)
                        break
                    lv.done.add((beta, si))
                if new_gen:
                    break
            if new_gen is None:
                i -= 1
                continue
            h, j = new_gen
            if j == len(self.levels):
                self._new_level(next(x for x, y in enumerate(h) if x != y))
            for lvl in range(i + 1, j + 1):
                self.levels[lvl].gens.append(h)
                self._extend_orbit(self.levels[lvl])
            i = j

    @property
    def order(self) -> int:
        return math.prod(len(lv.trans) for lv in self.levels)

    def contains(self, g: Perm) -> bool:
        h, j = self.sift(g)
        return j == len(self.levels) and is_identity(h)

    def elements(self) -> Iterator[Perm]:
        transversals = [list(lv.trans.values()) for lv in reversed(self.levels)]
        for combo in itertools.product(*transversals):
            g = self.id
            for u in combo:
                g = mul(g, u)
            yield g


# -- groups --


class PermGroup:
    def __init__(self, degree: int, gens: Iterable[Sequence[int]] = (), *, symmetric: bool = False):
        self.degree = degree
        gens = [as_perm(g) for g in gens]
        for g in gens:
            if len(g) != degree:
                raise GroupError(f"generator of degree {len(g)} in a group of degree {degree}")
            check_perm(g)
        self.generators = [g for g in gens if not is_identity(g)]
        self.is_full_symmetric = symmetric
        if symmetric and degree > 1 and not self.generators:
            self.generators = [cycle_perm(degree, (0, 1)), cycle_perm(degree, tuple(range(degree)))]

    @classmethod
    def symmetric(cls, n: int) -> "PermGroup":
        return cls(n, symmetric=True)

    def __repr__(self) -> str:
        kind = "Sym" if self.is_full_symmetric else "PermGroup"
        return f"<{kind} degree={self.degree} order={self.order}>"

    @cached_property
    def chain(self) -> _Chain:
        if self.is_full_symmetric and self.degree > 12:
            raise GroupError("stabilizer chain of a large symmetric group not built")
        return _Chain(self.degree, self.generators)

    @cached_property
    def order(self) -> int:
        if self.is_full_symmetric:
            return math.factorial(self.degree)
        return self.chain.order

    def __len__(self) -> int:
        return self.order

    def contains(self, g: Sequence[int]) -> bool:
        g = as_perm(g)
        if len(g) != self.degree:
            return False
        if self.is_full_symmetric:
            return sorted(g) == list(range(self.degree))
        return self.chain.contains(g)

    __contains__ = contains

    def elements(self, bound: int = ENUMERATION_BOUND) -> list[Perm]:
        if self.order > bound:
            raise GroupError(f"group of order {self.order} exceeds enumeration bound {bound}")
        return sorted(self.chain.elements())

    @cached_property
    def element_set(self) -> frozenset:
        return frozenset(self.elements())

    def is_subgroup_of(self, other: "PermGroup") -> bool:
        return all(other.contains(g) for g in self.generators)

    def equals(self, other: "PermGroup") -> bool:
        return self.degree == other.degree and self.order == other.order and self.is_subgroup_of(other)

    def orbits(self) -> list[list[int]]:
        return orbits(self.degree, self.generators)

    def is_transitive(self) -> bool:
        return len(self.orbits()) == 1

    def stabilizer(self, point: int) -> "PermGroup":
        if self.is_full_symmetric:
            raise GroupError("stabilizers of the symmetric marker are not built")
        ch = _Chain(self.degree, self.generators, base_prefix=(point,))
        gens = ch.levels[1].gens if len(ch.levels) > 1 else []
        return PermGroup(self.degree, gens)

    def is_normal_in(self, other: "PermGroup") -> bool:
        return all(
            self.contains(mul(mul(inv(s), h), s)) for h in self.generators for s in other.generators
        )

    def normal_closure_of(self, g: Perm) -> "PermGroup":
        """Smallest normal subgroup containing ``g``."""
        gens = [g] if not is_identity(g) else []
        H = PermGroup(self.degree, gens)
        changed = True
        while changed:
            changed = False
            for h in list(H.generators):
                for s in self.generators:
                    c = mul(mul(inv(s), h), s)
                    if not H.contains(c):
                        H = PermGroup(self.degree, H.generators + [c])
                        changed = True
        return H

    def to_json(self) -> dict:
        return {"degree": self.degree, "order": self.order, "generators": [list(g) for g in self.generators]}


def group_from_generators(gens: Sequence[Sequence[int]], degree: int | None = None) -> PermGroup:
    gens = list(gens)
    if degree is None:
        if not gens:
            raise GroupError("degree required for an empty generator list")
        degree = len(gens[0])
    if any(len(g) != degree for g in gens):
        raise GroupError("generators have different degrees")
    return PermGroup(degree, gens)


def orbits(degree: int, gens: Iterable[Sequence[int]]) -> list[list[int]]:
    parent = list(range(degree))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for g in gens:
        for x, y in enumerate(g):
            a, b = find(x), find(y)
            if a != b:
                parent[max(a, b)] = min(a, b)
    groups: dict[int, list[int]] = {}
    for x in range(degree):
        groups.setdefault(find(x), []).append(x)
    return sorted(groups.values())


def two_orbits(degree: int, gens: Iterable[Sequence[int]]) -> np.ndarray:
    """Color matrix of the orbits on ordered pairs; classes are numbered by
    their lexicographically smallest pair."""
    N = degree
    idx = np.arange(N * N)
    rows, cols = [], []
    for g in gens:
        g = np.asarray(g)
        rows.append(idx)
        cols.append((g[:, None] * N + g[None, :]).ravel())
    if rows:
        r = np.concatenate(rows)
        c = np.concatenate(cols)
    else:
        r = c = np.zeros(0, dtype=np.int64)
    graph = coo_matrix((np.ones(len(r), dtype=np.int8), (r, c)), shape=(N * N, N * N))
    _, labels = connected_components(graph, directed=True, connection="weak")
    return canonical_colors(labels.reshape(N, N))


def canonical_colors(colors: np.ndarray) -> np.ndarray:
    """Relabel classes 0, 1, ... in order of their smallest pair (row-major)."""
    flat = np.asarray(colors).ravel()
    _, first = np.unique(flat, return_index=True)
    order = np.argsort(first)
    relabel = np.empty(flat.max() + 1, dtype=np.int64)
    relabel[np.unique(flat)[order]] = np.arange(len(order))
    return relabel[flat].reshape(colors.shape)


# -- groups of special shapes --


def translation_generators(space: VectorSpace) -> list[Perm]:
    return [as_perm(space.translation(b)) for b in space.basis()]


def translation_group(space: VectorSpace) -> PermGroup:
    return PermGroup(space.size, translation_generators(space))


def affine_group(nf, K: Sequence[int]) -> PermGroup:
    """``{x -> x o b + c : b in K, c in V}`` on the points of the near-field."""
    K = sorted(int(k) for k in K)
    check_subgroup(nf, K)
    space = vector_space(nf.p, nf.dimension)
    x = np.arange(nf.order)
    gens = translation_generators(space)
    for b in subgroup_generators(nf, K):
        gens.append(as_perm(nf.mul(x, b)))
    return PermGroup(nf.order, gens)


def check_subgroup(nf, K: Sequence[int]) -> None:
    Ks = set(K)
    if not Ks or 1 not in Ks or 0 in Ks:
        raise GroupError("K must be a nonempty set of nonzero elements containing 1")
    arr = np.array(sorted(Ks))
    prods = nf.mul(arr[:, None], arr[None, :])
    if not set(np.unique(prods).tolist()) <= Ks:
        raise GroupError("K is not closed under the near-field product")


def subgroup_generators(nf, K: Sequence[int]) -> list[int]:
    """Greedy generating set of the subgroup K (smallest elements first)."""
    gens: list[int] = []
    span = {1}
    for k in sorted(K):
        if k in span:
            continue
        gens.append(k)
        span = {1}
        frontier = [1]
        for h in frontier:
            for g in gens:
                y = nf.mul(h, g)
                if y not in span:
                    span.add(y)
                    frontier.append(y)
    return gens


# -- matrix groups --


@dataclass(eq=False)
class MatrixGroup:
    """An explicit list of invertible matrices over GF(p), acting on column
    vectors of ``GF(p)^dim``."""

    p: int
    dim: int
    matrices: list[np.ndarray]

    @property
    def space(self) -> VectorSpace:
        return vector_space(self.p, self.dim)

    @property
    def order(self) -> int:
        return len(self.matrices)

    def __len__(self) -> int:
        return len(self.matrices)

    @classmethod
    def from_perms(cls, space: VectorSpace, perms: Iterable[Sequence[int]]) -> "MatrixGroup":
        mats = [space.perm_to_matrix(g) for g in perms]
        return cls(space.p, space.dim, mats)

    @cached_property
    def perms(self) -> list[Perm]:
        sp = self.space
        return [as_perm(sp.matrix_to_perm(M)) for M in self.matrices]

    @cached_property
    def perm_set(self) -> frozenset:
        return frozenset(self.perms)

    def as_perm_group(self) -> PermGroup:
        return PermGroup(self.space.size, self.perms)

    def orbits(self) -> list[list[int]]:
        return orbits(self.space.size, self.perms)

    def is_group(self) -> bool:
        S = self.perm_set
        if len(S) != len(self.perms):
            return False
        return all(mul(a, b) in S for a in self.perms for b in self.perms)

    def is_abelian(self) -> bool:
        P = self.perms
        return all(mul(a, b) == mul(b, a) for a, b in itertools.combinations(P, 2))

    def same_elements(self, other: "MatrixGroup") -> bool:
        return (self.p, self.dim) == (other.p, other.dim) and self.perm_set == other.perm_set

    def conjugate(self, g: Perm) -> "MatrixGroup":
        """``g^-1 H g`` for a point map ``g`` of a linear map."""
        gi = inv(g)
        return MatrixGroup.from_perms(self.space, [mul(mul(gi, h), g) for h in self.perms])

    def matrix_strings(self) -> list[str]:
        return ["".join(str(int(v)) for v in M.ravel()) for M in self.matrices]


def general_linear_group(dim: int, p: int) -> Iterator[np.ndarray]:
    """Every invertible ``dim x dim`` matrix over GF(p), built column by column
    from vectors outside the span of the previous columns."""
    space = vector_space(p, dim)
    digits = space.digits

    def rec(cols: list[int], span: np.ndarray):
        if len(cols) == dim:
            yield digits[cols].T.copy()
            return
        in_span = np.zeros(space.size, dtype=bool)
        in_span[span] = True
        for v in range(1, space.size):
            if in_span[v]:
                continue
            new_span = np.unique(
                np.concatenate([space.add_table[span, space.encode(c * digits[v])] for c in range(p)])
            )
            yield from rec(cols + [v], new_span)

    yield from rec([], np.array([0]))


def gl_order(dim: int, p: int) -> int:
    return math.prod(p**dim - p**i for i in range(dim))


def orbit_labels(space: VectorSpace, perms: Iterable[Sequence[int]]) -> np.ndarray:
    lab = np.empty(space.size, dtype=np.int64)
    for i, orb in enumerate(orbits(space.size, perms)):
        lab[orb] = i
    return lab


def linear_maps_preserving(
    space: VectorSpace,
    src_labels: np.ndarray,
    dst_labels: np.ndarray | None = None,
    *,
    label_map: bool = False,
    first_only: bool = False,
) -> list[Perm]:
    """Linear bijections ``h`` of ``space`` that respect a point partition.

    With ``label_map=False`` the condition is ``dst_labels[h(x)] ==
    src_labels[x]`` for every point.  With ``label_map=True`` the source
    classes only have to go onto destination classes through some bijection
    of labels (recorded incrementally during the search).

    The images of the basis vectors are chosen one at a time; after each
    choice the map is known on the span of the basis vectors fixed so far and
    every point of that span is checked immediately.
    """
    if dst_labels is None:
        dst_labels = src_labels
    N, p, dim = space.size, space.p, space.dim
    A = space.add_table
    scal = [space.encode(c * space.digits) for c in range(p)]
    dst_sizes = np.bincount(dst_labels)
    src_sizes = np.bincount(src_labels)
    results: list[Perm] = []

    def rec(level: int, img: np.ndarray, lmap: dict[int, int]) -> bool:
        if level == dim:
            results.append(as_perm(img))
            return first_only
        e = p**level
        span_pts = np.arange(e)  # points of span(e_0..e_{level-1}) are 0..p^level-1
        for v in range(1, N):
            if label_map:
                if src_sizes[src_labels[e]] != dst_sizes[dst_labels[v]]:
                    continue
            elif dst_labels[v] != src_labels[e]:
                continue
            new_img = [img]
            ok = True
            lm = dict(lmap)
            used = set(lm.values())
            for c in range(1, p):
                block = A[img, scal[c][v]]
                src = span_pts + c * e
                if label_map:
                    s = src_labels[src]
                    d = dst_labels[block]
                    for a, b in zip(s.tolist(), d.tolist()):
                        if a in lm:
                            if lm[a] != b:
                                ok = False
                                break
                        else:
                            if b in used or src_sizes[a] != dst_sizes[b]:
                                ok = False
                                break
                            lm[a] = b
                            used.add(b)
                    if not ok:
                        break
                elif (dst_labels[block] != src_labels[src]).any():
                    ok = False
                    break
                new_img.append(block)
            if not ok:
                continue
            if rec(level + 1, np.concatenate(new_img), lm):
                return True
        return False

    base_map = {int(src_labels[0]): int(dst_labels[0])} if label_map else {}
    rec(0, np.array([0]), base_map)
    return results


def linear_closure(G: MatrixGroup, bound: int = LINEAR_SEARCH_BOUND) -> MatrixGroup:
    """Largest subgroup of GL(V) with the same orbits on V as ``G``."""
    space = G.space
    if space.size > bound:
        raise GroupError(f"|V| = {space.size} exceeds the linear-closure bound {bound}")
    labels = orbit_labels(space, G.perms)
    perms = linear_maps_preserving(space, labels)
    return MatrixGroup.from_perms(space, sorted(perms))


def linear_closure_bruteforce(G: MatrixGroup) -> MatrixGroup:
    """Filter all of GL(V) by orbit preservation (small spaces only)."""
    space = G.space
    labels = orbit_labels(space, G.perms)
    keep = []
    for M in general_linear_group(space.dim, space.p):
        h = space.matrix_to_perm(M)
        if (labels[h] == labels).all():
            keep.append(as_perm(h))
    return MatrixGroup.from_perms(space, sorted(keep))


# -- structure --


def conjugacy_classes(G: PermGroup, elems: Iterable[Perm] | None = None) -> list[list[Perm]]:
    if elems is None:
        elems = G.elements()
    seen: set = set()
    classes = []
    gens = [(s, inv(s)) for s in G.generators]
    for g in elems:
        if g in seen:
            continue
        cls = [g]
        seen.add(g)
        for h in cls:
            for s, si in gens:
                c = mul(mul(si, h), s)
                if c not in seen:
                    seen.add(c)
                    cls.append(c)
        classes.append(cls)
    return classes


def perm_order(g: Perm) -> int:
    n = len(g)
    seen = [False] * n
    order = 1
    for i in range(n):
        if not seen[i]:
            k, x = 0, i
            while not seen[x]:
                seen[x] = True
                x = g[x]
                k += 1
            order = order * k // math.gcd(order, k)
    return order


def minimal_normal_subgroups(G: PermGroup, bound: int = ENUMERATION_BOUND) -> list[PermGroup]:
    """Minimal elements among the normal closures of single elements.

    Only elements of prime order are needed: each minimal normal subgroup is
    the normal closure of any of its nonidentity elements and contains an
    element of prime order.
    """
    if G.order > bound:
        raise GroupError(f"group of order {G.order} exceeds bound {bound}")
    if G.order == 1:
        return []
    from .numtheory import is_prime

    elems = [g for g in G.elements() if is_prime(perm_order(g))]
    closures: list[PermGroup] = []
    for cls in conjugacy_classes(G, elems):
        N = G.normal_closure_of(cls[0])
        if not any(M.equals(N) for M in closures):
            closures.append(N)
    closures.sort(key=lambda H: H.order)
    minimal = []
    for N in closures:
        if not any(M.order < N.order and M.is_subgroup_of(N) for M in closures):
            minimal.append(N)
    return minimal


def socle(G: PermGroup) -> PermGroup:
    gens = [g for M in minimal_normal_subgroups(G) for g in M.generators]
    return PermGroup(G.degree, gens)


def is_frobenius(G: PermGroup, bound: int = ENUMERATION_BOUND) -> tuple[bool, PermGroup | None]:
    """Whether only the identity fixes two points; if so also the kernel
    (identity plus fixed-point-free elements), checked to be a normal
    subgroup of order equal to the degree."""
    if not G.is_transitive():
        raise GroupError("is_frobenius needs a transitive group")
    kernel = []
    for g in G.elements(bound):
        fixed = sum(1 for i, x in enumerate(g) if i == x)
        if fixed == G.degree:
            kernel.append(g)
        elif fixed == 0:
            kernel.append(g)
        elif fixed >= 2:
            return False, None
    K = PermGroup(G.degree, [])
    for g in kernel:
        if not K.contains(g):
            K = PermGroup(G.degree, K.generators + [g])
    if K.order != len(kernel) or K.order != G.degree or not K.is_normal_in(G):
        raise GroupError("Frobenius kernel check failed")
    return True, K


def is_semilinear(G: MatrixGroup | PermGroup | Iterable[Sequence[int]], F: FieldStructure) -> bool:
    """Whether every element is ``x -> c * x^(p^j)`` for the field ``F`` on V."""
    if isinstance(G, MatrixGroup):
        if (G.p, G.dim) != (F.space.p, F.space.dim):
            raise GroupError("field structure does not live on the group's space")
        perms = G.perms
    elif isinstance(G, PermGroup):
        perms = G.elements()
    else:
        perms = [as_perm(g) for g in G]
    if any(len(g) != F.order for g in perms):
        raise GroupError("field structure does not live on the group's space")
    frobs = [F.frobenius_map(j) for j in range(F.space.dim)]
    M = F.mul_table
    for g in perms:
        g = np.asarray(g)
        if g[0] != 0 or not F.space.is_additive(g):
            return False
        c = int(g[F.one])
        if c == 0:
            return False
        if not any((M[c, fr] == g).all() for fr in frobs):
            return False
    return True


def normalizes(G: MatrixGroup | Iterable[Sequence[int]], s: Sequence[int]) -> bool:
    """Whether the cyclic group generated by ``s`` is normalized by every element."""
    s = as_perm(s)
    cyc = {s}
    x = s
    while not is_identity(x):
        x = mul(x, s)
        cyc.add(x)
    perms = G.perms if isinstance(G, MatrixGroup) else [as_perm(g) for g in G]
    return all(mul(mul(inv(g), s), g) in cyc for g in perms)
