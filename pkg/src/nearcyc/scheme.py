"""Association schemes, and the translation schemes whose nonzero classes are
the sets ``{(x, y) : y - x in a o K}`` for the cosets ``a o K`` of a subgroup
``K`` of the multiplicative group of a Dickson near-field.

Class 0 is always the diagonal.  Classes are numbered by their smallest pair
in row-major order, so the color matrix of a scheme is canonical.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from . import search
from .linalg import FieldStructure, VectorSpace, independent_subset, rank_mod_p, vector_space
from .nearfield import DicksonNearField
from .perm_group import (
    GroupError,
    MatrixGroup,
    PermGroup,
    as_perm,
    canonical_colors,
    check_subgroup,
    linear_closure,
    linear_maps_preserving,
    orbit_labels,
    translation_generators,
)

AXIOM_SCAN_BOUND = 2**10
UNION_ORACLE_RANK = 16
SUBSPACE_SCAN_BOUND = 3**4


class SchemeError(ValueError):
    pass


@dataclass(frozen=True)
class AxiomWitness:
    """A pair ``(u, w)`` in class ``T`` whose count for ``(R, S)`` differs
    from the count seen for an earlier pair of ``T``."""

    kind: str
    u: int
    w: int
    R: int = -1
    S: int = -1
    T: int = -1
    found: int = -1
    expected: int = -1

    def __str__(self) -> str:
        if self.kind != "intersection":
            return f"{self.kind} violated at ({self.u}, {self.w})"
        return (
            f"p[{self.T}][{self.R},{self.S}] is {self.found} at ({self.u}, {self.w}),"
            f" expected {self.expected}"
        )


@dataclass(frozen=True)
class AxiomCheck:
    ok: bool
    tensor: np.ndarray | None = None
    witness: AxiomWitness | None = None

    def __bool__(self) -> bool:
        return self.ok


class AssociationScheme:
    """A partition of ``V x V`` given by a color matrix."""

    def __init__(self, colors, canonical: bool = True):
        C = np.asarray(colors, dtype=np.int64)
        if C.ndim != 2 or C.shape[0] != C.shape[1]:
            raise SchemeError("color matrix must be square")
        self.colors = canonical_colors(C) if canonical else C
        self.colors.setflags(write=False)
        self._tensor: np.ndarray | None = None

    @property
    def N(self) -> int:
        return self.colors.shape[0]

    @cached_property
    def rank(self) -> int:
        return int(self.colors.max()) + 1

    @property
    def class_count(self) -> int:
        return self.rank

    @cached_property
    def class_sizes(self) -> np.ndarray:
        return np.bincount(self.colors.ravel(), minlength=self.rank)

    @cached_property
    def valencies(self) -> np.ndarray:
        return self.class_sizes // self.N

    def relation(self, c: int) -> np.ndarray:
        return self.colors == c

    @cached_property
    def transpose_map(self) -> np.ndarray:
        """``t[c]`` is the class of the transposed pairs of class ``c``."""
        t = np.full(self.rank, -1, dtype=np.int64)
        t[self.colors.ravel()] = self.colors.T.ravel()
        return t

    @property
    def intersection_tensor(self) -> np.ndarray:
        if self._tensor is None:
            res = verify_scheme_axioms(self)
            if not res.ok:
                raise SchemeError(f"not an association scheme: {res.witness}")
        return self._tensor

    def is_trivial(self) -> bool:
        return self.rank == 2

    def preserves(self, g: Sequence[int]) -> bool:
        g = np.asarray(g)
        return bool((self.colors[g[:, None], g[None, :]] == self.colors).all())

    def to_dict(self, with_tensor: bool = True) -> dict:
        out = {
            "N": self.N,
            "rank": self.rank,
            "valencies": [int(v) for v in self.valencies],
            "colors": [int(v) for v in self.colors.ravel()],
        }
        if with_tensor:
            out["intersection_tensor"] = self.intersection_tensor.tolist()
        return out


def verify_scheme_axioms(S: AssociationScheme, bound: int = AXIOM_SCAN_BOUND) -> AxiomCheck:
    """Scan every pair ``(u, w)`` and count, for each ``(R, S)``, the points
    ``v`` with ``(u, v) in R`` and ``(v, w) in S``.

    Returns the tensor ``p[T, R, S]`` when the counts depend only on the class
    ``T`` of ``(u, w)``, otherwise the first offending pair.  On success the
    tensor is also cached on ``S``.
    """
    N, r = S.N, S.rank
    if N > bound:
        raise SchemeError(f"{N} points exceed the axiom-scan bound {bound}")
    C = S.colors
    diag = np.diag(C)
    if (diag != 0).any():
        u = int(np.flatnonzero(diag != 0)[0])
        return AxiomCheck(False, witness=AxiomWitness("diagonal", u, u))
    off = (C == 0) & ~np.eye(N, dtype=bool)
    if off.any():
        u, w = (int(v) for v in np.argwhere(off)[0])
        return AxiomCheck(False, witness=AxiomWitness("diagonal", u, w))
    # transpose closure: each class must map onto a single class
    t = S.transpose_map
    bad = C.T != t[C]
    if bad.any():
        u, w = (int(v) for v in np.argwhere(bad)[0])
        return AxiomCheck(False, witness=AxiomWitness("transpose", u, w))

    rr = r * r
    ref = np.zeros((r, rr), dtype=np.int64)
    have = np.zeros(r, dtype=bool)
    w_idx = np.arange(N)[:, None] * rr
    for u in range(N):
        # key (w, R, S) for v ranging over the points: R = C[u, v], S = C[v, w]
        keys = (C[u][:, None] * r + C) .T + w_idx  # rows w, columns v
        counts = np.bincount(keys.ravel(), minlength=N * rr).reshape(N, rr)
        Ts = C[u]
        for T in np.unique(Ts[~have[Ts]]):
            w = int(np.flatnonzero(Ts == T)[0])
            ref[T] = counts[w]
            have[T] = True
        mismatch = counts != ref[Ts]
        if mismatch.any():
            w, k = (int(v) for v in np.argwhere(mismatch)[0])
            T = int(Ts[w])
            return AxiomCheck(
                False,
                witness=AxiomWitness(
                    "intersection", u, w, k // r, k % r, T, int(counts[w, k]), int(ref[T, k])
                ),
            )
    tensor = ref.reshape(r, r, r)
    S._tensor = tensor
    return AxiomCheck(True, tensor=tensor)


def is_primitive(S: AssociationScheme) -> bool:
    """Every nonzero class is a connected graph."""
    C = S.colors
    for c in range(1, S.rank):
        graph = csr_matrix(C == c)
        n, _ = connected_components(graph, directed=True, connection="weak")
        if n > 1:
            return False
    return True


def is_primitive_by_unions(S: AssociationScheme, max_rank: int = UNION_ORACLE_RANK) -> bool:
    """Search all unions of classes containing class 0 for a nontrivial
    equivalence relation, using the intersection numbers."""
    r = S.rank
    if r > max_rank:
        raise SchemeError(f"rank {r} exceeds the union-enumeration bound {max_rank}")
    P = S.intersection_tensor
    t = S.transpose_map
    # support[R][S] = set of T with p^T_{RS} > 0
    support = P.transpose(1, 2, 0) > 0
    nonzero = range(1, r)
    for size in range(1, r - 1):
        for subset in itertools.combinations(nonzero, size):
            E = np.zeros(r, dtype=bool)
            E[0] = True
            E[list(subset)] = True
            if not E[t[E]].all():
                continue
            idx = np.flatnonzero(E)
            reach = support[np.ix_(idx, idx)].any(axis=(0, 1))
            if not (reach & ~E).any():
                return False
    return True


@dataclass(eq=False)
class CyclotomicScheme:
    scheme: AssociationScheme
    nearfield: DicksonNearField
    K: tuple[int, ...]
    coset_reps: tuple[int, ...]
    class_of: np.ndarray = field(repr=False)

    @property
    def valency(self) -> int:
        return len(self.K)

    @property
    def N(self) -> int:
        return self.scheme.N

    @property
    def rank(self) -> int:
        return self.scheme.rank

    @property
    def colors(self) -> np.ndarray:
        return self.scheme.colors

    @property
    def space(self) -> VectorSpace:
        return vector_space(self.nearfield.p, self.nearfield.dimension)

    def is_trivial(self) -> bool:
        return self.rank == 2

    def label(self) -> str:
        return f"{self.nearfield.label()}/K{len(self.K)}"

    def to_dict(self, with_tensor: bool = True) -> dict:
        nf = self.nearfield
        out = {
            "q": nf.q,
            "n": nf.n,
            "p": nf.p,
            "d": nf.pair.d,
            "variant": nf.variant,
            "K": list(self.K),
            "valency": self.valency,
            "coset_reps": list(self.coset_reps),
        }
        out.update(self.scheme.to_dict(with_tensor))
        return out

    def to_json(self, with_tensor: bool = True) -> str:
        return json.dumps(self.to_dict(with_tensor), sort_keys=True)


def build_cyclotomic(nf: DicksonNearField, K: Sequence[int]) -> CyclotomicScheme:
    """Color ``(x, y)`` by the coset ``a o K`` containing ``y - x``."""
    K = tuple(sorted(int(k) for k in K))
    try:
        check_subgroup(nf, K)
    except GroupError as exc:
        raise SchemeError(str(exc)) from None
    Q = nf.order
    cls = np.zeros(Q, dtype=np.int64)
    karr = np.array(K)
    reps = []
    # scanning elements upward numbers cosets by their smallest element
    for a in range(1, Q):
        if cls[a]:
            continue
        reps.append(a)
        cls[nf.mul(a, karr)] = len(reps)
    space = vector_space(nf.p, nf.dimension)
    colors = cls[space.sub_table]
    S = AssociationScheme(colors, canonical=False)
    return CyclotomicScheme(scheme=S, nearfield=nf, K=K, coset_reps=tuple(reps), class_of=cls)


def base_group(nf: DicksonNearField, K: Sequence[int]) -> MatrixGroup:
    """Matrices of ``x -> x o b`` for ``b`` in ``K``."""
    K = sorted(int(k) for k in K)
    check_subgroup(nf, K)
    space = vector_space(nf.p, nf.dimension)
    x = np.arange(nf.order)
    return MatrixGroup.from_perms(space, [as_perm(nf.mul(x, b)) for b in K])


def _orbit_of(v: int, perms: list) -> set[int]:
    return {g[v] for g in perms}


def is_irreducible(G: MatrixGroup) -> bool:
    """No proper nonzero invariant subspace.

    An invariant subspace containing ``v`` contains the span of the orbit of
    ``v``, so it suffices that each orbit on nonzero vectors spans ``V``.
    ``G`` must be given by all its elements.
    """
    sp = G.space
    perms = G.perms
    seen: set[int] = set()
    for v in range(1, sp.size):
        if v in seen:
            continue
        orb = _orbit_of(v, perms)
        seen |= orb
        if rank_mod_p(sp.digits[sorted(orb)], sp.p) < sp.dim:
            return False
    return True


def invariant_subspaces(G: MatrixGroup, bound: int = SUBSPACE_SCAN_BOUND) -> list[frozenset]:
    """Every proper nonzero invariant subspace, as a set of points, by
    enumerating all subspaces as spans (small spaces only)."""
    sp = G.space
    if sp.size > bound:
        raise SchemeError(f"subspace enumeration limited to {bound} points")
    A = sp.add_table
    p = sp.p
    scal = [sp.encode(c * sp.digits) for c in range(p)]

    def span_add(S: frozenset, v: int) -> frozenset:
        pts = set(S)
        for c in range(1, p):
            cv = int(scal[c][v])
            pts |= {int(A[s, cv]) for s in S}
        return frozenset(pts)

    subspaces = {frozenset({0})}
    frontier = [frozenset({0})]
    while frontier:
        nxt = []
        for S in frontier:
            for v in range(1, sp.size):
                if v in S:
                    continue
                T = span_add(S, v)
                if T not in subspaces:
                    subspaces.add(T)
                    nxt.append(T)
        frontier = nxt
    perms = G.perms
    out = []
    for S in sorted(subspaces, key=lambda s: (len(s), sorted(s))):
        if len(S) in (1, sp.size):
            continue
        if all({g[x] for x in S} == S for g in perms):
            out.append(S)
    return out


@dataclass(eq=False)
class FieldReduction:
    """A field multiplication on the points plus a subgroup ``K'`` of its
    units whose translation scheme has the same color matrix."""

    field: FieldStructure
    subgroup: tuple[int, ...]
    colors: np.ndarray = field(repr=False)
    identical: bool = False


def field_scheme_colors(F: FieldStructure, K: Sequence[int]) -> np.ndarray:
    """Canonical color matrix of the cosets of ``K`` in the units of ``F``."""
    N = F.order
    cls = np.zeros(N, dtype=np.int64)
    karr = np.array(sorted(K))
    c = 0
    for a in range(1, N):
        if cls[a]:
            continue
        c += 1
        cls[F.mul_table[a, karr]] = c
    return canonical_colors(cls[F.space.sub_table])


def span_field(sp: VectorSpace, matrices: Sequence[np.ndarray], u: int = 1) -> FieldStructure:
    """Field structure on the points from the linear span of commuting
    matrices: the span element ``f`` is identified with the point ``f(u)``.

    Raises if the span does not have ``|V|`` elements acting regularly, or if
    the resulting multiplication fails the field axioms.
    """
    p, b = sp.p, sp.dim
    flat = [np.asarray(M).ravel() for M in matrices]
    basis = [np.asarray(matrices[i]) for i in independent_subset(flat, p)]
    if len(basis) != b:
        raise SchemeError("span not a field")
    mul_table = np.zeros((sp.size, sp.size), dtype=np.int64)
    seen = np.zeros(sp.size, dtype=bool)
    for coeffs in itertools.product(range(p), repeat=b):
        M = sum(c * B for c, B in zip(coeffs, basis)) % p
        perm = sp.matrix_to_perm(M)
        x = int(perm[u])
        if seen[x]:
            raise SchemeError("span not a field")
        seen[x] = True
        mul_table[x] = perm
    F = FieldStructure(sp, mul_table, one=u)
    if not F.is_field():
        raise SchemeError("span not a field")
    return F


def abelian_field_reduction(cs: CyclotomicScheme) -> FieldReduction:
    """Rebuild a primitive scheme with abelian base group over a field.

    The linear span of the base group is a commutative algebra of matrices;
    each of its elements ``f`` is identified with the point ``f(u)`` for the
    base point ``u = 1``.  The product of points then comes from matrix
    products, and the image of the base group is the subgroup ``K'``.
    """
    if not is_primitive(cs.scheme):
        raise SchemeError("not primitive")
    G = base_group(cs.nearfield, cs.K)
    if not G.is_abelian():
        raise SchemeError("not abelian")
    F = span_field(G.space, G.matrices)
    u = F.one
    Kp = tuple(sorted(int(g[u]) for g in G.perms))
    colors = field_scheme_colors(F, Kp)
    return FieldReduction(F, Kp, colors, bool(np.array_equal(colors, cs.colors)))


# -- automorphisms --


def scheme_linear_closure(cs: CyclotomicScheme) -> MatrixGroup:
    return linear_closure(base_group(cs.nearfield, cs.K))


def _generating_subset(degree: int, perms: list, start: list | None = None) -> PermGroup:
    H = PermGroup(degree, start or [])
    for g in perms:
        if not H.contains(g):
            H = PermGroup(degree, H.generators + [g])
    return H


def aut_group(cs: CyclotomicScheme) -> PermGroup:
    """Translations composed with the linear closure of the base group; the
    full symmetric group marker for the trivial scheme."""
    N = cs.N
    if cs.is_trivial():
        return PermGroup.symmetric(N)
    Gbar = scheme_linear_closure(cs)
    T = translation_generators(cs.space)
    A = _generating_subset(N, Gbar.perms, T)
    if A.order != N * Gbar.order:
        raise SchemeError("translations and linear closure do not multiply to a group")
    if not all(cs.scheme.preserves(g) for g in A.generators):
        raise SchemeError("a generator fails to preserve the color classes")
    return A


def aut_bruteforce(S: AssociationScheme, cross_check: bool = True) -> PermGroup:
    """All permutations preserving every color class, by backtracking with
    partition refinement (and also by scanning ``Sym(N)`` when ``N <= 9``).

    A rank-2 scheme above the full-scan size is answered with the symmetric
    group marker directly, since its two classes are preserved by anything.
    """
    N = S.N
    if S.rank <= 2 and N > search.FULL_SCAN_BOUND:
        return PermGroup.symmetric(N)
    res = search.automorphism_group(S.colors)
    G = PermGroup(N, res.generators)
    if G.order != res.order:
        raise SchemeError("backtracking orbit count disagrees with the generated group")
    if cross_check and N <= search.FULL_SCAN_BOUND:
        full = {tuple(int(v) for v in g) for g in search.automorphisms_full_scan(S.colors)}
        # G lies inside the scanned set, so equal sizes mean equal groups
        if len(full) != G.order or not all(g in full for g in G.generators):
            raise SchemeError("backtracking and full scan disagree")
    return G


def zero_stabilizer_is_linear(G: PermGroup, space: VectorSpace) -> bool:
    """Every element fixing 0 is additive (hence linear over the prime field)."""
    for g in G.stabilizer(0).elements():
        if not space.is_additive(g):
            return False
    return True


# -- isomorphism --


@dataclass(frozen=True)
class IsoResult:
    isomorphic: bool
    witness: tuple | None = None
    class_map: dict | None = None
    method: str = ""

    def __bool__(self) -> bool:
        return self.isomorphic


def class_renaming(C1: np.ndarray, C2: np.ndarray, f: Sequence[int]) -> dict[int, int] | None:
    """The class bijection induced by the point map ``f``, if any."""
    f = np.asarray(f)
    img = C2[f[:, None], f[None, :]]
    ren: dict[int, int] = {}
    for a, b in zip(C1.ravel().tolist(), img.ravel().tolist()):
        if ren.setdefault(a, b) != b:
            return None
    if len(set(ren.values())) != len(ren):
        return None
    return ren


def are_isomorphic(c1: CyclotomicScheme, c2: CyclotomicScheme) -> IsoResult:
    """Search GL(V) for a linear map carrying the orbits of the linear closure
    of one base group onto those of the other; such a map conjugates the
    closures and is then checked to map classes onto classes."""
    if c1.N != c2.N or c1.space != c2.space:
        return IsoResult(False, method="size")
    N = c1.N
    if c1.is_trivial() or c2.is_trivial():
        if c1.is_trivial() and c2.is_trivial():
            return IsoResult(True, tuple(range(N)), {0: 0, 1: 1}, "trivial")
        return IsoResult(False, method="trivial")
    if c1.rank != c2.rank:
        return IsoResult(False, method="rank")
    G1 = scheme_linear_closure(c1)
    G2 = scheme_linear_closure(c2)
    if G1.order != G2.order:
        return IsoResult(False, method="conjugacy")
    sp = c1.space
    lab1 = orbit_labels(sp, G1.perms)
    lab2 = orbit_labels(sp, G2.perms)
    found = linear_maps_preserving(sp, lab1, lab2, label_map=True, first_only=True)
    if not found:
        return IsoResult(False, method="conjugacy")
    g = found[0]
    if not G1.conjugate(g).same_elements(G2):
        raise SchemeError("orbit-matching map does not conjugate the closures")
    ren = class_renaming(c1.colors, c2.colors, g)
    if ren is None:
        raise SchemeError("conjugating map is not a scheme isomorphism")
    return IsoResult(True, g, ren, "conjugacy")


def are_isomorphic_bruteforce(S1: AssociationScheme, S2: AssociationScheme) -> IsoResult:
    """Backtracking color-isomorphism search, independent of any group theory."""
    res = search.scheme_isomorphism(S1.colors, S2.colors)
    if res is None:
        return IsoResult(False, method="backtrack")
    f, ren = res
    return IsoResult(True, tuple(int(v) for v in f), ren, "backtrack")


def iso_set_full_scan(S1: AssociationScheme, S2: AssociationScheme) -> np.ndarray:
    """Every isomorphism between two schemes on at most 9 points."""
    return search.isomorphisms_full_scan(S1.colors, S2.colors)


def affine_group_order(p: int, dim: int) -> int:
    from .perm_group import gl_order

    return p**dim * gl_order(dim, p)


__all__ = [
    "AssociationScheme",
    "AxiomCheck",
    "AxiomWitness",
    "CyclotomicScheme",
    "FieldReduction",
    "IsoResult",
    "SchemeError",
    "abelian_field_reduction",
    "affine_group_order",
    "are_isomorphic",
    "are_isomorphic_bruteforce",
    "aut_bruteforce",
    "aut_group",
    "base_group",
    "build_cyclotomic",
    "class_renaming",
    "field_scheme_colors",
    "invariant_subspaces",
    "is_irreducible",
    "is_primitive",
    "is_primitive_by_unions",
    "iso_set_full_scan",
    "scheme_linear_closure",
    "span_field",
    "verify_scheme_axioms",
    "zero_stabilizer_is_linear",
]
