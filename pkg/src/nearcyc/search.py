"""Backtracking search for automorphisms and isomorphisms of color matrices.

A color matrix ``E`` is an ``N x N`` integer array, i.e. a complete directed
graph with colored edges and loops.  Points are individualized one at a time
and the partition is refined by the multiset of ``(edge color, cell)`` pairs
seen from each point.  New cell labels are the ranks of the sorted signature
rows, so they depend only on isomorphism-invariant data and two sides that
correspond under an isomorphism refine identically.  Every leaf is checked
against the full matrix, so pruning never has to be trusted for correctness.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

BACKTRACK_BOUND = 169
FULL_SCAN_BOUND = 9


class SearchError(ValueError):
    pass


def refine(E: np.ndarray, cells: np.ndarray) -> tuple[np.ndarray, list[np.ndarray]]:
    """Equitable refinement of ``cells``; returns the new cells and the trace
    of signature tables used to compare two sides."""
    cells = _relabel(cells)
    trace = []
    ncells = int(cells.max()) + 1
    while True:
        keys = np.sort(E * ncells + cells[None, :], axis=1)
        rows = np.concatenate([cells[:, None], keys], axis=1)
        sig, new = np.unique(rows, axis=0, return_inverse=True)
        new = new.ravel()
        trace.append(sig)
        n_new = len(sig)
        if n_new == ncells:
            return new, trace
        cells, ncells = new, n_new


def _relabel(cells: np.ndarray) -> np.ndarray:
    _, inv = np.unique(cells, return_inverse=True)
    return inv.ravel().astype(np.int64)


def _same_trace(a: list[np.ndarray], b: list[np.ndarray]) -> bool:
    return len(a) == len(b) and all(x.shape == y.shape and np.array_equal(x, y) for x, y in zip(a, b))


def _individualize(cells: np.ndarray, x: int) -> np.ndarray:
    out = cells.copy()
    out[x] = int(cells.max()) + 1
    return out


def _leaf_map(cl: np.ndarray, cr: np.ndarray) -> np.ndarray:
    f = np.empty(len(cl), dtype=np.int64)
    f[np.argsort(cl)] = np.argsort(cr)
    return f


@dataclass
class SearchStats:
    nodes: int = 0
    leaves: int = 0


def find_mapping(
    EL: np.ndarray,
    ER: np.ndarray,
    cells_l: np.ndarray,
    cells_r: np.ndarray,
    stats: SearchStats | None = None,
) -> np.ndarray | None:
    """A point map ``f`` with ``ER[f[x], f[y]] == EL[x, y]`` that carries each
    cell of ``cells_l`` onto the same-labelled cell of ``cells_r``, or None."""
    stats = stats if stats is not None else SearchStats()

    def rec(cl, cr):
        stats.nodes += 1
        cl, tl = refine(EL, cl)
        cr, tr = refine(ER, cr)
        if not _same_trace(tl, tr):
            return None
        sizes = np.bincount(cl)
        if (sizes == 1).all():
            stats.leaves += 1
            f = _leaf_map(cl, cr)
            return f if np.array_equal(ER[f[:, None], f[None, :]], EL) else None
        target = int(np.flatnonzero(sizes > 1)[0])
        x = int(np.flatnonzero(cl == target)[0])
        cl2 = _individualize(cl, x)
        for y in np.flatnonzero(cr == target):
            f = rec(cl2, _individualize(cr, int(y)))
            if f is not None:
                return f
        return None

    return rec(np.asarray(cells_l), np.asarray(cells_r))


@dataclass
class AutomorphismResult:
    generators: list[tuple]
    base: list[int]
    orbit_sizes: list[int]
    stats: SearchStats = field(default_factory=SearchStats)

    @property
    def order(self) -> int:
        return math.prod(self.orbit_sizes)


def _orbit(point: int, gens: list[np.ndarray]) -> set[int]:
    orb = {point}
    queue = [point]
    for x in queue:
        for g in gens:
            y = int(g[x])
            if y not in orb:
                orb.add(y)
                queue.append(y)
    return orb


def automorphism_group(E: np.ndarray, bound: int = BACKTRACK_BOUND) -> AutomorphismResult:
    """Generators and order of ``{g : E[g[x], g[y]] == E[x, y]}``.

    The base is chosen along the leftmost path of the search tree.  Levels
    are processed deepest first; at each level one automorphism is searched
    for every candidate image of the base point not already reached by the
    automorphisms found so far, so the orbit sizes multiply to the order.
    """
    E = np.asarray(E, dtype=np.int64)
    N = E.shape[0]
    if N > bound:
        raise SearchError(f"{N} points exceed the backtracking bound {bound}")
    stats = SearchStats()
    base: list[int] = []
    level_cells: list[np.ndarray] = []
    cells, _ = refine(E, np.zeros(N, dtype=np.int64))
    while True:
        sizes = np.bincount(cells)
        if (sizes == 1).all():
            break
        target = int(np.flatnonzero(sizes > 1)[0])
        b = int(np.flatnonzero(cells == target)[0])
        base.append(b)
        level_cells.append(cells)
        cells, _ = refine(E, _individualize(cells, b))

    gens: list[np.ndarray] = []
    orbit_sizes = [0] * len(base)
    for i in reversed(range(len(base))):
        b = base[i]
        cells = level_cells[i]
        left = _individualize(cells, b)
        orb = _orbit(b, gens)
        for c in np.flatnonzero(cells == cells[b]):
            c = int(c)
            if c in orb:
                continue
            f = find_mapping(E, E, left, _individualize(cells, c), stats)
            if f is not None:
                gens.append(f)
                orb = _orbit(b, gens)
        orbit_sizes[i] = len(orb)
    return AutomorphismResult(
        generators=[tuple(int(v) for v in g) for g in gens],
        base=base,
        orbit_sizes=orbit_sizes,
        stats=stats,
    )


def automorphisms_full_scan(E: np.ndarray, bound: int = FULL_SCAN_BOUND) -> np.ndarray:
    """Every permutation preserving ``E``, by testing all ``N!`` of them."""
    E = np.asarray(E)
    N = E.shape[0]
    if N > bound:
        raise SearchError(f"full scan limited to {bound} points")
    P = np.array(list(itertools.permutations(range(N))), dtype=np.int64).reshape(-1, N)
    ok = np.ones(len(P), dtype=bool)
    for i in range(N):
        for j in range(N):
            ok &= E[P[:, i], P[:, j]] == E[i, j]
    return P[ok]


def isomorphisms_full_scan(E1: np.ndarray, E2: np.ndarray, bound: int = FULL_SCAN_BOUND) -> np.ndarray:
    """Every bijection ``f`` carrying the classes of ``E1`` onto the classes of
    ``E2`` (colors may be renamed), by testing all ``N!`` permutations."""
    E1, E2 = np.asarray(E1), np.asarray(E2)
    N = E1.shape[0]
    if N > bound or E2.shape[0] != N:
        raise SearchError(f"full scan limited to {bound} points of equal size")
    P = np.array(list(itertools.permutations(range(N))), dtype=np.int64).reshape(-1, N)
    classes = np.unique(E1)
    if len(classes) != len(np.unique(E2)):
        return P[:0]
    ok = np.ones(len(P), dtype=bool)
    images = []
    for c in classes:
        pos = np.argwhere(E1 == c)
        vals = E2[P[:, pos[:, 0]], P[:, pos[:, 1]]]
        ok &= (vals == vals[:, :1]).all(axis=1)
        images.append(vals[:, 0])
    img = np.sort(np.stack(images, axis=1), axis=1)
    ok &= (np.diff(img, axis=1) != 0).all(axis=1)
    return P[ok]


def scheme_isomorphism(
    C1: np.ndarray,
    C2: np.ndarray,
    first_images: list[int] | None = None,
    stats: SearchStats | None = None,
) -> tuple[np.ndarray, dict[int, int]] | None:
    """A bijection ``f`` and a class renaming ``phi`` with
    ``C2[f[x], f[y]] == phi[C1[x, y]]``, or None.

    The renaming is discovered during the search: each newly matched point
    pair fixes the images of the classes joining it to earlier points, and
    refinement only distinguishes classes whose image is already known.
    ``first_images`` restricts the image of point 0 (e.g. to orbit
    representatives of the automorphism group of ``C2``).
    """
    C1 = np.asarray(C1, dtype=np.int64)
    C2 = np.asarray(C2, dtype=np.int64)
    N = C1.shape[0]
    if C2.shape[0] != N:
        return None
    r1, r2 = int(C1.max()) + 1, int(C2.max()) + 1
    if r1 != r2:
        return None
    v1 = sorted(np.bincount(C1.ravel(), minlength=r1).tolist())
    v2 = sorted(np.bincount(C2.ravel(), minlength=r2).tolist())
    if v1 != v2:
        return None
    stats = stats if stats is not None else SearchStats()

    def extend(phi, used, xs, ys, x, y):
        phi = dict(phi)
        used = set(used)
        for a, b in list(zip(xs, ys)) + [(x, y)]:
            for c1, c2 in ((int(C1[x, a]), int(C2[y, b])), (int(C1[a, x]), int(C2[b, y]))):
                if c1 in phi:
                    if phi[c1] != c2:
                        return None
                elif c2 in used:
                    return None
                else:
                    phi[c1] = c2
                    used.add(c2)
        return phi, used

    def rec(xs, ys, phi, used):
        stats.nodes += 1
        lab1 = np.zeros(r1, dtype=np.int64)
        lab2 = np.zeros(r2, dtype=np.int64)
        for c1, c2 in phi.items():
            lab1[c1] = c2 + 1
            lab2[c2] = c2 + 1
        EL, ER = lab1[C1], lab2[C2]
        cl = np.zeros(N, dtype=np.int64)
        cr = np.zeros(N, dtype=np.int64)
        for k, (x, y) in enumerate(zip(xs, ys)):
            cl[x] = k + 1
            cr[y] = k + 1
        cl, tl = refine(EL, cl)
        cr, tr = refine(ER, cr)
        if not _same_trace(tl, tr):
            return None
        sizes = np.bincount(cl)
        if (sizes == 1).all():
            stats.leaves += 1
            f = _leaf_map(cl, cr)
            img = C2[f[:, None], f[None, :]]
            ren = {}
            for a, b in zip(C1.ravel().tolist(), img.ravel().tolist()):
                if ren.setdefault(a, b) != b:
                    return None
            if len(set(ren.values())) != len(ren):
                return None
            return f, ren
        target = int(np.flatnonzero(sizes > 1)[0])
        x = int(np.flatnonzero(cl == target)[0])
        cands = np.flatnonzero(cr == target)
        if not xs and first_images is not None:
            cands = [y for y in cands if int(y) in set(first_images)]
        for y in cands:
            y = int(y)
            ext = extend(phi, used, xs, ys, x, y)
            if ext is None:
                continue
            res = rec(xs + [x], ys + [y], *ext)
            if res is not None:
                return res
        return None

    return rec([], [], {0: 0} if C1[0, 0] == 0 and C2[0, 0] == 0 else {}, {0} if C2[0, 0] == 0 else set())
