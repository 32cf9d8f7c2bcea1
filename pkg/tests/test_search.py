from __future__ import annotations

import numpy as np
import pytest
from hypothesis import example, given
from hypothesis import strategies as st

from nearcyc.perm_group import PermGroup, canonical_colors
from nearcyc.search import (
    SearchError,
    automorphism_group,
    automorphisms_full_scan,
    isomorphisms_full_scan,
    refine,
    scheme_isomorphism,
)

import oracles


def random_colors(draw, n, k):
    C = draw(st.lists(st.lists(st.integers(1, k), min_size=n, max_size=n), min_size=n, max_size=n))
    A = np.array(C)
    np.fill_diagonal(A, 0)
    return A


@st.composite
def color_matrices(draw, max_n=6, min_n=2):
    n = draw(st.integers(min_n, max_n))
    return random_colors(draw, n, draw(st.integers(1, 3)))


@given(color_matrices())
def test_backtracking_matches_full_scan(C):
    res = automorphism_group(C)
    full = {tuple(int(v) for v in g) for g in automorphisms_full_scan(C)}
    assert res.order == len(full)
    G = PermGroup(C.shape[0], res.generators)
    assert set(G.elements()) == full
    assert full == set(oracles.naive_automorphisms(C.tolist()))


@given(color_matrices(5, 5), st.permutations(range(5)))
@example(
    np.array([[0, 2, 2, 2, 2], [1, 0, 1, 2, 2], [1, 2, 0, 2, 2], [1, 1, 1, 0, 1], [1, 1, 1, 2, 0]]),
    [0, 1, 2, 3, 4],
)
def test_isomorphism_found_for_relabelled_copy(C, perm):
    n = C.shape[0]
    f = np.array(perm)
    # C2[f[x], f[y]] = C[x, y], with colors renamed
    C2 = np.zeros_like(C)
    C2[f[:, None], f[None, :]] = C
    C2 = np.where(C2 > 0, C2.max() + 1 - C2, 0)
    res = scheme_isomorphism(C, C2)
    assert res is not None
    g, ren = res
    g = np.asarray(g)
    assert all(C2[g[x], g[y]] == ren[C[x, y]] for x in range(n) for y in range(n))
    # isomorphisms may rename colors, so compare with C's own color-renaming self-maps
    assert len(isomorphisms_full_scan(C, C2)) == len(isomorphisms_full_scan(C, C))


def test_non_isomorphic_detected():
    A = np.ones((4, 4), dtype=int) - np.eye(4, dtype=int)
    B = A.copy()
    B[0, 1] = B[1, 0] = 2
    assert scheme_isomorphism(A, B) is None
    assert len(isomorphisms_full_scan(A, B)) == 0


def test_refine_is_equitable_for_cycle():
    n = 6
    C = np.zeros((n, n), dtype=int)
    for i in range(n):
        C[i, (i + 1) % n] = C[(i + 1) % n, i] = 1
    C = C + (C == 0) * 2 - 2 * np.eye(n, dtype=int)
    cells, _ = refine(C, np.zeros(n, dtype=np.int64))
    assert len(set(cells.tolist())) == 1
    res = automorphism_group(C)
    assert res.order == 12


def test_bounds():
    with pytest.raises(SearchError):
        automorphisms_full_scan(np.zeros((10, 10), dtype=int))
    with pytest.raises(SearchError):
        automorphism_group(np.zeros((5, 5), dtype=int), bound=4)


def test_deterministic_generators():
    C = canonical_colors(np.array([[0, 1, 2, 2], [1, 0, 2, 2], [2, 2, 0, 1], [2, 2, 1, 0]]))
    a, b = automorphism_group(C), automorphism_group(C)
    assert a.generators == b.generators and a.order == 8
