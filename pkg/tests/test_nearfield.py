from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from nearcyc.nearfield import (
    NearFieldError,
    classical_coupling,
    construct_nearfield,
    count_dickson_nearfields,
    enumerate_nearfields,
    enumerate_subgroups,
    isomorphism_classes,
    nearfield_isomorphism,
    nearfield_with_unit,
    sylow_types,
    validate_dickson_pair,
    variant_units,
    verify_nearfield_axioms,
    with_coupling,
)
from nearcyc.numtheory import prime_power

import oracles

NEARFIELDS_TO_121 = [nf for nf in enumerate_nearfields(121)]
PROPER = [nf for nf in enumerate_nearfields(343) if nf.n > 1]


# -- Dickson pairs --


def test_pair_examples():
    assert validate_dickson_pair(3, 2)
    for q, n in [(2, 6), (2, 4), (4, 2), (8, 2)]:
        assert not validate_dickson_pair(q, n)
    for q in [2, 3, 4, 5, 7, 8, 9, 16, 27, 121]:
        assert validate_dickson_pair(q, 1)
    with pytest.raises(NearFieldError):
        validate_dickson_pair(6, 1)


@given(st.integers(2, 200), st.integers(1, 12))
def test_pair_conditions_match_definition(q, n):
    if prime_power(q) is None:
        return
    primes = {r for r in range(2, n + 1) if n % r == 0 and all(r % s for s in range(2, r))}
    expected = all((q - 1) % r == 0 for r in primes) and not (n % 4 == 0 and (q - 1) % 4)
    assert validate_dickson_pair(q, n) == expected


def test_count_examples():
    assert count_dickson_nearfields(3, 2) == 1
    assert count_dickson_nearfields(5, 4) == 2
    assert count_dickson_nearfields(7, 1) == 1
    assert count_dickson_nearfields(7, 3) == 2
    assert count_dickson_nearfields(4, 3) == 1  # p = 2 has order 2 mod 3
    with pytest.raises(NearFieldError):
        count_dickson_nearfields(2, 2)


@pytest.mark.parametrize("q,n", [(3, 2), (5, 2), (5, 4), (7, 3), (4, 3), (13, 3), (9, 2), (13, 4), (16, 3), (16, 5)])
def test_coupling_is_a_bijection(q, n):
    J = classical_coupling(q, n)
    assert sorted(J.tolist()) == list(range(n))
    for j in range(n):
        assert J[((q**j - 1) // (q - 1)) % n] == j
    assert len(variant_units(q, n)) == count_dickson_nearfields(q, n)


# -- construction and multiplication --


def test_field_case_is_field_multiplication():
    nf = construct_nearfield(9, 1)
    assert nf.is_field
    assert (nf.mul_table == nf.field.mul_table).all()


def test_order9_product_rule():
    nf = construct_nearfield(3, 2)
    F = nf.field
    for x in range(1, 9):
        for y in range(9):
            odd = int(F.log[x]) % 2
            expected = int(F.mul(F.power(y, 3) if (odd and y) else y, x))
            assert nf.mul(y, x) == expected


@pytest.mark.parametrize("nf", NEARFIELDS_TO_121 + PROPER[-3:], ids=lambda nf: nf.label())
def test_products_match_naive_oracle(nf):
    naive = oracles.NaiveNearField(nf.q, nf.n, nf.p, nf.dimension, nf.unit)
    rng = np.random.default_rng(nf.order)
    pairs = rng.integers(0, nf.order, size=(min(300, nf.order**2), 2))
    for a, b in pairs:
        assert nf.mul(int(a), int(b)) == naive.mul(int(a), int(b))


def test_order9_mult_group_is_q8():
    M = construct_nearfield(3, 2).mult_group
    orders = sorted(M.element_orders.tolist())
    assert orders == [1, 2, 4, 4, 4, 4, 4, 4]
    assert not M.is_abelian()
    assert sylow_types(M) == {2: "quaternion"}


def test_order9_noncommutative_witness():
    nf = construct_nearfield(3, 2)
    F = nf.field
    y = int(F.exp[1])
    witnesses = [x for x in range(1, 9) if F.log[x] % 2 == 1 and nf.mul(y, x) != nf.mul(x, y)]
    assert witnesses


def test_identity_and_zero():
    nf = construct_nearfield(5, 4, 1)
    x = np.arange(nf.order)
    assert (nf.mul(x, 1) == x).all() and (nf.mul(1, x) == x).all()
    assert (nf.mul(x, 0) == 0).all() and (nf.mul(0, x) == 0).all()


def test_construction_errors():
    with pytest.raises(NearFieldError):
        construct_nearfield(3, 2, 1)
    with pytest.raises(NearFieldError):
        construct_nearfield(2, 2)
    with pytest.raises(NearFieldError):
        nearfield_with_unit(7, 3, 3)


# -- axioms --


def test_order9_axioms_pass():
    r = verify_nearfield_axioms(construct_nearfield(3, 2))
    assert r.passed and all(r.results.values())


def test_gf9_axioms_pass():
    assert verify_nearfield_axioms(construct_nearfield(9, 1)).passed


def test_mutated_coupling_fails_associativity_with_witness():
    nf = with_coupling(construct_nearfield(3, 2), [1, 0])
    r = verify_nearfield_axioms(nf)
    assert not r.passed
    assert r.results["associative"] is False
    a, b, c = r.witnesses["associative"]
    assert nf.mul(nf.mul(a, b), c) != nf.mul(a, nf.mul(b, c))


def test_axiom_check_bound():
    with pytest.raises(NearFieldError):
        verify_nearfield_axioms(construct_nearfield(3, 2), bound=8)


def test_axioms_against_naive_triple_scan_order9():
    naive = oracles.NaiveNearField(3, 2, 3, 2)
    F = naive.F
    for x in range(9):
        for y in range(9):
            for z in range(9):
                assert naive.mul(F.add(x, y), z) == F.add(naive.mul(x, z), naive.mul(y, z))
                assert naive.mul(naive.mul(x, y), z) == naive.mul(x, naive.mul(y, z))


# -- structure --


@pytest.mark.parametrize("nf", enumerate_nearfields(343), ids=lambda nf: nf.label())
def test_field_iff_abelian_and_sylow_types(nf):
    M = nf.mult_group
    assert M.order == nf.order - 1
    assert M.is_abelian() == nf.is_field
    assert nf.is_mult_abelian() == nf.is_field
    assert set(sylow_types(M).values()) <= {"cyclic", "quaternion"}


def test_subgroups_examples():
    assert [len(K) for K in construct_nearfield(3, 2).mult_group.subgroups()] == [1, 2, 4, 4, 4, 8]
    assert [len(K) for K in construct_nearfield(9, 1).mult_group.subgroups()] == [1, 2, 4, 8]
    assert construct_nearfield(2, 1).mult_group.subgroups() == [[1]]


@pytest.mark.parametrize("q,n,v", [(3, 2, 0), (9, 1, 0), (5, 2, 0), (7, 2, 0), (13, 1, 0), (16, 1, 0)])
def test_subgroups_match_subset_enumeration(q, n, v):
    """Every subset closed under the product is found (small groups only)."""
    nf = construct_nearfield(q, n, v)
    M = nf.mult_group
    labels = [int(x) for x in M.labels]
    ours = {tuple(K) for K in enumerate_subgroups(M)}
    U = M.order
    found = set()
    if U <= 16:
        for mask in range(1, 1 << U):
            idx = [i for i in range(U) if mask >> i & 1]
            if 0 not in idx:
                continue
            s = set(idx)
            if all(int(M.table[a, b]) in s for a in idx for b in idx):
                found.add(tuple(sorted(labels[i] for i in idx)))
    else:
        # cyclic or metacyclic of small order: closures of pairs suffice
        for a in range(U):
            for b in range(U):
                sub = {0}
                frontier = [0]
                for h in frontier:
                    for g in (a, b):
                        y = int(M.table[h, g])
                        if y not in sub:
                            sub.add(y)
                            frontier.append(y)
                found.add(tuple(sorted(labels[i] for i in sub)))
    assert ours == found
    keys = [(len(K), K) for K in enumerate_subgroups(M)]
    assert keys == sorted(keys)


# -- isomorphism classes --


@pytest.mark.parametrize("q,n", [(4, 3), (5, 4), (7, 3)])
def test_isomorphism_classes_over_all_units(q, n):
    from math import gcd

    from nearcyc.numtheory import euler_phi, multiplicative_order

    nfs = [nearfield_with_unit(q, n, u) for u in range(1, n) if gcd(u, n) == 1]
    k = multiplicative_order(prime_power(q)[0], n)
    assert len(isomorphism_classes(nfs)) == euler_phi(n) // k


def test_variants_are_pairwise_nonisomorphic():
    A, B = construct_nearfield(5, 4, 0), construct_nearfield(5, 4, 1)
    assert nearfield_isomorphism(A, B) is None
    f = nearfield_isomorphism(A, A)
    assert f is not None
    M = A.mul_table
    assert (f[M] == M[f[:, None], f[None, :]]).all()


def test_export_table_csv(tmp_path):
    nf = construct_nearfield(3, 2)
    path = tmp_path / "t.csv"
    nf.export_table_csv(path)
    rows = path.read_text().splitlines()
    assert len(rows) == 9
    F = nf.field
    cells = [r.split(",") for r in rows[1:]]
    # row log(x), column log(y), entry log(y o x)
    for lx in range(8):
        for ly in range(8):
            x, y = int(F.exp[lx]), int(F.exp[ly])
            assert int(cells[lx][ly + 1]) == int(F.log[nf.mul(y, x)])
