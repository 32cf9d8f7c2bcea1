"""Randomized and exhaustive invariants that span several modules."""

from __future__ import annotations

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from nearcyc.nearfield import classical_coupling, enumerate_nearfields, validate_dickson_pair
from nearcyc.numtheory import is_prime, prime_power
from nearcyc.perm_group import PermGroup, affine_group, canonical_colors, linear_closure, orbit_labels, two_orbits
from nearcyc.scheme import base_group, build_cyclotomic, is_primitive, verify_scheme_axioms
from nearcyc.zsigmondy import cyclotomic_poly_value, greatest_prime_factor, zsigmondy_primes

NFS_343 = enumerate_nearfields(343)
NFS_121 = [nf for nf in NFS_343 if nf.order <= 121]
NFS_49 = [nf for nf in NFS_343 if nf.order <= 49]


@st.composite
def nearfield_and_subgroup(draw, pool):
    nf = draw(st.sampled_from(pool))
    subs = nf.mult_group.subgroups()
    return nf, subs[draw(st.integers(0, len(subs) - 1))]


@given(st.sampled_from(NFS_343), st.data())
def test_right_distributive_and_associative_samples(nf, data):
    F = nf.field
    a, b, c = (data.draw(st.integers(0, nf.order - 1)) for _ in range(3))
    assert nf.mul(int(F.add(a, b)), c) == int(F.add(nf.mul(a, c), nf.mul(b, c)))
    assert nf.mul(nf.mul(a, b), c) == nf.mul(a, nf.mul(b, c))
    if a:
        assert nf.mul(a, nf.inverse(a)) == 1 == nf.mul(nf.inverse(a), a)


@given(st.integers(2, 400), st.integers(2, 12))
def test_coupling_bijective_for_every_pair(q, n):
    if prime_power(q) is None or not validate_dickson_pair(q, n):
        return
    assert sorted(classical_coupling(q, n).tolist()) == list(range(n))


@settings(max_examples=40)
@given(nearfield_and_subgroup(NFS_121))
def test_scheme_is_two_orbit_partition(pair):
    nf, K = pair
    cs = build_cyclotomic(nf, K)
    assert (cs.rank - 1) * cs.valency == nf.order - 1
    assert (canonical_colors(two_orbits(nf.order, affine_group(nf, K).generators)) == cs.colors).all()
    assert verify_scheme_axioms(cs.scheme).ok
    # transposes of classes are classes; every class has constant valency
    t = cs.scheme.transpose_map
    assert sorted(t.tolist()) == list(range(cs.rank))
    assert (cs.scheme.class_sizes[1:] == nf.order * cs.valency).all()


@settings(max_examples=30)
@given(nearfield_and_subgroup(NFS_49))
def test_linear_closure_is_extensive_and_idempotent(pair):
    nf, K = pair
    G = base_group(nf, K)
    bar = linear_closure(G)
    assert G.perm_set <= bar.perm_set
    # a finite set of permutations is a group iff it has the order of the group it generates
    assert PermGroup(G.space.size, bar.perms).order == bar.order
    assert (orbit_labels(G.space, bar.perms) == orbit_labels(G.space, G.perms)).all()
    assert linear_closure(bar).same_elements(bar)
    # imprimitive schemes have closed base groups
    if not is_primitive(build_cyclotomic(nf, K).scheme):
        assert bar.same_elements(G)


def test_largest_prime_of_cyclotomic_value_is_small_or_zsigmondy():
    """For every prime p and m with p^m <= 2^16: the greatest prime factor of
    Phi_m(p) is at most m or is a Zsigmondy prime for (p, m)."""
    checked = 0
    for p in range(2, 2**16 + 1):
        if not is_prime(p):
            continue
        m = 1
        while p**m <= 2**16:
            P = greatest_prime_factor(cyclotomic_poly_value(m, p, 1))
            if P > m:
                assert P in zsigmondy_primes(p, m), (p, m, P)
            else:
                assert P not in zsigmondy_primes(p, m) or P == 1
            checked += 1
            m += 1
    assert checked > 6000


@given(st.integers(2, 2**8), st.integers(1, 8))
def test_zsigmondy_primes_divide_cyclotomic_value(q, n):
    if q**n > 2**40:
        return
    v = cyclotomic_poly_value(n, q, 1)
    for r in zsigmondy_primes(q, n):
        assert v % r == 0


@given(nearfield_and_subgroup(NFS_121))
def test_cosets_partition_the_units(pair):
    nf, K = pair
    cs = build_cyclotomic(nf, K)
    cls = cs.class_of
    assert cls[0] == 0
    counts = np.bincount(cls[1:])
    assert (counts[1:] == len(K)).all()
    for a in cs.coset_reps:
        assert {int(nf.mul(a, k)) for k in K} == {x for x in range(1, nf.order) if cls[x] == cls[a]}
