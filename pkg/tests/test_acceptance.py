"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line
with its runtime.  Also runnable directly with ``python3 tests/test_acceptance.py``."""

from __future__ import annotations

import json
import sys
from math import gcd
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from acceptance_log import criterion  # noqa: E402

from nearcyc.census import report_json, run_census  # noqa: E402
from nearcyc.nearfield import (  # noqa: E402
    construct_nearfield,
    count_dickson_nearfields,
    enumerate_nearfields,
    isomorphism_classes,
    nearfield_with_unit,
    validate_dickson_pair,
    verify_nearfield_axioms,
)
from nearcyc.numtheory import euler_phi, multiplicative_order, prime_power  # noqa: E402
from nearcyc.perm_group import (  # noqa: E402
    ENUMERATION_BOUND,
    affine_group,
    is_frobenius,
    minimal_normal_subgroups,
    translation_group,
)
from nearcyc.scheme import (  # noqa: E402
    abelian_field_reduction,
    aut_bruteforce,
    aut_group,
    base_group,
    build_cyclotomic,
    is_irreducible,
    is_primitive,
    verify_scheme_axioms,
    zero_stabilizer_is_linear,
)
from nearcyc.search import automorphisms_full_scan  # noqa: E402
from nearcyc.zsigmondy import (  # noqa: E402
    is_zsigmondy_exception,
    semilinear_check,
    zsigmondy_primes,
)


@pytest.fixture(scope="module")
def schemes_to_121():
    out = []
    for nf in enumerate_nearfields(121):
        for K in nf.mult_group.subgroups():
            out.append(build_cyclotomic(nf, K))
    return out


@pytest.fixture(scope="module")
def oracle_auts(schemes_to_121):
    """Backtracking automorphism group of every nontrivial scheme up to 121."""
    return {id(cs): aut_bruteforce(cs.scheme) for cs in schemes_to_121 if not cs.is_trivial()}


def test_nearfield_axioms_up_to_343():
    with criterion("near-field axioms, every variant with q^n <= 343", limit=10) as note:
        nfs = enumerate_nearfields(343)
        failed = [nf.label() for nf in nfs if not verify_nearfield_axioms(nf).passed]
        note["detail"] = f"{len(nfs)} near-fields"
        assert not failed, failed


def test_isomorphism_class_counts():
    with criterion("near-field isomorphism classes equal phi(n)/k", limit=60) as note:
        checked = []
        for order in (9, 25, 49, 121, 625):
            p, e = prime_power(order)
            for n in range(2, e + 1):
                if e % n:
                    continue
                q = p ** (e // n)
                if not validate_dickson_pair(q, n):
                    continue
                units = [u for u in range(1, n) if gcd(u, n) == 1]
                nfs = [nearfield_with_unit(q, n, u) for u in units]
                k = multiplicative_order(p, n)
                classes = isomorphism_classes(nfs)
                assert len(classes) == euler_phi(n) // k == count_dickson_nearfields(q, n), (q, n)
                # the chosen variants represent every class
                variant_units = [construct_nearfield(q, n, v).unit for v in range(count_dickson_nearfields(q, n))]
                reps = {next(i for i, c in enumerate(classes) if units.index(u) in c) for u in variant_units}
                assert len(reps) == len(classes)
                checked.append(f"({q},{n}):{len(classes)}")
        note["detail"] = " ".join(checked)


def test_order9_multiplicative_group_is_quaternion():
    with criterion("order-9 multiplicative group is Q8 and nonabelian"):
        M = construct_nearfield(3, 2).mult_group
        orders = M.element_orders.tolist()
        assert orders.count(2) == 1 and orders.count(4) == 6
        assert not M.is_abelian()


def test_scheme_axioms_up_to_121(schemes_to_121):
    with criterion("scheme axioms, every scheme with q^n <= 121", limit=30) as note:
        bad = [cs.label() for cs in schemes_to_121 if not verify_scheme_axioms(cs.scheme).ok]
        note["detail"] = f"{len(schemes_to_121)} schemes"
        assert not bad, bad


def test_primitive_iff_irreducible(schemes_to_121):
    with criterion("primitive iff base group irreducible, q^n <= 121") as note:
        bad = [
            cs.label()
            for cs in schemes_to_121
            if is_primitive(cs.scheme) != is_irreducible(base_group(cs.nearfield, cs.K))
        ]
        note["detail"] = f"{sum(is_primitive(c.scheme) for c in schemes_to_121)} primitive"
        assert not bad, bad


def test_automorphisms_are_affine():
    with criterion("automorphisms fixing 0 are linear at orders 9, 25, 49, 121, 169", limit=600) as note:
        counts = {}
        for order in (9, 25, 49, 121, 169):
            for nf in enumerate_nearfields(order):
                if nf.order != order:
                    continue
                for K in nf.mult_group.subgroups():
                    cs = build_cyclotomic(nf, K)
                    if cs.is_trivial():
                        continue
                    B = aut_bruteforce(cs.scheme)
                    if order == 9:
                        full = automorphisms_full_scan(cs.colors)
                        assert len(full) == B.order
                        stab = [g for g in full if g[0] == 0]
                        assert all(cs.space.is_additive(g) for g in stab), cs.label()
                    assert zero_stabilizer_is_linear(B, cs.space), cs.label()
                    counts[order] = counts.get(order, 0) + 1
        note["detail"] = " ".join(f"{k}:{v}" for k, v in counts.items())


def test_aut_equals_translations_times_closure(schemes_to_121, oracle_auts):
    with criterion("Aut = T.Gbar elementwise for every nontrivial scheme, q^n <= 121") as note:
        bad = []
        n = 0
        for cs in schemes_to_121:
            if cs.is_trivial():
                continue
            A, B = aut_group(cs), oracle_auts[id(cs)]
            n += 1
            if not A.equals(B):
                bad.append(cs.label())
        note["detail"] = f"{n} schemes"
        assert not bad, bad


def test_frobenius_and_socle_structure(schemes_to_121, oracle_auts):
    with criterion("imprimitive: Frobenius with kernel T; primitive: socle T") as note:
        bad, checked, skipped = [], 0, 0
        for cs in schemes_to_121:
            if cs.is_trivial():
                continue
            B = oracle_auts[id(cs)]
            if B.order > ENUMERATION_BOUND:
                skipped += 1
                continue
            T = translation_group(cs.space)
            if is_primitive(cs.scheme):
                mins = minimal_normal_subgroups(B)
                ok = len(mins) == 1 and mins[0].equals(T)
            else:
                frob, kernel = is_frobenius(B)
                ok = frob and kernel.equals(T) and B.equals(affine_group(cs.nearfield, cs.K))
            checked += 1
            if not ok:
                bad.append(cs.label())
        note["detail"] = f"{checked} checked, {skipped} above 10^6"
        assert not bad, bad


def test_abelian_primitive_schemes_reduce_to_fields(schemes_to_121):
    with criterion("primitive abelian-base schemes reduce to field schemes, q^n <= 121") as note:
        bad, n = [], 0
        for cs in schemes_to_121:
            if cs.is_trivial() or not is_primitive(cs.scheme):
                continue
            if not base_group(cs.nearfield, cs.K).is_abelian():
                continue
            n += 1
            if not abelian_field_reduction(cs).identical:
                bad.append(cs.label())
        note["detail"] = f"{n} schemes"
        assert not bad, bad


def test_semilinear_at_order_169():
    with criterion("order 169, 7 | |K| < 168: primitive and Aut_0 semilinear", limit=900) as note:
        nf = construct_nearfield(13, 2)
        sizes = []
        for K in nf.mult_group.subgroups():
            if len(K) % 7 or len(K) >= 168:
                continue
            res = semilinear_check(build_cyclotomic(nf, K))
            assert res.applicable and res.prime == 7, len(K)
            assert res.primitive and res.semilinear, len(K)
            sizes.append(len(K))
        assert sizes
        note["detail"] = f"|K| in {sorted(set(sizes))}, {len(sizes)} subgroups"


def test_zsigmondy_existence_and_congruence():
    with criterion("Zsigmondy exceptions and r = 1 mod n for q^n <= 2^16", limit=60) as note:
        bound = 2**16
        count, empty = 0, []
        for q in range(2, bound + 1):
            n = 1
            while q**n <= bound:
                primes = zsigmondy_primes(q, n)
                count += 1
                for r in primes:
                    assert (r - 1) % n == 0, (q, n, r)
                if not primes:
                    empty.append((q, n))
                n += 1
        assert all(is_zsigmondy_exception(q, n) for q, n in empty), empty
        # every listed exception with q^n > 2 does occur
        expected = {(2, 6)} | {(q, 2) for q in range(2, 256) if (q + 1) & q == 0} | {(2, 1)}
        assert set(empty) == expected
        note["detail"] = f"{count} pairs, {len(empty)} without a Zsigmondy prime"


def test_census_is_deterministic():
    with criterion("two census runs at max order 121 are byte-identical with zero failures") as note:
        a = report_json(*run_census(121))
        b = report_json(*run_census(121))
        summary = json.loads(a)["summary"]
        note["detail"] = f"{summary['records']} records, {summary['failures']} failures"
        assert a == b
        assert summary["failures"] == 0


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-v", "-s"]))
