"""Enumerate every translation scheme of every Dickson near-field up to an
order bound and run the structural checks on each one."""

from __future__ import annotations

import csv
import io
import json
import logging
import math
from dataclasses import asdict, dataclass, fields
from typing import Iterable

from .cache import TableCache, cached_nearfield
from .nearfield import count_dickson_nearfields, validate_dickson_pair
from .numtheory import prime_power
from .perm_group import (
    ENUMERATION_BOUND,
    affine_group,
    is_frobenius,
    minimal_normal_subgroups,
    translation_group,
)
from .scheme import (
    SchemeError,
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
from .zsigmondy import semilinear_check

log = logging.getLogger(__name__)

CHECKS = ("axioms", "primitivity", "aut", "structure", "agl", "semilinear", "reduction")
AUT_CHECKS = frozenset({"aut", "structure", "agl", "semilinear"})
AUT_ORDER_BOUND = 169
ARITHMETIC_ORDER_BOUND = 343


class CensusError(ValueError):
    pass


@dataclass
class CensusRecord:
    q: int
    n: int
    d: int
    p: int
    variant: int
    subgroup_index: int
    k_order: int
    rank: int | None = None
    valency: int | None = None
    axioms_ok: bool | None = None
    primitive: bool | None = None
    irreducible: bool | None = None
    aut_order: int | None = None
    aut_equals_TGbar: bool | None = None
    frobenius_or_socle_ok: bool | None = None
    agl_containment_ok: bool | None = None
    zsigmondy_applicable: bool | None = None
    zsigmondy_prime: int | None = None
    semilinear_ok: bool | None = None
    field_reducible: bool | None = None
    error: str | None = None

    _FLAGS = (
        "axioms_ok",
        "aut_equals_TGbar",
        "frobenius_or_socle_ok",
        "agl_containment_ok",
        "semilinear_ok",
        "field_reducible",
    )

    def failed(self) -> bool:
        if self.error is not None:
            return True
        if self.primitive is not None and self.irreducible is not None and self.primitive != self.irreducible:
            return True
        return any(getattr(self, f) is False for f in self._FLAGS)

    def to_dict(self) -> dict:
        return asdict(self)


def dickson_pairs(max_order: int) -> list[tuple[int, int]]:
    out = []
    for q in range(2, max_order + 1):
        if prime_power(q) is None:
            continue
        n = 1
        while q**n <= max_order:
            if validate_dickson_pair(q, n):
                out.append((q, n))
            n += 1
    return out


def _parse_checks(checks: Iterable[str] | None) -> tuple[str, ...]:
    if checks is None:
        return CHECKS
    chosen = []
    for c in checks:
        c = c.strip()
        if not c:
            continue
        if c not in CHECKS:
            raise CensusError(f"unknown check {c!r}; choose from {', '.join(CHECKS)}")
        chosen.append(c)
    return tuple(c for c in CHECKS if c in chosen)


def check_record(rec: CensusRecord, nf, K, checks: tuple[str, ...]) -> None:
    """Fill in the flags for one scheme.  Flags stay None for checks that
    were not selected or do not apply."""
    cs = build_cyclotomic(nf, K)
    S = cs.scheme
    N = cs.N
    rec.rank = cs.rank
    rec.valency = cs.valency
    if (rec.rank - 1) * rec.valency != N - 1:
        raise CensusError("rank and valency do not match the order")
    if "axioms" in checks:
        rec.axioms_ok = verify_scheme_axioms(S).ok
    need_prim = {"primitivity", "structure", "reduction"} & set(checks)
    if need_prim:
        rec.primitive = is_primitive(S)
    if "primitivity" in checks:
        rec.irreducible = is_irreducible(base_group(nf, K))

    trivial = cs.is_trivial()
    A = B = None
    if {"aut", "structure", "agl"} & set(checks):
        A = aut_group(cs)
        B = aut_bruteforce(S)
        rec.aut_order = B.order
    if "aut" in checks:
        rec.aut_equals_TGbar = A.equals(B) if not A.is_full_symmetric else B.is_full_symmetric or B.order == math.factorial(N)
    if "structure" in checks and not trivial:
        T = translation_group(cs.space)
        if B.order > ENUMERATION_BOUND:
            # too large to enumerate: only the weaker normality of T is checked
            rec.frobenius_or_socle_ok = T.is_normal_in(B)
        elif rec.primitive:
            mins = minimal_normal_subgroups(B)
            rec.frobenius_or_socle_ok = len(mins) == 1 and mins[0].equals(T)
        else:
            frob, kernel = is_frobenius(B)
            rec.frobenius_or_socle_ok = bool(frob and kernel.equals(T) and B.equals(affine_group(nf, K)))
    if "agl" in checks and not trivial:
        rec.agl_containment_ok = zero_stabilizer_is_linear(B, cs.space)
    if "semilinear" in checks:
        res = semilinear_check(cs)
        rec.zsigmondy_applicable = res.applicable
        if res.applicable:
            rec.zsigmondy_prime = res.prime
            rec.semilinear_ok = res.ok
    if "reduction" in checks and rec.primitive and not trivial:
        if base_group(nf, K).is_abelian():
            try:
                rec.field_reducible = abelian_field_reduction(cs).identical
            except SchemeError as exc:
                rec.field_reducible = False
                rec.error = f"field reduction: {exc}"


def run_census(
    max_order: int,
    checks: Iterable[str] | None = None,
    cache: TableCache | None = None,
) -> tuple[list[CensusRecord], dict]:
    """One record per (near-field variant, subgroup), in the order
    ``(q, n, variant, |K|, K)``."""
    chosen = _parse_checks(checks)
    if max_order > ARITHMETIC_ORDER_BOUND:
        raise CensusError(f"max order {max_order} exceeds {ARITHMETIC_ORDER_BOUND}")
    if max_order > AUT_ORDER_BOUND and AUT_CHECKS & set(chosen):
        raise CensusError(
            f"automorphism checks need max order <= {AUT_ORDER_BOUND}; drop {sorted(AUT_CHECKS & set(chosen))}"
        )
    records: list[CensusRecord] = []
    for q, n in dickson_pairs(max_order):
        for v in range(count_dickson_nearfields(q, n)):
            nf = cached_nearfield(q, n, v, cache)
            for j, K in enumerate(nf.mult_group.subgroups()):
                rec = CensusRecord(q=q, n=n, d=nf.pair.d, p=nf.p, variant=v, subgroup_index=j, k_order=len(K))
                try:
                    check_record(rec, nf, K, chosen)
                except Exception as exc:  # recorded, never aborts the run
                    log.warning("record %s/%s/%s/%s failed: %s", q, n, v, j, exc)
                    rec.error = f"{type(exc).__name__}: {exc}"
                records.append(rec)
    return records, summarize(records, max_order, chosen)


def summarize(records: list[CensusRecord], max_order: int, checks: tuple[str, ...]) -> dict:
    def count(attr, value=True):
        return sum(1 for r in records if getattr(r, attr) is value)

    return {
        "max_order": max_order,
        "checks": list(checks),
        "records": len(records),
        "failures": sum(1 for r in records if r.failed()),
        "errors": sum(1 for r in records if r.error is not None),
        "primitive": count("primitive"),
        "imprimitive": count("primitive", False),
        "aut_equals_TGbar": count("aut_equals_TGbar"),
        "zsigmondy_applicable": count("zsigmondy_applicable"),
        "field_reducible": count("field_reducible"),
    }


def report_json(records: list[CensusRecord], summary: dict) -> str:
    return json.dumps({"summary": summary, "records": [r.to_dict() for r in records]}, indent=1, sort_keys=False)


def report_csv(records: list[CensusRecord]) -> str:
    buf = io.StringIO()
    names = [f.name for f in fields(CensusRecord)]
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(names)
    for r in records:
        w.writerow(["" if getattr(r, k) is None else getattr(r, k) for k in names])
    return buf.getvalue()


__all__ = [
    "CHECKS",
    "CensusError",
    "CensusRecord",
    "check_record",
    "dickson_pairs",
    "report_csv",
    "report_json",
    "run_census",
    "summarize",
]
