"""Command line interface.

Exit status: 0 when every check passed, 1 when a check failed, 2 for usage
errors (bad arguments, invalid parameters, exceeded bounds).
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from .cache import TableCache, cached_nearfield, resolve_cache_dir
from .census import CHECKS, CensusError, report_csv, report_json, run_census
from .finite_field import FieldError
from .nearfield import (
    NearFieldError,
    count_dickson_nearfields,
    validate_dickson_pair,
    verify_nearfield_axioms,
)
from .numtheory import prime_power
from .perm_group import GroupError
from .scheme import (
    SchemeError,
    are_isomorphic,
    are_isomorphic_bruteforce,
    aut_bruteforce,
    aut_group,
    build_cyclotomic,
    is_primitive,
    scheme_linear_closure,
    verify_scheme_axioms,
)
from .search import SearchError
from .zsigmondy import ZsigmondyError, zsigmondy_primes

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _emit(obj) -> None:
    print(json.dumps(obj, indent=1))


def _cache(args) -> TableCache | None:
    d = resolve_cache_dir(getattr(args, "cache_dir", None))
    return TableCache(d) if d is not None else None


def _nearfield(args, q=None, n=None, variant=None):
    q = args.q if q is None else q
    n = args.n if n is None else n
    variant = args.variant if variant is None else variant
    if not validate_dickson_pair(q, n):
        raise UsageError(f"({q}, {n}) is not a Dickson pair")
    return cached_nearfield(q, n, variant, _cache(args))


def _scheme(args, q=None, n=None, variant=None, subgroup=None):
    nf = _nearfield(args, q, n, variant)
    subgroup = args.subgroup if subgroup is None else subgroup
    subs = nf.mult_group.subgroups()
    if not 0 <= subgroup < len(subs):
        raise UsageError(f"subgroup index {subgroup} out of range; {nf.label()} has {len(subs)} subgroups")
    return build_cyclotomic(nf, subs[subgroup])


def cmd_pair_check(args) -> int:
    q, n = args.q, args.n
    valid = validate_dickson_pair(q, n)
    pp = prime_power(q)
    _emit(
        {
            "q": q,
            "n": n,
            "valid": valid,
            "p": pp[0] if pp else None,
            "d": pp[1] if pp else None,
            "nearfield_count": count_dickson_nearfields(q, n) if valid else 0,
        }
    )
    return EXIT_OK if valid else EXIT_FAIL


def cmd_nf_count(args) -> int:
    if not validate_dickson_pair(args.q, args.n):
        raise UsageError(f"({args.q}, {args.n}) is not a Dickson pair")
    _emit({"q": args.q, "n": args.n, "count": count_dickson_nearfields(args.q, args.n)})
    return EXIT_OK


def cmd_nf_build(args) -> int:
    nf = _nearfield(args)
    report = verify_nearfield_axioms(nf)
    M = nf.mult_group
    _emit(
        {
            "label": nf.label(),
            "q": nf.q,
            "n": nf.n,
            "p": nf.p,
            "d": nf.pair.d,
            "variant": nf.variant,
            "unit": nf.unit,
            "order": nf.order,
            "modulus": list(nf.field.modulus),
            "generator": nf.field.generator,
            "coupling": [int(j) for j in nf.coupling],
            "mult_group_abelian": M.is_abelian(),
            "subgroup_count": len(M.subgroups()),
            "axioms": {name: ok for name, ok in report.results.items()},
        }
    )
    if args.table:
        nf.export_table_csv(args.table)
    return EXIT_OK if report.passed else EXIT_FAIL


def cmd_scheme_build(args) -> int:
    cs = _scheme(args)
    check = verify_scheme_axioms(cs.scheme)
    out = {
        "label": cs.label(),
        "N": cs.N,
        "rank": cs.rank,
        "valency": cs.valency,
        "K": list(cs.K),
        "axioms_ok": check.ok,
        "witness": str(check.witness) if check.witness else None,
        "primitive": is_primitive(cs.scheme) if check.ok else None,
    }
    _emit(out)
    if args.json and check.ok:
        Path(args.json).write_text(cs.to_json() + "\n")
    return EXIT_OK if check.ok else EXIT_FAIL


def cmd_scheme_aut(args) -> int:
    cs = _scheme(args)
    A = aut_group(cs)
    out = {"label": cs.label(), "N": cs.N, "rank": cs.rank, "aut_order": A.order, "symmetric": A.is_full_symmetric}
    ok = True
    if not A.is_full_symmetric:
        out["linear_closure_order"] = scheme_linear_closure(cs).order
        out["generators"] = [list(g) for g in A.generators]
    if args.oracle:
        B = aut_bruteforce(cs.scheme)
        same = A.equals(B) if not A.is_full_symmetric else B.order == A.order
        out["oracle_order"] = B.order
        out["oracle_agrees"] = same
        ok = same
    _emit(out)
    return EXIT_OK if ok else EXIT_FAIL


def _parse_scheme_arg(text: str) -> tuple[int, int, int, int]:
    try:
        parts = [int(x) for x in text.split(":")]
    except ValueError:
        parts = []
    if len(parts) != 4:
        raise UsageError(f"scheme argument {text!r} must be Q:N:VARIANT:SUBGROUP")
    return tuple(parts)  # type: ignore[return-value]


def cmd_scheme_iso(args) -> int:
    c1 = _scheme(args, *_parse_scheme_arg(args.first))
    c2 = _scheme(args, *_parse_scheme_arg(args.second))
    if c1.N != c2.N:
        _emit({"isomorphic": False, "reason": "different orders"})
        return EXIT_OK
    res = are_isomorphic(c1, c2)
    out = {
        "first": c1.label(),
        "second": c2.label(),
        "isomorphic": res.isomorphic,
        "method": res.method,
        "witness": list(res.witness) if res.witness is not None else None,
    }
    ok = True
    if args.oracle:
        bf = are_isomorphic_bruteforce(c1.scheme, c2.scheme)
        out["oracle_isomorphic"] = bf.isomorphic
        ok = bf.isomorphic == res.isomorphic
    _emit(out)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_zsig(args) -> int:
    primes = zsigmondy_primes(args.q, args.n, args.min)
    _emit({"q": args.q, "n": args.n, "min": args.min, "primes": primes})
    return EXIT_OK


def cmd_census(args) -> int:
    checks = args.checks.split(",") if args.checks else None
    records, summary = run_census(args.max_order, checks, _cache(args))
    text = report_json(records, summary)
    if args.out:
        Path(args.out).write_text(text + "\n")
    else:
        print(text)
    if args.csv:
        Path(args.csv).write_text(report_csv(records))
    if args.out:
        _emit(summary)
    return EXIT_OK if summary["failures"] == 0 else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="nearcyc", description=__doc__.splitlines()[0])
    ap.add_argument("--cache-dir", help="table cache directory (overrides $NEARCYC_CACHE_DIR)")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    pair = sub.add_parser("pair", help="Dickson pairs").add_subparsers(dest="action", required=True)
    p = pair.add_parser("check", help="test whether (Q, N) is a Dickson pair")
    p.add_argument("q", type=int)
    p.add_argument("n", type=int)
    p.set_defaults(func=cmd_pair_check)

    nf = sub.add_parser("nf", help="Dickson near-fields").add_subparsers(dest="action", required=True)
    p = nf.add_parser("build", help="build a near-field and verify its axioms")
    p.add_argument("q", type=int)
    p.add_argument("n", type=int)
    p.add_argument("--variant", type=int, default=0)
    p.add_argument("--table", help="write the multiplication table (as logs) to this CSV file")
    p.set_defaults(func=cmd_nf_build)
    p = nf.add_parser("count", help="number of non-isomorphic near-fields for (Q, N)")
    p.add_argument("q", type=int)
    p.add_argument("n", type=int)
    p.set_defaults(func=cmd_nf_count)

    sch = sub.add_parser("scheme", help="cyclotomic schemes").add_subparsers(dest="action", required=True)
    for name, func, helptext in (
        ("build", cmd_scheme_build, "build a scheme and verify its axioms"),
        ("aut", cmd_scheme_aut, "automorphism group of a scheme"),
    ):
        p = sch.add_parser(name, help=helptext)
        p.add_argument("q", type=int)
        p.add_argument("n", type=int)
        p.add_argument("--variant", type=int, default=0)
        p.add_argument("--subgroup", type=int, required=True, help="index in the subgroup enumeration order")
        if name == "build":
            p.add_argument("--json", help="write the full scheme (colors, intersection numbers) here")
        else:
            p.add_argument("--oracle", action="store_true", help="also run the backtracking oracle")
        p.set_defaults(func=func)
    p = sch.add_parser("iso", help="isomorphism test of two schemes given as Q:N:VARIANT:SUBGROUP")
    p.add_argument("first")
    p.add_argument("second")
    p.add_argument("--oracle", action="store_true", help="also run the backtracking oracle")
    p.set_defaults(func=cmd_scheme_iso)

    p = sub.add_parser("zsig", help="Zsigmondy primes for (Q, N)")
    p.add_argument("q", type=int)
    p.add_argument("n", type=int)
    p.add_argument("--min", type=int, default=0, help="only primes larger than this")
    p.set_defaults(func=cmd_zsig)

    p = sub.add_parser("census", help="check every scheme up to an order bound")
    p.add_argument("--max-order", type=int, required=True)
    p.add_argument("--checks", help=f"comma separated subset of {','.join(CHECKS)}")
    p.add_argument("--out", help="write the JSON report here instead of stdout")
    p.add_argument("--csv", help="also write the records as CSV")
    p.set_defaults(func=cmd_census)
    return ap


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except (UsageError, CensusError, NearFieldError, FieldError, GroupError, SchemeError, SearchError, ZsigmondyError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
