"""Command-line interface.

Exit codes: 0 success, 2 no bound available at the query point, 1 error.
All values print as exact rationals; `plot` emits CSV with 12-significant-
digit decimals (the only place floating point appears).
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction

from . import beta as beta_mod
from . import database as db_mod
from . import energy as energy_mod
from . import expairs as ep
from . import mu as mu_mod
from . import zero_density as zd_mod
from .num import NEG_INF, POS_INF, Q, qdec, qparse, qstr

NO_BOUND = 2


def _load_db(args) -> db_mod.Database:
    if getattr(args, "db", None):
        return db_mod.Database.load(args.db)
    return db_mod.default_database()


def _print_bound(value, provenance, conditional_note: str = "") -> int:
    if value is None:
        print("no bound")
        return NO_BOUND
    tail = f"  [{provenance}]" if provenance else ""
    print(f"{qstr(value)}{tail}{conditional_note}")
    return 0


def cmd_beta(args) -> int:
    db = _load_db(args)
    hyps = db_mod.beta_hypotheses(db, args.conditional)
    env = beta_mod.build_beta_envelope(hyps or None)
    if args.what == "table":
        if args.format == "csv":
            print("lo,hi,const,slope,provenance")
            for p in env.pieces:
                print(f"{qstr(p.lo)},{qstr(p.hi)},{qstr(p.form.const)},"
                      f"{qstr(p.form.coeff('alpha'))},{p.provenance}")
        else:
            print(env.serialize())
            rep = beta_mod.table_reproduction_report(env)
            print(f"# published rows matched: {len(rep.matched_rows)}/18"
                  f"{'' if not rep.missing_rows else f', missing {rep.missing_rows}'}")
            print(f"# gap (199/716, 120/419) covered by: {rep.gap_provenance}")
            for x, left, right in rep.discontinuities:
                print(f"# jump at {qstr(x)}: {qstr(left)} -> {qstr(right)}")
        return 0
    alpha = qparse(args.point)
    value, prov = db_mod.query_beta(db, alpha, args.conditional)
    return _print_bound(value, prov)


def cmd_pairs(args) -> int:
    db = _load_db(args)
    if args.what == "list":
        for h in db.records("exponent-pair"):
            cond = " (conditional)" if db.is_conditional(h.hid) else ""
            print(f"pair k={h.get('k')} l={h.get('l')} cert={h.hid}{cond}")
        return 0
    if args.what == "closure":
        out = db_mod.expand_closure(db, depth=args.depth)
        fresh = [h for h in out.records("exponent-pair") if h.hid not in db]
        for h in out.records("exponent-pair"):
            mark = " *new*" if h.hid not in db else ""
            print(f"pair k={h.get('k')} l={h.get('l')} cert={h.hid}{mark}")
        print(f"# {len(fresh)} new pairs at depth {args.depth}")
        return 0
    # verify: replay certificates and triangle membership
    problems = []
    for h in db.records("exponent-pair"):
        try:
            ep.ExponentPair(qparse(h.get("k")), qparse(h.get("l")))
        except ep.InvalidPair as exc:
            problems.append(f"{h.hid}: {exc}")
        if h.rule:
            if not db_mod.replay(db, h):
                problems.append(f"{h.hid}: certificate replay failed")
    if problems:
        print("\n".join(problems))
        return 1
    print(f"all {len(db.records('exponent-pair'))} pair certificates verified")
    return 0


def cmd_mu(args) -> int:
    db = _load_db(args)
    value, prov = db_mod.query_mu(db, qparse(args.sigma), args.conditional)
    return _print_bound(value, prov)


def cmd_lv(args) -> int:
    db = _load_db(args)
    value, ids = db_mod.query_lv(db, qparse(args.sigma), qparse(args.tau),
                                 zeta=args.zeta, include_conditional=args.conditional)
    if value is None:
        print("no bound")
        return NO_BOUND
    print(f"{qstr(value)}  [{'; '.join(ids)}]")
    return 0


def cmd_density(args) -> int:
    db = _load_db(args)
    if args.what == "table":
        grid = ([qparse(s) for s in args.sigma_grid] if args.sigma_grid
                else sorted({qparse(h.get("lo")) for h in db.records("density-bound")}
                            | {qparse(h.get("hi")) for h in db.records("density-bound")}))
        grid = [s for s in grid if Q(1, 2) <= s < 1]
        rows = []
        for s in grid:
            v, hid = db_mod.query_density(db, s, args.conditional)
            rows.append((s, v, hid))
        if args.format == "csv":
            print("sigma,bound,provenance")
            for s, v, hid in rows:
                print(f"{qstr(s)},{qstr(v) if v is not None else ''},{hid}")
        else:
            for s, v, hid in rows:
                print(f"A({qstr(s)}) <= {qstr(v) if v is not None else '?'}"
                      f"  [{hid}]")
        return 0
    sigma = qparse(args.sigma)
    value, hid = db_mod.query_density(db, sigma, args.conditional)
    code = _print_bound(value, hid)
    if args.trace and hid:
        print(db.trace(hid).render())
    return code


def cmd_energy(args) -> int:
    db = _load_db(args)
    if args.what == "table":
        print("# additive-energy exponent table: A*(sigma)(1-sigma) bounds")
        for rec in energy_mod.ENERGY_TABLE:
            kind = "derived" if rec.hid == "astar-i" else "data-backed"
            print(f"{rec.hid}  [{qstr(rec.lo)}, {qstr(rec.hi)}]  ({kind}) "
                  f"value at midpoint: {qstr(rec.value((rec.lo + rec.hi) / 2))}")
        problems = energy_mod.check_energy_records()
        print("# record consistency:", "ok" if not problems else "; ".join(problems))
        return 0
    sigma = qparse(args.sigma)
    if args.tau0:
        d = energy_mod.derive_addest_part_i(sigma) if not args.tau0 else None
    if Q(3, 4) <= sigma <= Q(5, 6):
        d = energy_mod.derive_addest_part_i(sigma)
        print(f"A*({qstr(sigma)})(1-sigma) <= {qstr(d.bound_times_one_minus_sigma)}"
              f"  (derived, tau0={qstr(d.tau0)})")
        return 0
    value, hid = db_mod.query_energy(db, sigma)
    return _print_bound(value, hid)


def cmd_db(args) -> int:
    db = _load_db(args)
    if args.what == "check":
        problems = db.check()
        if problems:
            print("\n".join(problems))
            return 1
        print(f"{len(db)} records; all rule applications replay")
        return 0
    if args.what == "save":
        db.save(args.path)
        print(f"wrote {len(db)} records to {args.path}")
        return 0
    # load: parse and report
    loaded = db_mod.Database.load(args.path)
    print(f"loaded {len(loaded)} records from {args.path}")
    return 0


def cmd_trace(args) -> int:
    db = _load_db(args)
    if args.id not in db:
        print(f"no record {args.id!r}")
        return NO_BOUND
    print(db.trace(args.id).render())
    return 0


def cmd_plot(args) -> int:
    db = _load_db(args)
    print("x,value,provenance")
    if args.kind == "beta":
        env = beta_mod.build_beta_envelope(
            db_mod.beta_hypotheses(db, args.conditional) or None)
        for p in env.pieces:
            for x in (p.lo, (p.lo + p.hi) / 2, p.hi):
                print(f"{qdec(x)},{qdec(p.value(x))},{p.provenance}")
    elif args.kind == "mu":
        bound = mu_mod.best_mu(db_mod.mu_hypotheses(db, args.conditional))
        for p in bound.pieces:
            for x in (p.lo, (p.lo + p.hi) / 2, p.hi):
                print(f"{qdec(x)},{qdec(p.value(x))},{p.provenance}")
    elif args.kind == "density":
        lows = {qparse(h.get("lo")) for h in db.records("density-bound")}
        his = {qparse(h.get("hi")) for h in db.records("density-bound")}
        for s in sorted(lows | his):
            if not Q(1, 2) <= s < 1:
                continue
            v, hid = db_mod.query_density(db, s, args.conditional)
            if v is not None:
                print(f"{qdec(s)},{qdec(v)},{hid}")
    else:
        print(f"unknown plot kind {args.kind!r}", file=sys.stderr)
        return 1
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="antedb",
        description="exact-arithmetic database of zeta exponent bounds")
    ap.add_argument("--db", help="database file (default: built-in records)")
    ap.add_argument("--conditional", action="store_true",
                    help="include conjectural hypotheses")
    ap.add_argument("--max-power", type=int, default=1, metavar="K",
                    help="power-raising closure bound for derivations")
    ap.add_argument("--depth", type=int, default=4, metavar="D",
                    help="closure depth for pair expansion")
    ap.add_argument("--format", choices=("text", "csv"), default="text")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("beta", help="beta(alpha) bounds")
    p.add_argument("what", choices=("table", "at"))
    p.add_argument("point", nargs="?", help="alpha as p/q (for `at`)")
    p.set_defaults(func=cmd_beta)

    p = sub.add_parser("pairs", help="exponent pairs")
    p.add_argument("what", choices=("list", "closure", "verify"))
    p.set_defaults(func=cmd_pairs)

    p = sub.add_parser("mu", help="mu(sigma) bounds")
    p.add_argument("what", choices=("at",))
    p.add_argument("sigma")
    p.set_defaults(func=cmd_mu)

    p = sub.add_parser("lv", help="large-value exponent bounds")
    p.add_argument("what", choices=("at",))
    p.add_argument("sigma")
    p.add_argument("tau")
    p.add_argument("--zeta", action="store_true")
    p.set_defaults(func=cmd_lv)

    p = sub.add_parser("density", help="zero-density exponent bounds")
    p.add_argument("what", choices=("table", "at"))
    p.add_argument("sigma", nargs="?")
    p.add_argument("--trace", action="store_true")
    p.add_argument("--sigma-grid", nargs="*", metavar="p/q")
    p.set_defaults(func=cmd_density)

    p = sub.add_parser("energy", help="additive-energy exponent bounds")
    p.add_argument("what", choices=("table", "at"))
    p.add_argument("sigma", nargs="?")
    p.add_argument("--tau0", metavar="p/q")
    p.set_defaults(func=cmd_energy)

    p = sub.add_parser("db", help="database file operations")
    p.add_argument("what", choices=("load", "save", "check"))
    p.add_argument("path", nargs="?")
    p.set_defaults(func=cmd_db)

    p = sub.add_parser("trace", help="print the proof trace of a record")
    p.add_argument("id")
    p.set_defaults(func=cmd_trace)

    p = sub.add_parser("plot", help="emit decimal CSV samples")
    p.add_argument("kind", choices=("beta", "mu", "density"))
    p.set_defaults(func=cmd_plot)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, db_mod.DatabaseError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
