"""Command-line interface.

Exit codes: 0 success, 1 a verification check failed, 2 invalid input,
3 data conflict, 4 the output contains inconclusive computations.
"""

import argparse
import sys

from .census.config import load_config
from .census.quadratic import gauss_siegel_census, quadratic_key, sarnak_census
from .census.quartic import compute_invariants, pi_S_census, pi_tilde_S_census, quartic_corpus
from .census.records import OrderInvariants, cross_check, emit_csv, ingest_table
from .errors import DataConflict, GeodesicOrdersError, InternalError, ParseError
from .forms import batch_class_data, check_discriminant, class_number_forms

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_INVALID = 2
EXIT_CONFLICT = 3
EXIT_INCONCLUSIVE = 4


def _add_common(p):
    p.add_argument("--config", help="key=value configuration file")
    p.add_argument("--threads", type=int)
    p.add_argument("--cache-dir", dest="cache_dir")
    p.add_argument("--class-bound-ceiling", dest="class_bound_ceiling", type=float)
    p.add_argument("--out", default="-", help="output path, '-' for stdout")


def build_parser():
    ap = argparse.ArgumentParser(prog="geodesic-orders", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    census = sub.add_parser("census", help="run a counting census")
    csub = census.add_subparsers(dest="kind", required=True)
    gs = csub.add_parser("quadratic-gs", help="partial sums of h R against the Gauss-Siegel main term")
    gs.add_argument("--max-disc", dest="max_disc", type=int)
    gs.add_argument("--convention", choices=("narrow", "wide"), default="narrow")
    _add_common(gs)
    sn = csub.add_parser("quadratic-sarnak", help="class numbers summed by regulator")
    sn.add_argument("--max-regulator", dest="max_regulator", type=float)
    sn.add_argument("--convention", choices=("narrow", "wide"), default="wide")
    _add_common(sn)
    qc = csub.add_parser("quartic", help="quartic corpus from a coefficient box")
    qc.add_argument("--coeff-bound", dest="coeff_bound", type=int)
    qc.add_argument("--set", dest="set_S", help="comma-separated primes, e.g. 2,3")
    qc.add_argument("--table", choices=("invariants", "pi_S", "pi_tilde_S"), default="invariants")
    qc.add_argument("--include-not-in-c", action="store_true")
    _add_common(qc)

    inv = sub.add_parser("invariants", help="invariants of one maximal order")
    inv.add_argument("--minpoly", required=True, help="c0:c1:c2:c3:1 or c0:c1:1")
    inv.add_argument("--set", dest="set_S")
    _add_common(inv)

    ver = sub.add_parser("verify", help="run a verification suite")
    ver.add_argument("suite", choices=("rep",))

    ing = sub.add_parser("ingest", help="validate a table and cross-check it against computed values")
    ing.add_argument("path")
    ing.add_argument("--set", dest="set_S")
    _add_common(ing)

    em = sub.add_parser("emit", help="re-emit an invariant table in canonical form")
    em.add_argument("path")
    em.add_argument("--out", default="-")
    return ap


def _config(args):
    cfg = load_config(getattr(args, "config", None))
    over = {}
    for k in ("threads", "cache_dir", "class_bound_ceiling", "max_disc", "max_regulator", "coeff_bound", "set_S"):
        v = getattr(args, k, None)
        if v is not None:
            over[k] = v
    return cfg.override(**over)


def _census(args, cfg):
    if args.kind == "quadratic-gs":
        table = gauss_siegel_census(cfg.max_disc, convention=args.convention, threads=cfg.threads)
        emit_csv(table, args.out)
        return EXIT_OK
    if args.kind == "quadratic-sarnak":
        table = sarnak_census(cfg.max_regulator, convention=args.convention, threads=cfg.threads)
        emit_csv(table, args.out)
        return EXIT_OK
    corpus = quartic_corpus(
        cfg.coeff_bound,
        cfg.set_S,
        threads=cfg.threads,
        class_bound_ceiling=cfg.class_bound_ceiling,
        cache_dir=cfg.cache_dir,
        include_not_in_c=args.include_not_in_c,
    )
    for q in corpus.quarantine:
        print(f"quarantined {q.polynomial}: {q.reason}", file=sys.stderr)
    for q in corpus.inconclusive:
        print(f"inconclusive {q.polynomial}: {q.reason}", file=sys.stderr)
    if args.table == "invariants":
        emit_csv(corpus.rows, args.out)
    elif args.table == "pi_S":
        emit_csv(pi_S_census(corpus, cfg.set_S), args.out)
    else:
        emit_csv(pi_tilde_S_census(corpus, cfg.set_S), args.out)
    return EXIT_INCONCLUSIVE if corpus.metadata["inconclusive"] else EXIT_OK


def _invariants(args, cfg):
    S = cfg.set_S if args.set_S else None
    inv, note = compute_invariants(args.minpoly, S, class_bound_ceiling=cfg.class_bound_ceiling)
    emit_csv([inv], args.out)
    if note:
        print(f"inconclusive: {note}", file=sys.stderr)
        return EXIT_INCONCLUSIVE
    return EXIT_OK


def _verify(args):
    from .rep import verify_rep_suite

    failed = 0
    for name, ok, detail in verify_rep_suite():
        print(f"{'PASS' if ok else 'FAIL'} {name}: {detail}")
        failed += not ok
    return EXIT_OK if not failed else EXIT_VERIFY_FAILED


def computed_counterpart(row: OrderInvariants, S, ceiling):
    """Recompute the row's order: O_D for quadratic keys, the maximal order otherwise."""
    if len(row.field_key.split(":")) == 3:
        D = row.disc
        check_discriminant(D)
        if quadratic_key(D) != row.field_key:
            raise DataConflict(row.field_key, "disc", f"{D} is not the discriminant of this key's order")
        if D > 0:
            h, R, _ = batch_class_data(D, D)[D]
        else:
            h, R = class_number_forms(D)[0], None
        return OrderInvariants(field_key=row.field_key, disc=D, r=row.r, s=row.s, class_h=h, regulator=R)
    inv, _ = compute_invariants(row.field_key, S, class_bound_ceiling=ceiling)
    if inv.field_key != row.field_key:
        # the row was keyed by a non-canonical polynomial of the same field
        inv.field_key = row.field_key
    return inv


def _ingest(args, cfg):
    rows = ingest_table(args.path)
    S = cfg.set_S if args.set_S else None
    computed = []
    inconclusive = False
    for row in rows:
        c = computed_counterpart(row, S, cfg.class_bound_ceiling)
        if c.class_h is None:
            inconclusive = True
        computed.append(c)
    n = cross_check(rows, computed)
    print(f"ingested {len(rows)} rows, cross-checked {n}", file=sys.stderr)
    emit_csv(rows, args.out)
    return EXIT_INCONCLUSIVE if inconclusive else EXIT_OK


def _emit(args):
    rows = ingest_table(args.path, validate=False)
    emit_csv(rows, args.out)
    return EXIT_OK


def run(argv=None):
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        if args.command == "verify":
            return _verify(args)
        if args.command == "emit":
            return _emit(args)
        cfg = _config(args)
        if args.command == "census":
            return _census(args, cfg)
        if args.command == "invariants":
            return _invariants(args, cfg)
        return _ingest(args, cfg)
    except DataConflict as exc:
        print(f"data conflict: {exc}", file=sys.stderr)
        return EXIT_CONFLICT
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except InternalError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_VERIFY_FAILED
    except (GeodesicOrdersError, ValueError, OSError) as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID


def main(argv=None):
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
