"""Totally complex quartic corpus from a coefficient box and the pi_S counts.

Candidates are monic quartics with |c_i| <= coeff_bound.  A polynomial whose
reduction mod some p in S has two coprime factors is dropped before any
field arithmetic: by Hensel's lemma the factorisation lifts to Z_p, so p
has at least two places in the field.  Survivors are deduplicated up to
isomorphism and every field is represented by its maximal order.
"""

import itertools
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field as dc_field

from ..arith import IntPoly
from ..arith.intpoly import is_squarefree, sturm_count
from ..arith.modp import factor_mod_p
from ..arith.primes import primes_up_to
from ..canonical import canonical_key
from ..class_group import CLASS_BOUND_CEILING, class_number
from ..errors import (
    GeodesicOrdersError,
    Inconclusive,
    InvalidArgument,
    InvalidS,
    NotAField,
    PreconditionViolated,
    UnsupportedDegree,
)
from ..fields import is_isomorphic, make_field
from ..forms import class_number_forms
from ..orders import maximal_order
from ..splitting import classify_field, lambda_S, splitting_type, validate_S
from ..units import fundamental_unit, kappa, nu, torsion_units
from .records import CensusTable, OrderInvariants, ingest_table, invariants_csv, parse_rows

PREFILTER_PRIMES = tuple(primes_up_to(49))
ORDER_KIND = "maximal"


@dataclass
class Quarantined:
    polynomial: str
    reason: str


@dataclass
class FieldDetails:
    """What a census row was computed from; kept in memory only."""

    polynomial: IntPoly
    polynomials: list
    unit_data: object = None
    torsion_minpolys: tuple = ()
    torsion_orders: tuple = ()

    def order(self):
        return maximal_order(make_field(self.polynomial))


@dataclass
class QuarticCorpus:
    S: tuple
    coeff_bound: int
    rows: list
    details: dict = dc_field(default_factory=dict)
    quarantine: list = dc_field(default_factory=list)
    inconclusive: list = dc_field(default_factory=list)
    metadata: dict = dc_field(default_factory=dict)

    def keys(self):
        return [r.field_key for r in self.rows]

    def cc_rows(self):
        return [r for r in self.rows if r.classification == "Cc"]

    def to_csv(self):
        return invariants_csv(self.rows)


def certified_regulator(coeff_bound):
    """Largest R for which every C^c field of regulator <= R has a defining polynomial in the box.

    A fundamental unit eps of a C^c field generates it.  With |sigma(eps)| = e^{+-R/2}
    on the two conjugate pairs and c = 2 cosh(R/2), every coefficient of its
    minimal polynomial is at most max(c^2 + 2, 2c); invert at coeff_bound.
    """
    B = coeff_bound
    c = min(math.sqrt(max(B - 2, 0)), B / 2)
    return 2 * math.acosh(c / 2) if c >= 2 else 0.0


def _single_factor_residues(p):
    keep = set()
    for r in itertools.product(range(p), repeat=4):
        if len(factor_mod_p(IntPoly(list(r) + [1]), p)) == 1:
            keep.add(r)
    return keep


def candidate_polynomials(coeff_bound, S, prefilter=True):
    """Monic quartics in the box that survive the mod-p test for every p in S."""
    tables = {p: _single_factor_residues(p) for p in S} if prefilter else {}
    S = S if prefilter else ()
    rng = range(-coeff_bound, coeff_bound + 1)
    for cs in itertools.product(rng, repeat=4):
        if cs[0] == 0:
            continue
        if all(tuple(c % p for c in cs) in tables[p] for p in S):
            yield IntPoly(list(cs) + [1])


def _split_signature(order, p):
    return tuple(sorted(splitting_type(order, p).pairs))


def _dedupe(found):
    """Group (field, order, poly) triples into isomorphism classes.

    Prefilter: field discriminant, then splitting types at p < 50 computed
    only on collisions; surviving collisions are settled by an explicit
    embedding test.
    """
    by_disc = {}
    for item in found:
        by_disc.setdefault(item[1].disc, []).append(item)
    classes = []
    for disc in sorted(by_disc, key=lambda d: (abs(d), d)):
        group = by_disc[disc]
        if len(group) == 1:
            classes.append([group[0]])
            continue
        sig = {}
        for item in group:
            s = tuple(_split_signature(item[1], p) for p in PREFILTER_PRIMES)
            sig.setdefault(s, []).append(item)
        for s in sorted(sig):
            reps = []
            for item in sig[s]:
                for cls in reps:
                    if is_isomorphic(cls[0][0], item[0]):
                        cls.append(item)
                        break
                else:
                    reps.append([item])
            classes.extend(reps)
    return classes


def torsion_profile(order):
    """(mu, generator, orders of all torsion elements, degree-4 minimal polynomials)."""
    mu, gen, tors = torsion_units(order)
    orders = []
    minpolys = set()
    for k, t in enumerate(tors):
        orders.append(mu // math.gcd(mu, k))
        cp = order.charpoly(t)
        if is_squarefree(cp):
            minpolys.add(str(cp))
    return mu, gen, tuple(sorted(set(orders))), tuple(sorted(minpolys))


def _field_invariants(task):
    """Worker: all invariants of the maximal order of one field."""
    coeffs, S, ceiling, key, cls = task
    f = make_field(list(coeffs))
    order = maximal_order(f)
    inv = OrderInvariants(field_key=key, disc=order.disc, r=f.signature[0], s=f.signature[1], classification=cls)
    mu, _, tors_orders, minpolys = torsion_profile(order)
    inv.mu = mu
    ud = None
    note = None
    if cls in ("Cc", "Cr"):
        ud = fundamental_unit(order)
        inv.regulator = ud.regulator
        inv.kappa = kappa(order, ud)
        inv.nu = nu(order, ud)
        inv.lambda_s = lambda_S(order, S)
        try:
            inv.class_h = class_number(order, ceiling=ceiling)[0]
        except Inconclusive as exc:
            note = f"class number inconclusive: {exc}"
    return inv, ud, tors_orders, minpolys, note


def _run_tasks(tasks, threads):
    if threads > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=threads) as ex:
            futures = [ex.submit(_field_invariants, t) for t in tasks]
            out = []
            for fut in futures:
                try:
                    out.append(fut.result())
                except GeodesicOrdersError as exc:
                    out.append(exc)
            return out
    out = []
    for t in tasks:
        try:
            out.append(_field_invariants(t))
        except GeodesicOrdersError as exc:
            out.append(exc)
    return out


def cache_path(cache_dir, S, ceiling):
    tag = "-".join(str(p) for p in S)
    return os.path.join(cache_dir, f"quartic_S{tag}_{ORDER_KIND}_ceiling{format(ceiling, 'g')}.csv")


def _load_cache(path):
    if not path or not os.path.exists(path):
        return {}
    return {r.field_key: r for r in ingest_table(path, validate=False)}


def _append_cache(path, rows):
    if not path or not rows:
        return
    os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
    text = invariants_csv(rows)
    if os.path.exists(path) and os.path.getsize(path) > 0:
        text = text.split("\n", 1)[1]
    # single writer: append only, never rewrite earlier rows
    with open(path, "a", newline="\n", encoding="utf-8") as fh:
        fh.write(text)


def quartic_corpus(
    coeff_bound,
    S,
    polynomials=None,
    threads=1,
    class_bound_ceiling=200.0,
    cache_dir=None,
    include_not_in_c=False,
):
    """Deduplicated totally complex quartic fields from the coefficient box.

    ``polynomials`` replaces the box enumeration by an explicit list (used to
    re-run the corpus on its own output).  Fields outside C(S) are normally
    removed by the mod-p prefilter; ``include_not_in_c`` keeps them as NotInC
    rows.  Per-field failures go to the quarantine list with their reason
    instead of aborting the run.
    """
    S = tuple(validate_S(S))
    if coeff_bound is not None and coeff_bound < 1:
        raise InvalidArgument("coeff_bound must be positive")
    counts = {"candidates": 0, "totally_complex": 0, "reducible": 0}
    quarantine = []
    found = []
    classes_of = {}
    if polynomials is not None:
        source = (p if isinstance(p, IntPoly) else IntPoly.from_key(p) if isinstance(p, str) else IntPoly(p) for p in polynomials)
    else:
        source = candidate_polynomials(coeff_bound, S, prefilter=not include_not_in_c)
    for f in source:
        counts["candidates"] += 1
        if f.degree != 4 or not f.is_monic():
            quarantine.append(Quarantined(str(f), "not a monic quartic"))
            continue
        if sturm_count(f) != 0:
            continue
        counts["totally_complex"] += 1
        try:
            fld = make_field(f)
        except (NotAField, UnsupportedDegree):
            counts["reducible"] += 1
            continue
        try:
            cls = classify_field(fld, S)
            order = maximal_order(fld)
        except GeodesicOrdersError as exc:
            quarantine.append(Quarantined(str(f), f"{type(exc).__name__}: {exc}"))
            continue
        found.append((fld, order, f))
        classes_of[f] = cls

    classes = _dedupe(found)
    cache_file = cache_path(cache_dir, S, class_bound_ceiling) if cache_dir else None
    cached = _load_cache(cache_file)
    reps = []
    for members in classes:
        fld, order, f = members[0]
        key = canonical_key(fld)
        reps.append((key, fld, order, [m[2] for m in members], classes_of[f]))

    tasks = []
    hits = {}
    for key, fld, order, polys, cls in reps:
        c = cached.get(key)
        if c is not None and c.disc == order.disc and c.classification == cls:
            hits[key] = c
            continue
        tasks.append((tuple(fld.min_poly.coeffs), S, class_bound_ceiling, key, cls))
    results = dict(zip((t[3] for t in tasks), _run_tasks(tasks, threads)))

    rows = []
    details = {}
    fresh = []
    inconclusive = 0
    inconclusive_notes = []
    for key, fld, order, polys, cls in reps:
        det = FieldDetails(polynomial=fld.min_poly, polynomials=sorted(str(p) for p in polys))
        if key in hits:
            inv = hits[key]
            inv.provenance = "computed"
        else:
            res = results[key]
            if isinstance(res, Exception):
                quarantine.append(Quarantined(str(fld.min_poly), f"{type(res).__name__}: {res}"))
                continue
            inv, ud, tors_orders, minpolys, note = res
            det.unit_data = ud
            det.torsion_orders = tors_orders
            det.torsion_minpolys = minpolys
            if note is not None:
                inconclusive_notes.append(Quarantined(str(fld.min_poly), note))
            elif cls != "NotInC":
                fresh.append(inv)
        if cls != "NotInC" and inv.class_h is None:
            inconclusive += 1
        rows.append(inv)
        details[key] = det
    _append_cache(cache_file, fresh)

    rows.sort(key=lambda r: (abs(r.disc), r.field_key))
    by_class = {c: sum(1 for r in rows if r.classification == c) for c in ("Cc", "Cr", "NotInC")}
    meta = {
        "S": ",".join(map(str, S)),
        "coeff_bound": coeff_bound if polynomials is None else "explicit",
        "order_kind": ORDER_KIND,
        "prefilter": "off" if include_not_in_c else "on",
        "class_bound_ceiling": class_bound_ceiling,
        "certified_regulator": certified_regulator(coeff_bound) if polynomials is None else 0.0,
        "box_polynomials": (2 * coeff_bound + 1) ** 3 * 2 * coeff_bound if polynomials is None else len(polynomials),
        "candidates": counts["candidates"],
        "totally_complex": counts["totally_complex"],
        "reducible": counts["reducible"],
        "fields_Cc": by_class["Cc"],
        "fields_Cr": by_class["Cr"],
        "fields_NotInC": by_class["NotInC"],
        "quarantined": len(quarantine),
        "inconclusive": inconclusive,
        "cache_hits": len(hits),
    }
    return QuarticCorpus(
        S=S, coeff_bound=coeff_bound, rows=rows, details=details, quarantine=quarantine, inconclusive=inconclusive_notes, metadata=meta
    )


def _check_S(corpus, S):
    S = tuple(validate_S(S))
    if tuple(corpus.S) != S:
        raise InvalidS(f"corpus was built for S={list(corpus.S)}, not {list(S)}")
    return S


def _default_checkpoints(rows, step=0.5):
    top = max((r.regulator for r in rows), default=step)
    n = int(math.ceil(top / step))
    return [step * k for k in range(1, n + 1)]


def _census(corpus, S, checkpoints, weight, divisor, name):
    _check_S(corpus, S)
    rows = [r for r in corpus.cc_rows() if r.class_h is not None]
    pairs = sorted((r.regulator, weight(r)) for r in rows)
    cps = sorted(checkpoints) if checkpoints else _default_checkpoints(rows)
    r_cert = float(corpus.metadata.get("certified_regulator", 0.0))
    out = []
    total = 0.0
    terms = []
    j = 0
    for x in cps:
        if x <= 0:
            raise InvalidArgument("checkpoints must be positive")
        while j < len(pairs) and pairs[j][0] <= x:
            terms.append(pairs[j][1])
            j += 1
        total = math.fsum(terms)
        target = math.exp(4 * x) / (divisor * x)
        out.append((x, total, target, total / target, x > r_cert))
    meta = dict(corpus.metadata)
    meta["census"] = name
    meta["lower_bound_note"] = "non-maximal orders are not enumerated; rows with lower_bound=1 may also miss fields"
    return CensusTable(["x", "partial_sum", "target", "ratio", "lower_bound"], out, meta)


def pi_S_census(corpus, S, checkpoints=None):
    """Sum of lambda_S h over C^c orders with R <= x, against e^{4x}/(8x)."""
    return _census(corpus, S, checkpoints, lambda r: r.lambda_s * r.class_h, 8, "pi_S")


def pi_tilde_S_census(corpus, S, checkpoints=None):
    """Sum of nu lambda_S h over C^c orders with R <= x, against e^{4x}/(2x)."""
    return _census(corpus, S, checkpoints, lambda r: r.nu * r.lambda_s * r.class_h, 2, "pi_tilde_S")


def compute_invariants(minpoly, S=None, class_bound_ceiling=CLASS_BOUND_CEILING):
    """Invariant row for the maximal order of the field defined by ``minpoly``.

    Quadratic input gives the maximal order O_D of the quadratic field; a
    prime set classifies quartic fields and supplies lambda_S.
    """
    f = minpoly if isinstance(minpoly, IntPoly) else IntPoly.from_key(minpoly)
    fld = make_field(f)
    order = maximal_order(fld)
    r, s = fld.signature
    key = canonical_key(fld) if fld.degree == 4 else fld.min_poly.key()
    inv = OrderInvariants(field_key=key, disc=order.disc, r=r, s=s)
    note = None
    if fld.degree == 2:
        D = order.disc
        inv.class_h = class_number_forms(D)[0]
        inv.mu = torsion_units(order)[0]
        if D > 0:
            inv.regulator = fundamental_unit(order).regulator
        return inv, note
    inv.mu = torsion_units(order)[0]
    cls = classify_field(fld, S) if S else None
    if S:
        validate_S(S)
    inv.classification = cls
    if fld.signature != (0, 2):
        raise PreconditionViolated("quartic invariants need a totally complex field")
    ud = fundamental_unit(order)
    inv.regulator = ud.regulator
    inv.kappa = kappa(order, ud)
    inv.nu = nu(order, ud)
    if cls in ("Cc", "Cr"):
        inv.lambda_s = lambda_S(order, S)
    try:
        inv.class_h = class_number(order, ceiling=class_bound_ceiling)[0]
    except Inconclusive as exc:
        note = str(exc)
    return inv, note


def read_corpus_csv(text):
    """Rows of an emitted corpus, for re-ingestion."""
    return parse_rows(text, validate=False)
