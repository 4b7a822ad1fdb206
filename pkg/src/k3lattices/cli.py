"""Command-line front end: proof replay, inspection, searches, counts.

`verify` replays every finite computation behind the minimal-Picard-
number facts as a registry of independent claims and exits nonzero if
any executed claim fails; `inspect`, `search` and `count` expose the
library operations directly.  Exit codes: 0 all executed claims pass,
1 a claim failed, 2 usage or parse error.
"""

import argparse
import json
import random
import sys
import time
from dataclasses import dataclass

from . import binaryforms, eisenstein, picard, polarization
from .lattices import (BUILTIN_LATTICES, A2, LatticeParseError, U, U3,
                       load_lattice)
from .finitefield import field_build
from .polarization import BudgetExceeded
from .surfaces import (SURFACE_PRESETS, count_parallel, count_surface,
                       load_surface, surface_to_json, x21, x66)

DEFAULT_SEED = 66
DEFAULT_BOX = 100
DEFAULT_BUDGET = 10 ** 6  # field-point evaluations allowed per counting step

SCOPES = ("all", "d_gt_1", "d_eq_1", "lattice_background")


# ---------------------------------------------------------------------------
# claim registry


@dataclass(frozen=True)
class Claim:
    claim_id: str
    anchor: str  # the mathematical statement the claim certifies
    scopes: tuple[str, ...]
    runner: object  # ctx -> (status, evidence); status in pass/fail/skipped


def _claim_table_rows(ctx):
    rows = eisenstein.FIXED_LATTICE_TABLE
    seen = set()
    checks = []
    for row in rows:
        key = (row.points, row.curves)
        ok = (key not in seen
              and row.lattice.is_p_elementary(3)
              and row.lattice.is_hyperbolic())
        seen.add(key)
        checks.append({"points": row.points, "curves": row.curves,
                       "lattice": row.lattice_label, "model": row.model_kind,
                       "ok": ok})
    return all(c["ok"] for c in checks) and len(rows) == 6, {"rows": checks}


def _claim_eisenstein_lemma(ctx):
    rng = random.Random(ctx["seed"])
    instances = 200
    even_ok = starred_ok = 0
    starred_total = 0
    for _ in range(instances):
        lat, mat = eisenstein.random_eisenstein_lattice(rng)
        report = eisenstein.check_eisenstein_lemma(lat, mat)
        if report.rank_even:
            even_ok += 1
        if report.is_starred:
            starred_total += 1
            if report.three_elementary:
                starred_ok += 1
    a2_report = eisenstein.check_eisenstein_lemma(A2, eisenstein.A2_ROTATION)
    passed = (even_ok == instances and starred_ok == starred_total
              and a2_report.is_starred and a2_report.passed)
    return passed, {
        "instances": instances,
        "even_rank": even_ok,
        "starred": starred_total,
        "starred_3_elementary": starred_ok,
        "hexagonal_plane_is_starred": a2_report.is_starred,
    }


def _claim_u_polarizations(ctx):
    failures = []
    for d in range(2, 1001):
        report = polarization.exists_polarization(U, 2 * d)
        if report.found != (1, d):
            failures.append(d)
    d1 = polarization.exists_polarization(U, 2)
    passed = not failures and d1.found is None
    return passed, {
        "degrees_checked": "2d for d in 2..1000",
        "witness_form": "(1, d)",
        "failures": failures[:10],
        "degree_2_found": d1.found is not None,
        "degree_2_on_walls": d1.on_wall_count,
    }


def _claim_degree2_none(ctx):
    ru = polarization.exists_polarization(U, 2)
    ru3 = polarization.exists_polarization(U3, 2)
    wall_pairing = U.inner_product((1, 1), (1, -1))
    passed = (ru.found is None and ru.certified_global
              and ru3.found is None and ru3.certified_global
              and ru3.obstruction is not None and wall_pairing == 0)
    return passed, {
        "U": ru.to_json(),
        "U3": ru3.to_json(),
        "wall_pairing_e_plus_f_vs_root": wall_pairing,
    }


def _claim_mod3_obstruction(ctx):
    cert = polarization.mod_p_obstruction(BUILTIN_LATTICES["U3A2"], 2, 3)
    passed = (cert is not None and len(cert.rows) == 9
              and set(cert.attained) == {0, 1} and cert.target == 2)
    return passed, {"certificate": cert.to_json() if cert else None}


def _claim_ua2_infeasible(ctx):
    box = ctx["box"]
    rep = polarization.verify_ua2_infeasible(box)
    dropped = polarization.verify_ua2_infeasible(box, drop_constraint="H.E3")
    chain = polarization.verify_inequality_chain(10 ** 4, 100, seed=ctx["seed"])
    witness_found = (1, 3, -1, -1) in dropped.solutions
    passed = (rep.infeasible and rep.implication_violations == 0
              and witness_found and chain.passed and chain.sampled == 10 ** 4)
    return passed, {
        "box": box,
        "solutions_total": rep.solutions_total,
        "implication_checks": rep.implication_checks,
        "implication_violations": rep.implication_violations,
        "additive_variant_solutions": len(rep.additive_variant_solutions),
        "drop_HE3_total": dropped.solutions_total,
        "drop_HE3_witness_1_3_m1_m1": witness_found,
        "chain": chain.to_json(),
        "notes": list(rep.notes),
    }


def _claim_rank2_classification(ctx):
    classes = binaryforms.classify_rank2_even(9, p_filter=3)
    labels = sorted(c.label() or "?" for c in classes)
    indefinite = sorted(c.label() for c in classes if c.definiteness == "indefinite")
    definite = sorted(c.label() for c in classes if c.definiteness != "indefinite")
    passed = (indefinite == ["U", "U(3)"] and definite == ["A2", "A2(-1)"])
    return passed, {"classes": labels, "indefinite": indefinite,
                    "definite": definite}


def _naive_sextic_count(surface, field):
    """Direct solution count of w^2 = f6 over the projective plane."""
    consts = [(m, field.element(c)) for m, c in surface.coeffs]

    def f6(pt):
        acc = field.zero
        for (i, j, k), co in consts:
            term = co
            for _ in range(i):
                term = field.mul(term, pt[0])
            for _ in range(j):
                term = field.mul(term, pt[1])
            for _ in range(k):
                term = field.mul(term, pt[2])
            acc = field.add(acc, term)
        return acc

    reps = [(field.one, y, z) for y in field.elements() for z in field.elements()]
    reps += [(field.zero, field.one, z) for z in field.elements()]
    reps.append((field.zero, field.zero, field.one))
    total = 0
    for rep in reps:
        val = f6(rep)
        total += sum(1 for w in field.elements() if field.mul(w, w) == val)
    return total


def _claim_x21_count(ctx):
    budget = ctx["budget"]
    f11 = field_build(11)
    surface = x21(11)
    counted = count_surface(surface, f11, budget=budget)
    naive = _naive_sextic_count(surface, f11)
    t1 = counted.value - 1 - 121
    weil_ok = abs(t1) <= 22 * 11
    evidence = {
        "N1_character_sum": counted.value,
        "N1_direct_solve": naive,
        "t1": t1,
        "weil_bound_242": weil_ok,
        "weierstrass_q_squared": {},
        "skipped_extensions": [],
    }
    wq_ok = True
    for p in (5, 11, 17):
        field = field_build(p)
        c = count_surface(x66(p), field, convention="affine", budget=budget)
        evidence["weierstrass_q_squared"][str(p)] = c.value
        wq_ok = wq_ok and c.value == p * p
    # deeper extension counts run only within budget, and are never
    # required for the claim to pass
    for k in (2, 3):
        cost = 121 ** k + 11 ** k + 1
        if cost <= budget:
            ck = count_surface(surface, field_build(11, k), budget=budget)
            tk = ck.value - 1 - 11 ** (2 * k)
            evidence[f"N{k}"] = ck.value
            weil_ok = weil_ok and abs(tk) <= 22 * 11 ** k
        else:
            evidence["skipped_extensions"].append(k)
    passed = counted.value == naive and weil_ok and wq_ok
    return passed, evidence


def _claim_picard_pipeline(ctx):
    q = 11
    results = {}
    ok = True
    for m in (2, 6):
        poly = [1]
        for b in range(1, (22 - m) // 2 + 1):
            poly = picard.poly_mul(poly, [q * q, -b, 1])
        poly = picard.poly_mul(picard.poly_pow([-q, 1], m), poly)
        r = (22 - m + 1) // 2
        counts = picard.counts_from_charpoly(poly, q, r)
        traces = picard.trace_sequence(counts, q)
        report = picard.picard_upper_bound(traces, known_algebraic=[(1, m)])
        results[f"m={m}"] = report.upper_bound
        ok = ok and report.upper_bound == m
    try:
        picard.picard_upper_bound(picard.trace_sequence(
            [1 + q ** 2 + 22 * q], q))
        insufficient_raises = False
    except picard.ReconstructionError:
        insufficient_raises = True
    return ok and insufficient_raises, {
        "recovered_bounds": results,
        "insufficient_traces_error": insufficient_raises,
    }


def _claim_x21_full_run(ctx):
    """Trace collection at p = 11 deep enough to pin rho; desk-infeasible."""
    needed_k = 11  # ceil(22/2) traces without externally supplied classes
    cost = sum(121 ** k + 11 ** k + 1 for k in range(1, needed_k + 1))
    if cost > ctx["budget"]:
        return "skipped-long-running", {
            "reason": f"requires ~{cost:.3e} point evaluations "
                      f"(budget {ctx['budget']})",
            "recipe": "count X21 --p 11 --k 1..11, then feed the counts to "
                      "picard.trace_sequence and picard.picard_upper_bound; "
                      "supplying known algebraic classes as (order, mult) "
                      "blocks lowers the required k to ceil((22 - f)/2)",
        }
    counts = []
    for k in range(1, needed_k + 1):
        counts.append(count_surface(x21(11), field_build(11, k),
                                    budget=ctx["budget"]).value)
    traces = picard.trace_sequence(counts, 11)
    report = picard.picard_upper_bound(traces)
    return report.upper_bound >= 6, {"upper_bound": report.upper_bound,
                                     "counts": counts}


CLAIMS = (
    Claim("a-table-rows",
          "the six fixed-locus rows (n points, k curves) carry pairwise "
          "distinct even hyperbolic 3-elementary lattices",
          ("all", "lattice_background"), _claim_table_rows),
    Claim("b-eisenstein-lemma",
          "a lattice with a fixed-point-free order-3 isometry has even rank; "
          "if the isometry also fixes the discriminant group, the lattice is "
          "3-elementary",
          ("all", "lattice_background"), _claim_eisenstein_lemma),
    Claim("c-u-polarizations",
          "U contains the chamber-interior class e + d*f of square 2d for "
          "every d in 2..1000",
          ("all", "d_gt_1"), _claim_u_polarizations),
    Claim("d-degree2-none",
          "neither U nor U(3) contains a chamber-interior class of square 2",
          ("all", "d_eq_1"), _claim_degree2_none),
    Claim("e-mod3-obstruction",
          "y1^2 - y1*y2 + y2^2 never equals 2 mod 3, so U(3)+A2 represents "
          "no class of square 2",
          ("all", "d_eq_1"), _claim_mod3_obstruction),
    Claim("f-ua2-infeasible",
          "the degree-2 constraint system on U+A2 (positivity against the "
          "section and all fiber components) has no integer solutions",
          ("all", "d_eq_1"), _claim_ua2_infeasible),
    Claim("g-rank2-classification",
          "the even 3-elementary rank-2 lattices with |det| <= 9 are exactly "
          "U, U(3), A2 and A2(-1)",
          ("all", "lattice_background"), _claim_rank2_classification),
    Claim("h-x21-count",
          "the double-sextic count over F_11 matches a direct solve and the "
          "Weil bound; Weierstrass counts equal q^2 for q = 2 mod 3",
          ("all",), _claim_x21_count),
    Claim("i-picard-pipeline",
          "synthetic traces from (T - q)^m * C(T) recover the Picard upper "
          "bound m, and too few traces raise the documented error",
          ("all",), _claim_picard_pipeline),
    Claim("z-x21-rho6-run",
          "full extension-field trace collection for the double sextic at "
          "p = 11 (long-running; runs only when the budget allows)",
          ("all",), _claim_x21_full_run),
)


# ---------------------------------------------------------------------------
# subcommands


def _write_json(path, payload):
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _cmd_verify(args) -> int:
    scope = args.scope
    selected = [c for c in CLAIMS if scope in c.scopes]
    if any(c.claim_id == "f-ua2-infeasible" for c in selected) and args.box < 50:
        print("error: claim f-ua2-infeasible needs --box >= 50", file=sys.stderr)
        return 2
    ctx = {"box": args.box, "budget": args.budget, "seed": args.seed}
    results = []
    failed = 0
    for claim in selected:
        outcome = claim.runner(ctx)
        if isinstance(outcome[0], str):
            status, evidence = outcome
        else:
            status = "pass" if outcome[0] else "fail"
            evidence = outcome[1]
        if status == "fail":
            failed += 1
        results.append({"claim_id": claim.claim_id, "anchor": claim.anchor,
                        "status": status, "evidence": evidence})
        marker = {"pass": "PASS", "fail": "FAIL",
                  "skipped-long-running": "SKIP"}[status]
        print(f"[{marker}] {claim.claim_id}: {claim.anchor}")
    executed = [r for r in results if r["status"] != "skipped-long-running"]
    skipped = len(results) - len(executed)
    summary = (f"{len(executed) - failed}/{len(executed)} claims passed"
               + (f", {skipped} skipped (long-running)" if skipped else "")
               + f" [scope={scope} box={args.box} budget={args.budget}"
               + f" seed={args.seed}]")
    print(summary)
    if args.json:
        _write_json(args.json, {
            "claims": results, "summary": summary, "scope": scope,
            "box": args.box, "budget": args.budget, "seed": args.seed,
        })
    return 1 if failed else 0


def _cmd_inspect(args) -> int:
    lattice = load_lattice(args.lattice)
    det, sig = lattice.det_and_signature()
    dg = lattice.discriminant_group()
    flags = {p: lattice.is_p_elementary(p) for p in (2, 3)}
    roots = polarization.roots_in_box(lattice, args.box)
    lines = [
        f"lattice {lattice.label or '(unlabeled)'}  rank {lattice.rank}",
        f"  gram: {[list(r) for r in lattice.gram]}",
        f"  det: {det}",
        f"  signature: {sig}",
        f"  discriminant group: {dg.symbol()}  factors {list(dg.invariant_factors)}",
        f"  2-elementary: {'yes' if flags[2] else 'no'}"
        f"   3-elementary: {'yes' if flags[3] else 'no'}",
        f"  roots with |coords| <= {args.box}: {len(roots)}"
        + (f"  e.g. {list(roots[0])}" if roots else ""),
    ]
    print("\n".join(lines))
    if args.json:
        _write_json(args.json, {
            "label": lattice.label,
            "rank": lattice.rank,
            "gram": [list(r) for r in lattice.gram],
            "det": det,
            "signature": list(sig),
            "discriminant_group": {"symbol": dg.symbol(),
                                   "invariant_factors": list(dg.invariant_factors)},
            "p_elementary": {str(p): v for p, v in flags.items()},
            "roots_box": args.box,
            "roots": [list(r) for r in roots],
        })
    return 0


def _cmd_search(args) -> int:
    lattice = load_lattice(args.lattice)
    start = time.perf_counter()
    if args.parallel > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=args.parallel) as pool:
            futures = [pool.submit(polarization.search_candidates,
                                   lattice, args.degree, args.box, i, args.parallel)
                       for i in range(args.parallel)]
            merged = tuple(sorted({v for f in futures for v in f.result()}))
        report = polarization.exists_polarization(
            lattice, args.degree, args.box, candidates=merged)
    else:
        report = polarization.exists_polarization(lattice, args.degree, args.box)
    payload = report.to_json()
    payload["elapsed"] = round(time.perf_counter() - start, 6)
    print(json.dumps(payload, indent=2, sort_keys=True))
    if args.json:
        _write_json(args.json, payload)
    return 0


def _cmd_count(args) -> int:
    surface = load_surface(args.surface, p=args.p)
    start = time.perf_counter()
    if args.parallel > 1:
        result = count_parallel(surface, args.k, args.convention,
                                args.parallel, budget=args.budget)
    else:
        field = field_build(surface.p, args.k)
        result = count_surface(surface, field, args.convention,
                               budget=args.budget)
    payload = result.to_json()
    payload["surface"] = surface_to_json(surface)
    payload["elapsed"] = round(time.perf_counter() - start, 6)
    print(json.dumps(payload, indent=2, sort_keys=True))
    if args.json:
        _write_json(args.json, payload)
    return 0


# ---------------------------------------------------------------------------
# argument parsing


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="k3lat",
        description="Lattice arithmetic and point counting for minimal "
                    "Picard numbers of polarized K3 surfaces with an "
                    "order-3 symmetry.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_verify = sub.add_parser("verify", help="replay the certified check suite")
    p_verify.add_argument("--scope", choices=SCOPES, default="all")
    p_verify.add_argument("--box", type=int, default=DEFAULT_BOX)
    p_verify.add_argument("--budget", type=int, default=DEFAULT_BUDGET,
                          help="max field-point evaluations per counting step")
    p_verify.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p_verify.add_argument("--json", metavar="PATH",
                          help="also write the report as JSON")
    p_verify.set_defaults(func=_cmd_verify)

    p_inspect = sub.add_parser("inspect", help="print lattice invariants")
    p_inspect.add_argument("lattice",
                           help=f"label ({', '.join(BUILTIN_LATTICES)}), "
                                "JSON file, or inline JSON")
    p_inspect.add_argument("--box", type=int, default=3,
                           help="coordinate bound for root listing")
    p_inspect.add_argument("--json", metavar="PATH")
    p_inspect.set_defaults(func=_cmd_inspect)

    p_search = sub.add_parser("search",
                              help="search for a chamber-interior class "
                                   "of given square")
    p_search.add_argument("lattice")
    p_search.add_argument("--degree", type=int, required=True,
                          help="target square 2d")
    p_search.add_argument("--box", type=int, default=20)
    p_search.add_argument("--parallel", type=int, default=1)
    p_search.add_argument("--json", metavar="PATH")
    p_search.set_defaults(func=_cmd_search)

    p_count = sub.add_parser("count", help="count points on a surface model")
    p_count.add_argument("surface",
                         help=f"preset ({', '.join(SURFACE_PRESETS)}), "
                              "JSON file, or inline JSON")
    p_count.add_argument("--p", type=int, default=None,
                         help="base prime (required for presets)")
    p_count.add_argument("--k", type=int, default=1, help="extension degree")
    p_count.add_argument("--convention", choices=("affine", "with_infinity"),
                         default="affine")
    p_count.add_argument("--parallel", type=int, default=1)
    p_count.add_argument("--budget", type=int, default=10 ** 9,
                         help="max point evaluations")
    p_count.add_argument("--json", metavar="PATH")
    p_count.set_defaults(func=_cmd_count)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (LatticeParseError, BudgetExceeded) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
