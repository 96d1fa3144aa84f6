"""Command-line entry point: verification reports, quivers, fixed loci, case dumps."""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass
from typing import Callable, Sequence

from .catalog import (
    BranchMismatch,
    CaseContext,
    CatalogError,
    GroupCase,
    case_to_json,
    get_case,
    validate_case,
    verify_branch_factorization,
    verify_relation,
)
from .hilb import FixedLocusReport, analyze_fixed_locus, point_witness
from .reps import alpha_twist, matches_template, mckay_quiver, verify_induction_pattern
from .sod import (
    SODCounts,
    corollary_b_check,
    counts_from_geometry,
    exchange_matches_reality,
    gmm2_counts,
    sod_counts,
    theorem_a_check,
)

GROUP_CHOICES = ("gmm2", "g2mm2", "g12", "g13", "g22", "all")
DEFAULT_SWEEP = (3, 4, 5, 6)


@dataclass
class CheckRecord:
    id: str
    paper_anchor: str
    status: str
    detail: str

    def as_dict(self) -> dict[str, str]:
        return {"id": self.id, "paper_anchor": self.paper_anchor, "status": self.status, "detail": self.detail}


class Recorder:
    def __init__(self) -> None:
        self.records: list[CheckRecord] = []

    def add(self, id: str, ok: bool, detail: str, topic: str) -> None:
        self.records.append(CheckRecord(id, topic, "pass" if ok else "fail", detail))

    def guard(self, id: str, topic: str, fn: Callable[[], None]) -> None:
        """Run fn; an exception becomes a failed record instead of a crash."""
        try:
            fn()
        except (ArithmeticError, ValueError, KeyError) as exc:
            self.add(id, False, f"{type(exc).__name__}: {exc}", topic)


def cases_for(group: str, m: int | None) -> list[GroupCase]:
    if group == "all":
        out = [get_case(k, mm) for k in ("gmm2", "g2mm2") for mm in ((m,) if m else DEFAULT_SWEEP)]
        return out + [get_case(k) for k in ("g12", "g13", "g22")]
    if group in ("gmm2", "g2mm2"):
        return [get_case(group, mm) for mm in ((m,) if m else DEFAULT_SWEEP)]
    if m is not None:
        raise CatalogError(f"{group} takes no --m")
    return [get_case(group)]


def geometry_counts(case: GroupCase, ctx: CaseContext, r: int, locus: FixedLocusReport | None) -> SODCounts:
    if locus is not None:
        return sod_counts(r, locus.curves)
    # A-type: curves are the nontrivial H-irreps; alpha pairs those it moves,
    # and no curve is fixed pointwise.
    ht = ctx.ht
    triv = ht.trivial_index()
    moved = sum(1 for k, chi in enumerate(ht.irreducibles)
                if k != triv and alpha_twist(chi, ctx.H, ctx.alpha) != chi)
    return counts_from_geometry(r, 0, len(ht) - 1, moved // 2)


def run_case_checks(case: GroupCase, seed: int = 0) -> list[CheckRecord]:
    """Every check for one case, in pipeline order."""
    rec = Recorder()
    L = case.label
    ctx = CaseContext(case, seed=seed)
    exp = case.expected

    for item in validate_case(case, ctx):
        rec.add(f"catalog.{L}.{item.id}", item.ok, item.detail, "case data")

    rel = verify_relation(case)
    rec.add(f"relation.{L}", rel.ok,
            f"f3^2 = q(f1, f2) with q = {case.source['invariants']['relation']}" if rel.ok
            else f"nonzero difference: {rel.offending()}", "invariant relation")
    r = len(case.branch_factors)
    try:
        r = verify_branch_factorization(case)
        rec.add(f"branch_components.{L}", r == exp["r"], f"branch_components: {r}", "branch divisor")
    except BranchMismatch as exc:
        rec.add(f"branch_components.{L}", False, str(exc), "branch divisor")

    gt, ht = ctx.gt, ctx.ht
    ncls = len(ctx.G.conjugacy_classes())
    rec.add(f"classes.{L}", len(gt) == ncls == exp["irreps_G"],
            f"{len(gt)} irreducibles, {ncls} classes", "character table")
    rec.add(f"classes.{L}.H", len(ht) == len(ctx.H.conjugacy_classes()) == exp["irreps_H"],
            f"H has {len(ht)} irreducibles", "character table")
    rec.add(f"degrees.{L}", sum(d * d for d in gt.degrees) == ctx.G.order,
            f"sum of squared degrees {sum(d * d for d in gt.degrees)} = |G| = {ctx.G.order}", "character table")
    rec.add(f"orthogonality.{L}", gt.orthogonality_holds() and ht.orthogonality_holds(),
            "row and column orthogonality hold exactly", "character table")
    if "H_degrees" in exp:
        rec.add(f"degrees.{L}.H", sorted(ht.degrees) == exp["H_degrees"], f"H degrees {sorted(ht.degrees)}",
                "character table")
    ind = verify_induction_pattern(ctx.G, ctx.H, gt, ht, ctx.alpha)
    bad = [x.detail for x in ind if not x.ok]
    rec.add(f"induction.{L}", not bad, "induction from H splits exactly on self-dual irreducibles"
            if not bad else "; ".join(bad), "induction and restriction")

    locus: FixedLocusReport | None = None
    if case.count_only:
        rec.add(f"fixed_locus.{L}", True, "counts verified, fixed-locus geometry out of scope", "fixed locus")
    else:
        try:
            locus = analyze_fixed_locus(case, ctx)
        except (ArithmeticError, ValueError, KeyError) as exc:
            rec.add(f"fixed_locus.{L}", False, f"{type(exc).__name__}: {exc}", "fixed locus")
        if locus is not None:
            for ch in locus.all_checks():
                topic = ch.id.split(".")[0].replace("_", " ")
                rec.add(ch.id, ch.ok, ch.detail, {"curve": "curve action", "mobius": "curve action",
                                                   "isolated": "isolated fixed points"}.get(topic, topic))
            mismatch = exchange_matches_reality(locus.curves, ctx.curve_irreps, ht)
            rec.add(f"reality.{L}", not mismatch,
                    "exchanged curves are exactly those with non-real characters" if not mismatch
                    else f"disagreement on {', '.join(mismatch)}", "curve action")

    hq, gq = mckay_quiver(ht), mckay_quiver(gt)
    kind, n = case.dynkin
    rec.add(f"quiver.{L}.H", matches_template(hq, kind, n), f"H quiver is affine {kind}{n}", "McKay quiver")
    rec.add(f"quiver.{L}.G", len(gq.names) == exp["irreps_G"], f"G quiver has {len(gq.names)} vertices",
            "McKay quiver")
    rec.add(f"quiver.{L}.null_vector", hq.null_vector_holds() and gq.null_vector_holds(),
            "sum_j A[i][j] dim_j = 2 dim_i at every vertex", "McKay quiver")

    try:
        counts = geometry_counts(case, ctx, r, locus)
    except ValueError as exc:
        rec.add(f"theorem_a.{L}", False, str(exc), "count identity")
    else:
        if case.key == "gmm2":
            closed = gmm2_counts(case.m)
            rec.add(f"counts.{L}", (counts.n, counts.r) == (closed.n, closed.r),
                    f"n = {counts.n}, r = {counts.r}", "count identity")
        else:
            ok = all(getattr(counts, k) == exp[k] for k in ("P", "C", "X", "n"))
            rec.add(f"counts.{L}", ok, f"P={counts.P} C={counts.C} X={counts.X} n={counts.n}", "count identity")
        ta = theorem_a_check(counts, ncls)
        rec.add(f"theorem_a.{L}", ta.ok, f"theorem_a: {ta.detail}", "count identity")
    cb = corollary_b_check(ctx.G.reflection_classes(), r)
    rec.add(f"corollary_b.{L}", cb.ok, f"corollary_b: {cb.detail}", "reflection classes")
    return rec.records


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def _group_name(args: argparse.Namespace) -> str:
    return args.group if args.m is None or args.group == "all" else f"{args.group}_m{args.m}"


def cmd_verify(args: argparse.Namespace, out) -> int:
    start = time.perf_counter()
    records: list[CheckRecord] = []
    for case in cases_for(args.group, args.m):
        records.extend(run_case_checks(case, seed=args.seed))
    elapsed = int((time.perf_counter() - start) * 1000)
    npass = sum(1 for r in records if r.status == "pass")
    nfail = len(records) - npass
    width = max(len(r.id) for r in records)
    for r in records:
        out.write(f"{r.status.upper():4}  {r.id:<{width}}  {r.detail}\n")
    out.write(f"\n{npass} passed, {nfail} failed\n")
    if args.json:
        report = {"group": _group_name(args), "checks": [r.as_dict() for r in records],
                  "summary": {"pass": npass, "fail": nfail, "elapsed_ms": elapsed}}
        with open(args.json, "w", encoding="utf-8") as fh:
            json.dump(report, fh, indent=2)
            fh.write("\n")
    return 0 if nfail == 0 else 1


def _single_case(args: argparse.Namespace) -> GroupCase:
    if args.group == "all":
        raise CatalogError("this command needs a single --group")
    if args.group in ("gmm2", "g2mm2") and args.m is None:
        raise CatalogError(f"{args.group} needs --m")
    return get_case(args.group, args.m)


def cmd_quiver(args: argparse.Namespace, out) -> int:
    case = _single_case(args)
    ctx = CaseContext(case, seed=args.seed)
    table = ctx.ht if args.sl2 else ctx.gt
    q = mckay_quiver(table)
    name = case.label + ("_H" if args.sl2 else "_G")
    out.write(q.to_dot(name) if args.format == "dot" else q.to_json())
    return 0


def cmd_fixed_locus(args: argparse.Namespace, out) -> int:
    failed = False
    for case in cases_for(args.group, args.m):
        out.write(f"[{case.label}] {case.name}\n")
        if case.count_only:
            c = gmm2_counts(case.m)
            out.write(f"  counts verified, fixed-locus geometry out of scope (n = {c.n}, r = {c.r})\n")
            continue
        ctx = CaseContext(case, seed=args.seed)
        rep = analyze_fixed_locus(case, ctx)
        for o in rep.curves:
            out.write(f"  {o.line()}\n")
            for p in o.result.fixed if o.result.kind == "involution" else []:
                out.write(f"      {point_witness(case, o.label, p)}\n")
        for label, mob in sorted(rep.mobius.items()):
            (a, b), (c, d) = mob.matrix
            fx = ", ".join(f"[{u}:{v}]" for u, v in mob.fixed_points) or "every point"
            out.write(f"  Moebius on E({label}): [a:b] -> [{a}*a + {b}*b : {c}*a + {d}*b]; fixed {fx}\n")
        for label, name, fam in rep.isolated:
            out.write(f"  isolated {name} of E({label}) -> family {fam or 'UNMATCHED'}\n")
        bad = [c for c in rep.all_checks() if not c.ok]
        for c in bad:
            out.write(f"  FAIL {c.id}: {c.detail}\n")
        failed = failed or bool(bad)
    return 1 if failed else 0


def cmd_case_data(args: argparse.Namespace, out) -> int:
    case = _single_case(args)
    out.write(json.dumps(case_to_json(case), indent=2) + "\n")
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="mckayfix", description="Exact checks for rank-two reflection groups.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp: argparse.ArgumentParser) -> None:
        sp.add_argument("--group", required=True, choices=GROUP_CHOICES)
        sp.add_argument("--m", type=int, default=None)
        sp.add_argument("--seed", type=int, default=0)

    v = sub.add_parser("verify", help="run every check and print a report")
    common(v)
    v.add_argument("--json", metavar="PATH", default=None)
    q = sub.add_parser("quiver", help="McKay quiver of G (or of H with --sl2)")
    common(q)
    q.add_argument("--format", choices=("dot", "json"), default="dot")
    q.add_argument("--sl2", action="store_true")
    f = sub.add_parser("fixed-locus", help="alpha-action on each exceptional curve")
    common(f)
    c = sub.add_parser("case-data", help="dump the parsed case as JSON")
    common(c)
    return p


COMMANDS = {"verify": cmd_verify, "quiver": cmd_quiver, "fixed-locus": cmd_fixed_locus, "case-data": cmd_case_data}


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args, sys.stdout)
    except CatalogError as exc:
        parser.print_usage(sys.stderr)
        sys.stderr.write(f"mckayfix: error: {exc}\n")
        return 2


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
