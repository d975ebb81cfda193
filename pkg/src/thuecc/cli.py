"""Command-line front end.

Subcommands:

* analyze: factorization shape, genus, d*, irreducibility, prime case.
* bound:   every applicable bound with its hypothesis flags.
* verify:  enumeration plus all checkable identities; nonzero exit on
           any violated property.
* fermat:  construct / check / orbit verbs for generalized Fermat twists.

Instances come inline (--F coefficients, --h) or from a JSON-lines
corpus file {"coeffs": [...], "h": ...}.  Reports are deterministic for
a fixed configuration: no timestamps, stable ordering.  Exit codes:
0 all checks pass, 2 property violation, 3 input error.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from thuecc import bounds as bnd
from thuecc import charts as ch
from thuecc import enumerate as en
from thuecc import fermat as fm
from thuecc import padic
from thuecc import polyutil
from thuecc.forms import BinaryForm, FormError, ThueInstance

EXIT_OK = 0
EXIT_VIOLATION = 2
EXIT_INPUT = 3


class InputError(ValueError):
    pass


def _parse_ints(text: str) -> list[int]:
    try:
        return [int(t) for t in text.replace(" ", "").split(",") if t != ""]
    except ValueError as exc:
        raise InputError(f"cannot parse integer list {text!r}") from exc


def _parse_hypothesis(text: str | None) -> bnd.RankHypothesis | None:
    if not text:
        return None
    kind, _, value = text.partition(":")
    try:
        return bnd.RankHypothesis(
            kind=kind.strip(),
            value=int(value) if value else None,
            source="cli flag",
        )
    except bnd.BoundError as exc:
        raise InputError(str(exc)) from exc


def _load_instances(args) -> list[ThueInstance]:
    specs: list[tuple[list[int], int]] = []
    if args.corpus:
        with open(args.corpus) as fh:
            for line in fh:
                line = line.strip()
                if not line:
                    continue
                row = json.loads(line)
                specs.append(([int(c) for c in row["coeffs"]], int(row["h"])))
    if args.F is not None:
        if args.h is None:
            raise InputError("--F requires --h")
        specs.append((_parse_ints(args.F), args.h))
    if not specs:
        raise InputError("no instances: pass --F/--h or --corpus")
    out = []
    for coeffs, h in specs:
        out.append(ThueInstance.build(BinaryForm.from_coeffs(coeffs), h))
    return out


def _analyze_row(instance: ThueInstance, p_override: int | None) -> dict:
    shape = instance.shape
    n = instance.n
    row = {
        "instance": instance.instance_id(),
        "n": n,
        "content_removed": instance.content_removed,
        "s": shape.s,
        "multiplicities": list(shape.multiplicities),
        "degree_deficit": shape.degree_deficit,
        "genus": instance.genus,
        "dstar": str(instance.dstar),
        "irreducible": instance.irreducible,
    }
    if instance.content_removed > 1:
        row["warning"] = (
            f"form had content {instance.content_removed}; normalized, with h "
            f"divided accordingly"
        )
    if not instance.irreducible:
        g = 0
        for m in shape.all_multiplicities():
            from math import gcd as _g

            g = _g(g, m)
        row["error"] = (
            f"model is reducible: h z^n - F factors because F is a perfect "
            f"power pattern (gcd of n and all multiplicities is {g} > 1)"
        )
        return row
    p0 = bnd.bertrand_prime(n)
    row["bertrand_prime"] = p0
    row["case_at_bertrand"] = bnd.classify_prime(instance, p0).case_tag
    if p_override:
        row["case_at_override"] = bnd.classify_prime(instance, p_override).case_tag
    return row


def cmd_analyze(args) -> tuple[dict, int]:
    rows = [_analyze_row(inst, args.p) for inst in _load_instances(args)]
    code = EXIT_INPUT if any("error" in r for r in rows) else EXIT_OK
    return {"command": "analyze", "rows": rows}, code


def cmd_bound(args) -> tuple[dict, int]:
    hyp = _parse_hypothesis(args.hypothesis)
    rows = []
    for inst in _load_instances(args):
        if not inst.irreducible:
            rows.append(
                {"instance": inst.instance_id(), "error": "reducible model"}
            )
            continue
        n = inst.n
        p = args.p or bnd.bertrand_prime(n)
        reports = [bnd.main_bounds(inst, p, hyp)]
        import sympy

        if sympy.isprime(n) and n >= 5:
            a = 2
            while not sympy.isprime(a * n + 1):
                a += 1
            pa = a * n + 1
            reports.append(
                bnd.refined_bounds_prime_degree(
                    n, a, bnd.classify_prime(inst, pa), hyp
                )
            )
        if sympy.isprime(n + 1) and n + 1 >= 5:
            s_eff = len(inst.shape.all_multiplicities())
            reports.append(
                bnd.refined_bounds_degree_pm1(
                    n + 1, bnd.classify_prime(inst, n + 1), hyp, s=s_eff
                )
            )
        rows.append(
            {
                "instance": inst.instance_id(),
                "hypothesis": hyp.describe() if hyp else "unset",
                "reports": [_report_dict(r) for r in reports],
            }
        )
    code = EXIT_INPUT if any("error" in r for r in rows) else EXIT_OK
    return {"command": "bound", "rows": rows}, code


def _report_dict(report: bnd.BoundReport) -> dict:
    return {
        "instance": report.instance_id,
        "p": report.p,
        "case": report.case.case_tag,
        "notes": list(report.notes),
        "entries": [
            {
                "name": e.name,
                "quantity": e.quantity,
                "exact": str(e.exact),
                "floor": e.floor,
                "conditional": e.conditional,
                "flags": list(e.flags),
            }
            for e in report.entries
        ],
    }


def cmd_verify(args) -> tuple[dict, int]:
    hyp = _parse_hypothesis(args.hypothesis)
    rows = []
    violated = False
    for inst in _load_instances(args):
        checks: list[dict] = []

        def check(name: str, ok: bool, detail: str = ""):
            nonlocal violated
            checks.append({"check": name, "ok": bool(ok), "detail": detail})
            if not ok:
                violated = True

        if not inst.irreducible:
            rows.append({"instance": inst.instance_id(), "error": "reducible model"})
            continue
        n = inst.n
        box = args.box or en.default_box(n).bound
        sols = en.primitive_solutions(inst, box)
        row: dict = {
            "instance": inst.instance_id(),
            "box": box,
            "solutions": [list(s) for s in sols.solutions],
            "count": len(sols),
        }
        p = args.p or bnd.bertrand_prime(n)
        # difference-valuation consistency at p
        shape = inst.shape
        if shape.s >= 2:
            diffs = padic.difference_valuations(shape, p)
            total = sum(Fraction(v) * m for v, m in diffs)
            disc = polyutil.discriminant(shape.radical)
            expected = polyutil.vp(disc, p) - (2 * shape.s - 2) * polyutil.vp(
                shape.radical[-1], p
            )
            check(
                "difference_valuations_sum",
                total == expected,
                f"sum {total} vs v_p(disc)-(2s-2)v_p(lc) = {expected}",
            )
        # bound comparison
        report = bnd.main_bounds(inst, p, hyp)
        for e in report.entries:
            if not e.conditional:
                check(
                    f"count_le_{e.name}",
                    len(sols) <= e.floor,
                    f"{len(sols)} <= {e.floor} [{e.quantity}]",
                )
        # chart identities at a prime dividing h
        ph = next((q for q in _divisor_primes(inst.h) if q > n), None)
        if ph is not None:
            charts = _verify_charts(inst, sols, ph, check, args.precision)
            if charts:
                row["charts"] = {"p": ph, "ledgers": [c.to_dict() for c in charts]}
        rows.append(row | {"checks": checks})
    code = EXIT_VIOLATION if violated else EXIT_OK
    return {"command": "verify", "rows": rows}, code


def _divisor_primes(h: int):
    import sympy

    return sorted(sympy.factorint(abs(h)).keys())


def _verify_charts(inst: ThueInstance, sols, p: int, check, precision=None):
    u, monic = (0, inst.form)
    if inst.form.coeffs[0] % p == 0:
        from thuecc.forms import monicize

        u, monic = monicize(inst.form, p)
    # F'(x,y) = F(x, y+ux), so (x, y) solving F = h maps to (x, y - ux)
    minst = ThueInstance.build(monic, inst.h)
    msols = [(x, y - u * x) for x, y in sols.solutions]
    ok_vb = all(padic.check_vb_zero(a, b, minst, p) for a, b in msols)
    check("v_p(b)_zero", ok_vb, f"all {len(msols)} solutions at p={p}")
    try:
        tracked = padic.hensel_track_roots(
            minst.shape, p, precision or padic.default_precision(minst, p)
        )
    except (padic.RamifiedCase, ValueError) as exc:
        check("tracked_mode", True, f"skipped: {exc}")
        return []
    w = polyutil.vp(minst.h, p)
    by_argmax: dict[int, list] = {}
    charts = []
    for a, b in msols:
        prof = padic.solution_valuations(a, b, minst, p, tracked)
        chart = ch.chart_from_tracked(prof, tracked, w)
        charts.append(chart)
        check(
            f"w_equals_um({a},{b})",
            ch.verify_w_equals_um(chart),
            f"w={chart.w} u_m={chart.u_seq[-1]}",
        )
        by_argmax.setdefault(prof.argmax_index, []).append(prof)
    for idx, group in sorted(by_argmax.items()):
        rep = ch.check_common_root_depth(group)
        check(f"common_depth(root {idx})", rep.passed, f"t values {rep.t_values}")
    if charts:
        census = en.residue_class_census(
            en.SolutionSet(minst.instance_id(), tuple(msols), sols.box),
            minst,
            p,
            tracked,
        )
        case = bnd.classify_prime(minst, p)
        s = minst.shape.s
        limit = s * minst.n * p if case.divides_dstar else s * p
        check(
            "census_additive_term",
            census.count <= limit,
            f"{census.count} classes <= {limit} (case {case.case_tag})",
        )
    return charts


def cmd_fermat(args) -> tuple[dict, int]:
    if args.verb == "construct":
        t1 = fm.SolutionTriple(*_parse_ints(args.t1))
        t2 = fm.SolutionTriple(*_parse_ints(args.t2))
        twist = fm.solve_coefficients(t1, t2, args.n)
        return {"command": "fermat construct", "twist": twist.to_dict()}, EXIT_OK
    if args.verb == "check":
        twist = fm.FermatTwist(args.A, args.B, args.C, args.n)
        hyp = _parse_hypothesis(args.hypothesis)
        rep = fm.unique_triple_check(twist, args.p, hyp, box=args.box or 20)
        payload = {
            "command": "fermat check",
            "twist": twist.to_dict(),
            "classes": [[t.x, t.y, t.z] for t in rep.classes],
            "consistent": rep.consistent,
            "conclusion": rep.conclusion,
        }
        return payload, EXIT_OK if rep.consistent else EXIT_VIOLATION
    if args.verb == "orbit":
        t = fm.SolutionTriple(*_parse_ints(args.t))
        count = fm.orbit_count(t, args.symmetric, args.n)
        return {"command": "fermat orbit", "count": count}, EXIT_OK
    raise InputError(f"unknown fermat verb {args.verb!r}")


def _emit(payload: dict, args) -> None:
    fmt = getattr(args, "format", "json")
    if fmt == "json":
        text = json.dumps(payload, indent=2, sort_keys=True)
    elif fmt == "csv":
        lines = []
        for row in payload.get("rows", []):
            if "reports" in row:
                for rep in row["reports"]:
                    for e in rep["entries"]:
                        lines.append(
                            f"{row['instance']},{rep['p']},{rep['case']},"
                            f"{e['name']},{e['quantity']},{e['exact']},"
                            f"{e['floor']},{row['hypothesis']}"
                        )
            elif "solutions" in row:
                for x, y in row["solutions"]:
                    lines.append(f"{row['instance']},{row['box']},{row['count']},{x},{y}")
            else:
                lines.append(",".join(str(v) for v in row.values()))
        text = "\n".join(lines)
    elif fmt == "text":
        text = _render_text(payload)
    else:
        raise InputError(f"unknown format {fmt!r}")
    if getattr(args, "out", None):
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _render_text(payload: dict) -> str:
    lines = [payload.get("command", "")]
    for row in payload.get("rows", []):
        lines.append(f"- {row.get('instance', '?')}")
        for key in ("error", "genus", "count"):
            if key in row:
                lines.append(f"    {key}: {row[key]}")
        for c in row.get("checks", []):
            mark = "ok" if c["ok"] else "FAIL"
            lines.append(f"    [{mark}] {c['check']}: {c['detail']}")
    return "\n".join(lines)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="thuecc", description="Thue equation bound toolkit"
    )
    sub = parser.add_subparsers(dest="cmd", required=True)

    def add_common(sp):
        sp.add_argument("--F", help="comma-separated coefficients, highest x power first")
        sp.add_argument("--h", type=int)
        sp.add_argument("--corpus", help="JSON-lines file of {coeffs, h}")
        sp.add_argument("--p", type=int, help="prime override (must exceed n)")
        sp.add_argument("--box", type=int)
        sp.add_argument("--precision", type=int)
        sp.add_argument("--hypothesis", help="kind[:value], e.g. mw_rank_value:1")
        sp.add_argument("--format", choices=["json", "csv", "text"], default="json")
        sp.add_argument("--out")

    for name in ("analyze", "bound", "verify"):
        add_common(sub.add_parser(name))

    fp = sub.add_parser("fermat")
    fp.add_argument("verb", choices=["construct", "check", "orbit"])
    fp.add_argument("--t1")
    fp.add_argument("--t2")
    fp.add_argument("--t")
    fp.add_argument("--n", type=int, required=True)
    fp.add_argument("--A", type=int)
    fp.add_argument("--B", type=int)
    fp.add_argument("--C", type=int)
    fp.add_argument("--p", type=int)
    fp.add_argument("--box", type=int)
    fp.add_argument("--symmetric", action="store_true")
    fp.add_argument("--hypothesis")
    fp.add_argument("--format", choices=["json", "csv", "text"], default="json")
    fp.add_argument("--out")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    handlers = {
        "analyze": cmd_analyze,
        "bound": cmd_bound,
        "verify": cmd_verify,
        "fermat": cmd_fermat,
    }
    try:
        payload, code = handlers[args.cmd](args)
    except (InputError, FormError, bnd.BoundError, fm.FermatError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    _emit(payload, args)
    return code


if __name__ == "__main__":
    sys.exit(main())
