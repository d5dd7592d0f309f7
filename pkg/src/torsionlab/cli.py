"""Command-line front end: ``torsionlab {variety,torsion,verify} ...``.

Exit status is 0 iff every emitted record or report passes its checks.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

import mpmath

from .errors import TorsionLabError
from .presentation import Family
from .rootfind import find_roots, precision_bits
from .torsion import TorsionRecord, records_to_csv, sign_ratio_constant, torsion_records
from .variety import build_qm, kappa, reconstruct_representation, variety_points
from .verify import (
    VerificationReport,
    check_lemma_kappa,
    check_partial_fractions,
    check_power_sums,
    check_residue_lemma,
    check_small_p_table,
    check_vanishing,
    run_parallel,
    summary_table,
)

RESIDUAL_GATE = 1e-9
AGREEMENT = 1e-7
VERIFY_CHECKS = ("vanishing", "lemmas", "sums", "table", "residue", "partial-fractions")


class UsageError(ValueError):
    pass


def parse_range(text: str, skip_zero: bool = False) -> list[int]:
    """``"a:b"`` (inclusive) or ``"a"`` or a comma list."""
    text = text.strip()
    if ":" in text:
        lo, hi = (int(t) for t in text.split(":", 1))
        if hi < lo:
            raise UsageError(f"empty range {text!r}")
        vals = list(range(lo, hi + 1))
    else:
        vals = [int(t) for t in text.split(",") if t.strip()]
    if skip_zero:
        vals = [v for v in vals if v != 0]
    if not vals:
        raise UsageError(f"no parameters in {text!r}")
    return vals


def family_from_surgery(knot: str, surgery: str) -> tuple[Family, int]:
    """Map a knot and a slope ``p/q`` to an implemented family."""
    try:
        p, q = (int(t) for t in surgery.split("/"))
    except ValueError as exc:
        raise UsageError(f"surgery must look like p/q, got {surgery!r}") from exc
    if q < 0:
        p, q = -p, -q
    if knot == "41":
        if q == 1:
            return Family.FIGURE_EIGHT_P, p
        if p == 1:
            return Family.FIGURE_EIGHT_Q, q
        if p == -1:
            return Family.FIGURE_EIGHT_Q, -q
    elif knot == "52":
        if p == 1 and q != 0:
            return Family.FIVE_TWO_Q, q
        if p == -1:
            return Family.FIVE_TWO_Q, -q
    else:
        raise UsageError(f"unknown knot {knot!r}; choose 41 or 52")
    raise UsageError(
        f"slope {surgery} on {knot} is outside the implemented families "
        "(p/1 and 1/q on the figure-eight knot, 1/q on 5_2)"
    )


def _family_for(knot: str, use_p: bool) -> Family:
    if knot == "41":
        return Family.FIGURE_EIGHT_P if use_p else Family.FIGURE_EIGHT_Q
    if knot == "52":
        if use_p:
            raise UsageError("only 1/q surgeries are implemented on 5_2; use --q")
        return Family.FIVE_TWO_Q
    raise UsageError(f"unknown knot {knot!r}; choose 41 or 52")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="torsionlab", description="Adjoint torsion of surgeries on 4_1 and 5_2.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--knot", choices=["41", "52"], default="41")
    common.add_argument("--surgery", help="slope p/q (q=1 or p=1)")
    common.add_argument("--p", help="p range a:b or list")
    common.add_argument("--q", help="q range a:b or list (0 is skipped)")
    common.add_argument("--format", choices=["json", "csv", "text"], default="text")
    common.add_argument("--out", help="write output to this path")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--precision", choices=["auto", "dd", "double"], default="auto")
    sub = parser.add_subparsers(dest="subcommand", required=True)
    sub.add_parser("variety", parents=[common], help="Q_M, its roots and the representations")
    t = sub.add_parser("torsion", parents=[common], help="torsion at each variety point")
    t.add_argument("--method", choices=["closed", "chain", "both"], default="both")
    v = sub.add_parser("verify", parents=[common], help="run a family of checks")
    v.add_argument("check", choices=VERIFY_CHECKS)
    v.add_argument("--n", default="-1,1,2,3", help="exponents for the power sums")
    v.add_argument("--m", help="m range for the partial-fraction check (p = 2m)")
    v.add_argument("--trials", type=int, default=200)
    return parser


def _targets(args) -> list[tuple[Family, int]]:
    if args.surgery:
        return [family_from_surgery(args.knot, args.surgery)]
    if args.p:
        fam = _family_for(args.knot, True)
        return [(fam, v) for v in parse_range(args.p)]
    if args.q:
        fam = _family_for(args.knot, False)
        return [(fam, v) for v in parse_range(args.q, skip_zero=True)]
    raise UsageError("give --surgery, --p or --q")


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _c17(z) -> list[float]:
    z = complex(z)
    return [float(f"{z.real:.17g}"), float(f"{z.imag:.17g}")]


# subcommands ----------------------------------------------------------------


def cmd_variety(args) -> int:
    ok = True
    docs = []
    lines = []
    for fam, n in _targets(args):
        q = build_qm(fam, n)
        with mpmath.workprec(precision_bits(args.precision)):
            roots = find_roots(q, args.precision)
            pts = variety_points(fam, n, args.precision, roots)
            reps = []
            for a in pts:
                try:
                    rep = reconstruct_representation(a, fam, n, args.precision)
                    reps.append({"a": _c17(a), "residual": float(f"{rep.max_residual:.3e}"), "method": rep.method})
                    ok = ok and rep.max_residual < RESIDUAL_GATE
                except TorsionLabError as exc:
                    reps.append({"a": _c17(a), "error": f"{type(exc).__name__}: {exc}"})
                    ok = False
        doc = {
            "family": fam.value,
            "parameter": n,
            "surgery": fam.surgery(n),
            "Q_M": q.to_json(),
            "kappa": kappa(fam, n).pretty(),
            "degree": q.span,
            "roots": roots.to_json(),
            "points": reps,
        }
        docs.append(doc)
        lines.append(f"{fam.surgery(n)}  ({fam.value}, {fam.parameter_name}={n})")
        lines.append(f"  Q_M = {q.pretty()}")
        lines.append(f"  degree {q.span}, {len(roots.roots)} distinct roots, {len(pts)} variety points")
        for r in reps:
            a = complex(*r["a"])
            tail = f"residual {r['residual']:.1e} ({r['method']})" if "residual" in r else r["error"]
            lines.append(f"  a = {a.real:+.12f} {a.imag:+.12f}i  {tail}")
    if args.format == "json":
        text = json.dumps(docs, sort_keys=True, indent=1) + "\n"
    elif args.format == "csv":
        rows = ["family,parameter,re a,im a,residual"]
        for d in docs:
            for r in d["points"]:
                rows.append(f"{d['family']},{d['parameter']},{r['a'][0]!r},{r['a'][1]!r},{r.get('residual', '')}")
        text = "\n".join(rows) + "\n"
    else:
        text = "\n".join(lines) + "\n"
    _emit(text, args.out)
    return 0 if ok else 1


def _records_ok(records: Sequence[TorsionRecord]) -> bool:
    if any(r.residual >= RESIDUAL_GATE for r in records):
        return False
    for r in records:
        gap = r.abs_agreement()
        if gap is not None and gap > AGREEMENT:
            return False
    return sign_ratio_constant(records, AGREEMENT)


def cmd_torsion(args) -> int:
    ok = True
    all_records: list[TorsionRecord] = []
    for fam, n in _targets(args):
        try:
            recs = torsion_records(fam, n, args.method, args.precision)
        except TorsionLabError as exc:
            sys.stderr.write(f"{fam.surgery(n)}: {type(exc).__name__}: {exc}\n")
            ok = False
            continue
        ok = ok and _records_ok(recs)
        all_records.extend(recs)
    if args.format == "csv":
        text = records_to_csv(all_records)
    elif args.format == "json":
        text = json.dumps([r.to_json() for r in all_records], sort_keys=True, indent=1) + "\n"
    else:
        lines = []
        for r in all_records:
            line = f"{r.family.surgery(r.parameter):>10}  a = {r.a.real:+.10f} {r.a.imag:+.10f}i  tau = {r.closed_form.real:+.12g} {r.closed_form.imag:+.3g}i"
            if r.ratio is not None:
                line += f"  chain ratio {r.ratio.real:+.9f}"
            lines.append(line)
        text = "\n".join(lines) + "\n"
    _emit(text, args.out)
    return 0 if ok else 1


def cmd_verify(args) -> int:
    check = args.check
    reports: list[VerificationReport] = []
    if check == "residue":
        reports.append(check_residue_lemma(args.trials, args.seed))
    elif check == "table":
        ps = parse_range(args.p) if args.p else list(range(-4, 5))
        reports = run_parallel(check_small_p_table, [(p,) for p in ps])
    elif check == "partial-fractions":
        ms = parse_range(args.m, skip_zero=True) if args.m else [3, 4, 5, -3, -4, -5]
        reports = run_parallel(check_partial_fractions, [(m,) for m in ms])
    elif check == "lemmas":
        targets = _targets(args) if (args.p or args.q or args.surgery) else [(Family.FIGURE_EIGHT_P, p) for p in range(-12, 13)]
        reports = run_parallel(check_lemma_kappa, [(f.value, n) for f, n in targets if n != 0])
    elif check == "vanishing":
        reports = run_parallel(check_vanishing, [(f.value, n) for f, n in _targets(args)])
    elif check == "sums":
        ns = parse_range(args.n)
        reports = run_parallel(check_power_sums, [(f.value, p, n) for f, p in _targets(args) for n in ns])
    if args.format == "json":
        text = "".join(r.dumps() + "\n" for r in reports)
    elif args.format == "csv":
        rows = ["claim,family,parameters,passed,method"]
        rows += [f"{r.claim},{r.family},{r.parameters},{r.passed},{r.method}" for r in reports]
        text = "\n".join(rows) + "\n"
    else:
        text = summary_table(reports) + "\n"
    _emit(text, args.out)
    return 0 if all(r.passed for r in reports) else 1


def _join_negative_values(argv: Sequence[str]) -> list[str]:
    """Turn ``--p -9:9`` into ``--p=-9:9`` so argparse accepts negative ranges."""
    out: list[str] = []
    it = iter(argv)
    for tok in it:
        if tok in ("--p", "--q", "--n", "--m", "--surgery"):
            nxt = next(it, None)
            out.append(tok if nxt is None else f"{tok}={nxt}")
        else:
            out.append(tok)
    return out


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(_join_negative_values(sys.argv[1:] if argv is None else argv))
    try:
        if args.subcommand == "variety":
            return cmd_variety(args)
        if args.subcommand == "torsion":
            return cmd_torsion(args)
        return cmd_verify(args)
    except (UsageError, ValueError) as exc:
        parser.exit(2, f"torsionlab: error: {exc}\n")
    return 2  # pragma: no cover


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
