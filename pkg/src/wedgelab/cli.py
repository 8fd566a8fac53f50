"""Command-line entry point: ``wedgelab <command> [options]``.

Exit status: 0 success, 1 computational failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
from fractions import Fraction

from . import __version__
from .catalog import CATALOG, load_form, load_spec_file
from .characters import DirichletCharacter
from .cyclotomic import CycNumber
from .dirichlet import DirichletSeriesView, L_chi, abscissa_estimate, partial_sum
from .hecke import FormContext, euler_roots, hecke_eigenvalue, operator_discrepancy, pj_subsequence
from .series import PrecisionError
from .shimura import HalfIntegralContext, eigen_transfer_check, lift
from .suites import SUITES, run_suite
from .wedge import Wedge, scan

DEFAULT_PREC = 1000
# expansion size used before switching to the recurrence path for p-power scans
RECURRENCE_SEED_PREC = 1000


class UsageError(Exception):
    pass


# -- formatting ---------------------------------------------------------------


def _num(x) -> str:
    if isinstance(x, int):
        return str(x)
    if isinstance(x, Fraction):
        return str(x.numerator) if x.denominator == 1 else repr(float(x))
    return repr(float(x))


def _parts(v) -> tuple[str, str]:
    """(re, im) strings; exact integers stay integers."""
    if isinstance(v, CycNumber):
        if v.is_rational():
            return _num(v.to_rational()), "0"
        z = v.embed()
        return repr(z.real), repr(z.imag)
    z = complex(v)
    return repr(z.real), repr(z.imag)


def _exact(v: CycNumber) -> tuple[str, str]:
    # coordinates in the power basis of Q(zeta_order)
    return str(v.order), ";".join(str(c) for c in v.reduced())


def _json_value(v):
    if isinstance(v, CycNumber) and v.is_rational():
        q = v.to_rational()
        return q.numerator if q.denominator == 1 else str(q)
    if isinstance(v, CycNumber):
        z = v.embed()
        return [z.real, z.imag]
    if isinstance(v, complex):
        return [v.real, v.imag]
    return v


def _write_rows(out, rows):
    w = csv.writer(out, lineterminator="\n")
    for r in rows:
        w.writerow(r)


def _emit(args, rows, payload):
    if args.out == "json":
        json.dump(payload, sys.stdout, indent=2, sort_keys=False)
        sys.stdout.write("\n")
    else:
        _write_rows(sys.stdout, rows)


def _value_rows(pairs, exact: bool):
    for n, v in pairs:
        if exact:
            yield (n, *_exact(v))
        else:
            yield (n, *_parts(v))


# -- form access --------------------------------------------------------------


def _form(args, precision: int):
    if getattr(args, "spec", None):
        return load_form(load_spec_file(args.spec), precision, name=os.path.basename(args.spec))
    if not getattr(args, "form", None):
        raise UsageError("give --form NAME or --spec FILE")
    if args.form not in CATALOG:
        raise UsageError(f"unknown form {args.form!r}; see 'wedgelab catalog'")
    return load_form(args.form, precision)


def _read_csv(path) -> list[tuple[int, complex]]:
    out = []
    with open(path, newline="") as fh:
        for row in csv.reader(fh):
            if not row or row[0].strip().startswith("#") or not row[0].strip().lstrip("-").isdigit():
                continue
            re_ = float(row[1]) if len(row) > 1 else 0.0
            im = float(row[2]) if len(row) > 2 else 0.0
            out.append((int(row[0]), complex(re_, im)))
    return out


def _character_json(chi: DirichletCharacter) -> dict:
    return {**chi.to_json(), "order": chi.order()}


# -- commands -----------------------------------------------------------------


def cmd_expand(args) -> int:
    M = args.prec
    ctx = _form(args, M + 1)
    if isinstance(ctx, FormContext):
        pairs = [(n, ctx.a(n)) for n in range(1, M + 1)]
        meta = {"form": ctx.name, "k": ctx.k, "level": ctx.level, "character": _character_json(ctx.character)}
    else:
        pairs = [(n, ctx.b(n)) for n in range(1, ctx.dense_terms + 1) if ctx.t * n * n <= M or ctx.provenance == "synthetic"]
        pairs = pairs[:M]
        meta = _half_meta(ctx)
    payload = {**meta, "coefficients": [[n, _json_value(v)] for n, v in pairs]}
    _emit(args, _value_rows(pairs, args.exact), payload)
    return 0


def _half_meta(ctx: HalfIntegralContext) -> dict:
    return {
        "k": ctx.k,
        "weight": f"{2 * ctx.k + 1}/2",
        "level": ctx.level,
        "t": ctx.t,
        "character": _character_json(ctx.character),
        "level_power": ctx.level_power,
        "provenance": ctx.provenance,
        "witness": ctx.witness,
    }


def cmd_hecke(args) -> int:
    ctx = _form(args, args.prec + 1)
    if not isinstance(ctx, FormContext):
        raise UsageError("hecke needs an integral-weight form")
    p, j = args.p, args.j
    seq = pj_subsequence(ctx, p, j, args.terms)
    pairs = list(enumerate(seq))
    payload = {"form": ctx.name, "p": p, "j": j, "k": ctx.k, "level": ctx.level}
    if ctx.precision > p**j:
        lam_f, ok_f = hecke_eigenvalue(ctx, p, j, "formula")
        lam_p, ok_p = hecke_eigenvalue(ctx, p, j, "polynomial")
        diff = operator_discrepancy(ctx, p, j)
        payload.update(
            eigenvalue_formula=_json_value(lam_f),
            eigen_formula=ok_f,
            eigenvalue_polynomial=_json_value(lam_p),
            eigen_polynomial=ok_p,
            operator_discrepancies=len(diff),
            first_discrepancy=min(diff) if diff else None,
        )
    if ctx.level % p:
        ef = euler_roots(ctx.a(p), ctx.k, ctx.chi(p), p, args.tol)
        payload["euler_roots"] = {
            "alpha": [ef.alpha.real, ef.alpha.imag],
            "beta": [ef.beta.real, ef.beta.imag],
            "moduli_match": ef.moduli_match,
        }
    payload["sequence"] = [[n, _json_value(v)] for n, v in pairs]
    _emit(args, _value_rows(pairs, args.exact), payload)
    return 0


def cmd_shimura(args) -> int:
    ctx = _form(args, args.prec + 1)
    if not isinstance(ctx, HalfIntegralContext):
        raise UsageError("shimura needs a half-integral form (unary_theta or synthetic_eigen)")
    terms = min(args.terms or ctx.dense_terms, ctx.dense_terms)
    if terms < 1:
        raise PrecisionError("no dense b(n) data")
    L = lift(ctx, terms)
    if args.which == "b":
        pairs = [(n, ctx.b(n)) for n in range(1, terms + 1)]
    else:
        pairs = [(n, L.A[n]) for n in range(1, terms + 1)]
    payload = {**_half_meta(ctx), "which": args.which, "terms": terms}
    transfers = {}
    for p in (2, 3, 5, 7):
        if ctx.level % p and ctx.hecke_eigenvalues:
            nu = 0
            while p ** (nu + 1) <= terms:
                nu += 1
            if nu:
                rep = eigen_transfer_check(ctx, L, p, nu, args.tol)
                transfers[str(p)] = {"passed": rep.passed, "moduli_match": rep.moduli_match}
    payload["eigen_transfer"] = transfers
    payload["values"] = [[n, _json_value(v)] for n, v in pairs]
    _emit(args, _value_rows(pairs, args.exact), payload)
    return 0 if all(t["passed"] for t in transfers.values()) else 1


def _scan_sequence(args):
    M = args.prec
    if args.input:
        return _read_csv(args.input), "input"
    mode = args.subseq
    if mode == "p-power":
        if not args.p:
            raise UsageError("--subseq p-power needs --p")
        count = 0
        while args.p ** (args.j * count) <= M:
            count += 1
        ctx = _form(args, min(M, RECURRENCE_SEED_PREC) + 1)
        if not isinstance(ctx, FormContext):
            raise UsageError("p-power scans need an integral-weight form")
        return list(enumerate(pj_subsequence(ctx, args.p, args.j, count))), f"a({args.p}^({args.j}n))"
    ctx = _form(args, M + 1)
    if mode == "t-square":
        if isinstance(ctx, HalfIntegralContext):
            return [(n, ctx.b(n)) for n in range(1, ctx.dense_terms + 1)], f"a({ctx.t}n^2)"
        if not args.t:
            raise UsageError("--subseq t-square needs --t for integral-weight forms")
        out, n = [], 1
        while args.t * n * n <= M:
            out.append((n, ctx.a(args.t * n * n)))
            n += 1
        return out, f"a({args.t}n^2)"
    if isinstance(ctx, HalfIntegralContext):
        return [(n, ctx.b(n)) for n in range(1, ctx.dense_terms + 1)], "b(n)"
    return [(n, ctx.a(n)) for n in range(1, M + 1)], "a(n)"


def cmd_scan(args) -> int:
    try:
        w = Wedge(args.theta1, args.theta2)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    seq, label = _scan_sequence(args)
    rep = scan(seq, w, strict=args.strict_wedge)
    payload = {
        "sequence": label,
        "wedge": [w.theta1, w.theta2],
        "strict": args.strict_wedge,
        **rep.to_json(),
    }
    rows = [("event", "i", "j")]
    rows += [("escape", i, "") for i in rep.escapes]
    rows += [("re_change", a, b) for a, b in rep.re_changes]
    rows += [("im_change", a, b) for a, b in rep.im_changes]
    _emit(args, rows, payload)
    return 0


def cmd_analyze(args) -> int:
    if args.kronecker is not None:
        chi = DirichletCharacter.from_kronecker(args.kronecker)
        view = DirichletSeriesView(lambda n: chi(n), args.prec)
        label = f"({args.kronecker}/n)"
    elif args.input:
        data = dict(_read_csv(args.input))
        view = DirichletSeriesView(data)
        label = "input"
    else:
        ctx = _form(args, args.prec + 1)
        if isinstance(ctx, FormContext):
            view = DirichletSeriesView(ctx.a, args.prec)
            label = "a(n)"
        else:
            view = DirichletSeriesView(ctx.b, ctx.dense_terms)
            label = f"a({ctx.t}n^2)"
    M = len(view)
    if M < 100:
        raise UsageError(f"analyze needs at least 100 coefficients, have {M}")
    report = {"series": label, "M": M}
    for which in ("convergence", "absolute") if args.which == "both" else (args.which,):
        report[which] = abscissa_estimate(view, which, M).to_json()
    sums = []
    sigma_abs = report.get("absolute", {}).get("estimate")
    C = None
    if isinstance(sigma_abs, float):
        abs_sums = view.prefix_sums(absolute=True)
        C = max(abs_sums[n - 1].real / n**sigma_abs for n in range(1, M + 1))
    for s in args.s or []:
        entry = {"s": s, "value": _json_value(partial_sum(view, s, M))}
        if args.kronecker is not None and s > 1:
            entry["tail_bound"] = L_chi(chi, s, M)[1]
        elif C is not None and s > sigma_abs:
            # partial summation with |sum_{n<=N} |a(n)|| <= C N^sigma (fitted on the data)
            entry["tail_estimate"] = C * M ** (sigma_abs - s) * s / (s - sigma_abs)
        sums.append(entry)
    report["partial_sums"] = sums
    if args.out == "json":
        _emit(args, [], report)
    else:
        rows = [("which", "estimate", "uncertainty")]
        for which in ("convergence", "absolute"):
            if which in report:
                rows.append((which, report[which]["estimate"], report[which]["uncertainty"]))
        for e in sums:
            rows.append(("partial_sum", e["s"], json.dumps(e["value"])))
        _write_rows(sys.stdout, rows)
    return 0


def cmd_verify(args) -> int:
    code, report = run_suite(args.suite, jobs=args.jobs)
    if args.report:
        with open(args.report, "w") as fh:
            json.dump(report, fh, indent=2)
    if args.out == "json":
        json.dump(report, sys.stdout, indent=2)
        sys.stdout.write("\n")
    else:
        for c in report["checks"]:
            print(f"{c['status'].upper():8s} {c['name']} ({c['millis']} ms) {c['detail']}")
        counts = {s: sum(c["status"] == s for c in report["checks"]) for s in ("pass", "refuted", "fail")}
        print(f"{report['suite']}: {counts['pass']} pass, {counts['refuted']} refuted, {counts['fail']} fail")
    return code


def cmd_catalog(args) -> int:
    entries = [CATALOG[args.name]] if args.name else list(CATALOG.values())
    rows = [("name", "kind", "k", "level", "character_order", "notes")]
    payload = []
    for e in entries:
        rows.append((e.name, e.spec.kind, e.facts.get("k", ""), e.facts.get("level", e.spec.level or ""),
                     e.facts.get("character_order", ""), e.notes))
        payload.append({"name": e.name, "spec": e.spec.to_json(), "newform": e.newform, "notes": e.notes, "facts": e.facts})
    _emit(args, rows, payload)
    return 0


# -- parser -------------------------------------------------------------------


def _positive(v):
    n = int(v)
    if n < 1:
        raise argparse.ArgumentTypeError("must be positive")
    return n


def _prime(v):
    n = _positive(v)
    if n < 2 or any(n % d == 0 for d in range(2, math.isqrt(n) + 1)):
        raise argparse.ArgumentTypeError(f"{n} is not prime")
    return n


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False, argument_default=argparse.SUPPRESS)
    common.add_argument("--prec", type=_positive, help="coefficient range (default $WEDGELAB_PREC or 1000)")
    common.add_argument("--out", choices=("csv", "json"), help="output format (default csv)")
    common.add_argument("--tol", type=float, help="relative tolerance for numeric checks (default 1e-9)")

    form = argparse.ArgumentParser(add_help=False)
    form.add_argument("--form", help="catalog name")
    form.add_argument("--spec", help="JSON form-spec file")

    parser = argparse.ArgumentParser(prog="wedgelab", parents=[common], description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("expand", parents=[common, form], help="q-expansion coefficients")
    p.add_argument("--exact", action="store_true", help="print n,order,cyclotomic vector")
    p.set_defaults(func=cmd_expand)

    p = sub.add_parser("hecke", parents=[common, form], help="a(p^(jn)) and T_j(p) data")
    p.add_argument("--p", type=_prime, required=True)
    p.add_argument("--j", type=_positive, default=1)
    p.add_argument("--terms", type=_positive, default=21)
    p.add_argument("--exact", action="store_true")
    p.set_defaults(func=cmd_hecke)

    p = sub.add_parser("shimura", parents=[common, form], help="coefficient-level Shimura lift")
    p.add_argument("--which", choices=("A", "b"), default="A")
    p.add_argument("--terms", type=_positive)
    p.add_argument("--exact", action="store_true")
    p.set_defaults(func=cmd_shimura)

    p = sub.add_parser("scan", parents=[common, form], help="wedge escapes and sign changes")
    p.add_argument("--input", help="CSV file with rows n,re,im")
    p.add_argument("--theta1", type=float, default=-math.pi / 2)
    p.add_argument("--theta2", type=float, default=math.pi / 2 - 1e-9)
    p.add_argument("--strict-wedge", action="store_true", help="0 escapes every wedge")
    p.add_argument("--subseq", choices=("all", "p-power", "t-square"), default="all")
    p.add_argument("--p", type=_prime)
    p.add_argument("--j", type=_positive, default=1)
    p.add_argument("--t", type=_positive)
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("analyze", parents=[common, form], help="Dirichlet-series abscissa estimates")
    p.add_argument("--input", help="CSV file with rows n,re,im")
    p.add_argument("--kronecker", type=int, help="analyze the character (D/n)")
    p.add_argument("--which", choices=("convergence", "absolute", "both"), default="both")
    p.add_argument("--s", type=float, action="append", help="real point for a partial sum (repeatable)")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("verify", parents=[common], help="run verification suites")
    p.add_argument("--suite", choices=SUITES + ("all",), default="all")
    p.add_argument("--jobs", type=_positive, default=1)
    p.add_argument("--report", help="also write the JSON report here")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("catalog", parents=[common], help="list built-in forms")
    p.add_argument("--name")
    p.set_defaults(func=cmd_catalog)
    return parser


def _resolve_defaults(args):
    if not hasattr(args, "prec"):
        env = os.environ.get("WEDGELAB_PREC")
        try:
            args.prec = int(env) if env else DEFAULT_PREC
        except ValueError:
            raise UsageError(f"WEDGELAB_PREC={env!r} is not an integer") from None
        if args.prec < 1:
            raise UsageError("WEDGELAB_PREC must be positive")
    if not hasattr(args, "out"):
        args.out = "csv"
    if not hasattr(args, "tol"):
        args.tol = 1e-9


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        _resolve_defaults(args)
        if getattr(args, "name", None) and args.name not in CATALOG:
            raise UsageError(f"unknown form {args.name!r}")
        return args.func(args)
    except UsageError as exc:
        print(f"wedgelab: error: {exc}", file=sys.stderr)
        return 2
    except (ArithmeticError, ValueError, KeyError, OSError) as exc:
        print(f"wedgelab: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
