"""Command-line surface: `dalgebra <subcommand> ...`.

Exit codes: 0 success or relation found, 1 clean NotFound, 2 error.
"""
import argparse
import csv
import json
import logging
import random
import sys
import warnings

from .errors import DAlgebraError, NotFound

EXIT_OK, EXIT_NOT_FOUND, EXIT_ERROR = 0, 1, 2


def _common():
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--out", help="write the main artifact (series, polynomial, CSV) here")
    p.add_argument("--report", help="write a JSON report here")
    p.add_argument("--workers", type=int, default=1, help="parallel workers (batch, crt-combine)")
    p.add_argument("--strict", action="store_true", help="escalate warnings to errors")
    p.add_argument("--seed", type=int, default=None, help="seed for randomized steps")
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def _source(args):
    """Series named on the command line: --in FILE or a generator spec."""
    from .pipeline import load_source
    if getattr(args, "input", None):
        return load_source({"file": args.input})
    spec = {}
    if getattr(args, "named", None):
        spec = {"named": args.named, "N": args.N}
    elif getattr(args, "tutte", None) is not None:
        spec = {"tutte": args.tutte, "N": args.N, "normalized": args.normalized}
    elif getattr(args, "recurrence", None):
        spec = {"recurrence": args.recurrence, "N": args.N}
    else:
        raise ValueError("give --in FILE or a generator (--named/--tutte/--recurrence with --N)")
    return load_source(spec)


def _add_source(p, required_in=False):
    p.add_argument("--in", dest="input", required=required_in, help="series file")
    if not required_in:
        p.add_argument("--named", help="named construction, e.g. composition_H1H2")
        p.add_argument("--tutte", help="Tutte series at this q (integer or rational)")
        p.add_argument("--normalized", action="store_true", help="divide the Tutte series by q(q-1)")
        p.add_argument("--recurrence", choices=["divergent_c1", "divergent_c2"])
        p.add_argument("--N", type=int, default=100, help="target order for generators")


def build_parser():
    common = _common()
    ap = argparse.ArgumentParser(prog="dalgebra", parents=[common],
                                 description="Series generation, guessing and analysis toolkit.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", parents=[common], help="generate a series")
    _add_source(p)

    p = sub.add_parser("reduce", parents=[common], help="reduce a series modulo p^r")
    _add_source(p)
    p.add_argument("--modulus", required=True, help="p or p^r")

    p = sub.add_parser("guess-algebraic", parents=[common], help="find P(x, F) = 0 mod p")
    _add_source(p)
    p.add_argument("--prime", type=int, help="reduce the input modulo this prime first")
    p.add_argument("--dx-max", type=int, default=80)
    p.add_argument("--dy-max", type=int, default=40)
    p.add_argument("--margin", type=int, default=10)
    p.add_argument("--frobenius", action="store_true", help="search the F^(n(p-1)) strata only")

    p = sub.add_parser("guess-ade", parents=[common], help="find an algebraic differential equation")
    _add_source(p)
    p.add_argument("--m", type=int, help="total degree in F, F', ..., F^(k)")
    p.add_argument("--k", type=int, help="differential order")
    p.add_argument("--d", type=int, help="degree of the polynomial coefficients")
    p.add_argument("--homogeneous", action="store_true", help="monomials of degree exactly m")
    p.add_argument("--auto", action="store_true", help="scan every maximal form (default without --m/--k/--d)")
    p.add_argument("--margin", "--T", dest="T", type=int, default=10, help="extra equations T")
    p.add_argument("--exclude-holonomic", action="store_true",
                   help="skip k=0, m=1 and d=0 forms in the scan")
    p.add_argument("--shift", type=int, action="append",
                   help="also try the series with its first s coefficients dropped (repeatable)")
    p.add_argument("--mod", type=int, help="reduce modulo this prime and solve over F_p")

    p = sub.add_parser("guess-recurrence", parents=[common], help="find a window recurrence")
    _add_source(p)
    p.add_argument("--window", type=int, required=True)
    p.add_argument("--degrees", required=True, help="degree in n, total degree in the c's: dn,dc")
    p.add_argument("--T", type=int, default=10)

    p = sub.add_parser("analyze", parents=[common], help="floating-point analysis")
    _add_source(p)
    p.add_argument("--mode", choices=["diffpade", "radius", "borel", "xc"], default="radius")
    p.add_argument("--order", type=int, action="append", help="approximant order (repeatable)")
    p.add_argument("--degree", type=int, action="append", help="approximant degree (repeatable)")
    p.add_argument("--method", choices=["ratio", "root"], default="ratio")
    p.add_argument("--exact", action="store_true", help="diffpade: exact fit instead of approximants")

    p = sub.add_parser("borel", parents=[common], help="Borel or inverse Borel transform")
    _add_source(p)
    p.add_argument("--inverse", action="store_true")

    p = sub.add_parser("crt-combine", parents=[common], help="assemble residue files")
    p.add_argument("files", nargs="+", help="<name>.p<prime>.res files")

    p = sub.add_parser("prime-plan", parents=[common], help="primes needed for N terms")
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--bits", type=int, choices=[15, 30], default=15)

    p = sub.add_parser("verify-funceq", parents=[common], help="check F(x^s) = a F + b mod p^r")
    _add_source(p)
    p.add_argument("--modulus", default="32")
    p.add_argument("--s", type=int, default=2)
    p.add_argument("--a", default="x", help="multiplier polynomial in x")
    p.add_argument("--b", default="8*x^3*(2*x^15 - x^7 + x - 5)", help="additive polynomial in x")

    p = sub.add_parser("batch", parents=[common], help="run a JSON manifest of jobs")
    p.add_argument("manifest")
    return ap


# ---------------------------------------------------------------- commands

def cmd_generate(args, out):
    from .pipeline import export_series
    F = _source(args)
    if args.out:
        export_series(F, args.out)
    out["order"] = F.order
    out["head"] = [str(c) for c in F.coeffs[:10]]
    print(" ".join(out["head"]) + (" ..." if F.order >= 10 else ""))
    return EXIT_OK


def cmd_reduce(args, out):
    from .pipeline import export_series
    from .series import reduce_mod
    from .seriesio import parse_modulus
    G = reduce_mod(_source(args), parse_modulus(args.modulus))
    if args.out:
        export_series(G, args.out)
    out["head"] = G.coeffs[:20]
    print(" ".join(map(str, out["head"])))
    return EXIT_OK


def cmd_guess_algebraic(args, out):
    from .algebraic.bipoly import write_poly
    from .algebraic.guess import GuessBudget, frobenius_to_poly, guess_algebraic, guess_frobenius_form
    from .series import reduce_mod
    F = _source(args)
    if args.prime:
        F = reduce_mod(F, args.prime)
    if args.frobenius:
        qs = guess_frobenius_form(F, dx_max=args.dx_max, T=args.margin)
        P = frobenius_to_poly(qs, F.domain.p)
    else:
        P = guess_algebraic(F, GuessBudget(args.dx_max, args.dy_max, args.margin))
        out["verified_through"] = P.info["verified_through"]
    out["degrees"] = list(P.degrees)
    out["poly"] = P.pretty()
    if args.out:
        write_poly(P, args.out)
    print("degree %d in F, %d in x" % P.degrees)
    print(P.pretty())
    return EXIT_OK


def cmd_guess_ade(args, out):
    from .ade.forms import AdeForm
    from .ade.guess import drop_leading, guess_ade, guess_ade_auto, guess_ade_modular
    from .series import reduce_mod
    F = _source(args)
    if args.mod:
        F = reduce_mod(F, args.mod)
    given = [v is not None for v in (args.m, args.k, args.d)]
    if any(given) and not all(given):
        raise ValueError("give all of --m, --k, --d (or --auto)")
    if all(given) and args.auto:
        raise ValueError("--auto and an explicit form are exclusive")
    shifts = tuple(args.shift or [0])
    if all(given):
        form = AdeForm(args.m, args.k, args.d, args.homogeneous)
        last = None
        for s in shifts:
            G = drop_leading(F, s)
            try:
                rel = guess_ade_modular(G, form, args.T) if G.domain.is_modular else guess_ade(G, form, args.T)
            except NotFound as exc:
                last = exc
                continue
            rel.info["shift"] = s
            break
        else:
            raise last
    else:
        rel = guess_ade_auto(F, args.T, exclusions=bool(args.exclude_holonomic), shifts=shifts)
    info = rel.info
    out["form"] = [rel.form.m, rel.form.k, rel.form.d, rel.form.homogeneous]
    out["modulus"] = rel.modulus
    out["shift"] = info.get("shift", 0)
    out["relation"] = rel.pretty()
    out["terms"] = [{"term": list(t), "poly": list(p)} for t, p in rel.nonzero_terms()]
    out["verified_through"] = info.get("verified_through")
    out["seconds"] = info.get("seconds")
    if "tried" in info:
        out["tried"] = info["tried"]
    if args.out:
        with open(args.out, "w") as fh:
            json.dump(rel.to_dict(), fh, indent=1)
    print("form (m,k,d) = (%d,%d,%d)%s  shift %d" % (rel.form.m, rel.form.k, rel.form.d,
                                                   " homogeneous" if rel.form.homogeneous else "",
                                                   out["shift"]))
    print(rel.pretty())
    if out["verified_through"] is not None:
        print("verified through x^%d" % out["verified_through"])
    return EXIT_OK


def cmd_guess_recurrence(args, out):
    from .ade.window import guess_window_recurrence
    F = _source(args)
    if F.domain.is_modular or not F.is_integral():
        raise ValueError("window recurrences are guessed on integer sequences")
    dn, dc = (int(t) for t in args.degrees.split(","))
    rec = guess_window_recurrence(F.to_integer().coeffs, args.window, (dn, dc), T=args.T)
    out["recurrence"] = rec.pretty()
    print(rec.pretty())
    return EXIT_OK


def cmd_analyze(args, out):
    from . import analytic
    if args.mode == "xc":
        xc = analytic.transcendental_critical_point()
        out["xc"] = xc
        print("x_c = %.15g" % xc)
        return EXIT_OK
    F = _source(args)
    if args.mode == "radius":
        est = analytic.radius_estimate(F, args.method)
        out.update(growth=float(est.growth), radius=float(est.radius), spread=float(est.spread),
                   sign_pattern=est.sign_pattern)
        print("lambda = %s  radius = %s  (spread %.3g, signs %s)" % (
            analytic.mp.nstr(est.growth, 16), analytic.mp.nstr(est.radius, 16),
            float(est.spread), est.sign_pattern))
        return EXIT_OK
    if args.mode == "borel":
        c, rep = analytic.borel_asymptotics(F)
        out.update(rep)
        print("c = %.12g   a_1 = %.8g" % (c, rep["a"][0]))
        for row in rep["model_check"]:
            print("x=%-5s borel %.10g  model %.10g  remainder %.6g" % (
                row["x"], row["borel_sum"], row["model"], row["remainder"]))
        return EXIT_OK
    orders = args.order or [4, 8]
    degrees = args.degree or [24, 14]
    if len(degrees) == 1:
        degrees = degrees * len(orders)
    if len(orders) != len(degrees):
        raise ValueError("give one --degree per --order")
    if args.exact:
        fit = analytic.fit_linear_ode(F, orders[0], degrees[0])
        print(fit.pretty())
        reports = [analytic.singularities(fit)]
    else:
        _, reports = analytic.diff_pade_scan(F, list(zip(orders, degrees)))
    rows = []
    for (q, D), rep in zip(zip(orders, degrees), reports):
        print("approximant order %d degree %d" % (q, D))
        print(rep)
        for loc, ex, kind in rep.rows():
            rows.append([q, D, loc.real, loc.imag, ex.real, ex.imag, kind])
    out["dominant"] = [str(r.dominant.location) if r.dominant else None for r in reports]
    if args.out:
        with open(args.out, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["order", "degree", "re_x", "im_x", "re_exponent", "im_exponent", "kind"])
            w.writerows(rows)
    return EXIT_OK


def cmd_borel(args, out):
    from .pipeline import export_series
    F = _source(args)
    G = F.inverse_borel() if args.inverse else F.borel()
    if args.out:
        export_series(G, args.out)
    out["head"] = [str(c) for c in G.coeffs[:10]]
    print(" ".join(out["head"]))
    return EXIT_OK


def cmd_crt_combine(args, out):
    from .pipeline import ResidueBundle, crt_combine, export_series
    bundle = ResidueBundle.from_files(args.files)
    F = crt_combine(bundle, strict=args.strict, workers=args.workers)
    if args.out:
        export_series(F, args.out, (bundle.meta.get("names") or [None])[0])
    out.update(primes=len(bundle.primes), order=F.order, sufficient=bundle.sufficient())
    print("combined %d primes, %d terms" % (len(bundle.primes), F.order + 1))
    return EXIT_OK


def cmd_prime_plan(args, out):
    from .pipeline import prime_plan
    plan = prime_plan(args.N, args.bits)
    out.update(count=plan.count, primes=plan.primes, bound_bits=plan.bound_bits)
    print("%d primes of %d bits (product must exceed %d bits)" % (plan.count, args.bits, plan.bound_bits))
    if args.out:
        with open(args.out, "w") as fh:
            fh.write("\n".join(map(str, plan.primes)) + "\n")
    return EXIT_OK


def cmd_verify_funceq(args, out):
    from .pipeline import FunctionalEquation, verify_funceq
    from .seriesio import parse_modulus
    eq = FunctionalEquation.from_expr(parse_modulus(args.modulus), args.s, args.a, args.b)
    rep = verify_funceq(_source(args), eq)
    out.update(passed=rep.passed, first_failure=rep.first_failure, checked_through=rep.checked_through)
    print(rep)
    return EXIT_OK if rep.passed else EXIT_NOT_FOUND


def cmd_batch(args, out):
    from .pipeline import run_batch
    report = run_batch(args.manifest, workers=args.workers)
    out.update(report)
    for row in report["jobs"]:
        extra = row.get("error") or row.get("certificate") or ""
        print("%-24s %-16s %-10s %7.2fs %s" % (row["id"], row["kind"], row["status"], row["seconds"], extra))
    print("summary: %s" % json.dumps(report["summary"], sort_keys=True))
    return EXIT_ERROR if report["errors"] else EXIT_OK


COMMANDS = {
    "generate": cmd_generate,
    "reduce": cmd_reduce,
    "guess-algebraic": cmd_guess_algebraic,
    "guess-ade": cmd_guess_ade,
    "guess-recurrence": cmd_guess_recurrence,
    "analyze": cmd_analyze,
    "borel": cmd_borel,
    "crt-combine": cmd_crt_combine,
    "prime-plan": cmd_prime_plan,
    "verify-funceq": cmd_verify_funceq,
    "batch": cmd_batch,
}


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    if args.seed is not None:
        random.seed(args.seed)
    if args.strict:
        warnings.simplefilter("error")
    out = {"command": args.command}
    try:
        code = COMMANDS[args.command](args, out)
    except NotFound as exc:
        out.update(status="not-found", certificate=exc.certificate)
        print("not found: %s" % exc.certificate)
        code = EXIT_NOT_FOUND
    except (DAlgebraError, ValueError, OSError, ZeroDivisionError, Warning) as exc:
        out.update(status="error", error="%s: %s" % (type(exc).__name__, exc))
        print("error: %s" % exc, file=sys.stderr)
        code = EXIT_ERROR
    else:
        out.setdefault("status", "ok" if code == EXIT_OK else "fail")
    if args.report:
        with open(args.report, "w") as fh:
            json.dump(out, fh, indent=1, sort_keys=True, default=str)
    return code


if __name__ == "__main__":
    sys.exit(main())
