"""Derive the order-4 ADE satisfied by F = H1(v*x*H1(x)) for every v.

H1 = 2F1([1/2,1/2],[1],16x) and u = v*x*H1(x) satisfies
x^2(1-16x)u'' - x u' + (1-4x)u = 0, so p = u'/u obeys a Riccati equation.
With r = F'/F the hypergeometric equation for H1 evaluated at u gives u as
a rational function w(x, p, r, r'). Requiring w'/w = p leaves a relation in
p; eliminating p against its derivative by a resultant gives an equation in
r, r', r'', r''' free of v, which is cleared to a polynomial in F..F''''.

Run once to regenerate src/dalgebra/data/composition_ade.txt:

    python scripts/derive_composition_ade.py

Needs sympy and python-flint (pip install .[derive]); the multivariate
resultant is out of reach for sympy in reasonable time.
"""
import argparse
import time
from pathlib import Path

import flint
import sympy as sp

OUT = Path(__file__).resolve().parents[1] / "src" / "dalgebra" / "data" / "composition_ade.txt"


def rho_relation():
    """Polynomial in p, x, r0..r3 (sympy) whose p-resultant is wanted."""
    x, p = sp.symbols("x p")
    r = sp.symbols("r0:5")
    b = 1 / (x**2 * (1 - 16 * x))
    dp = b * (x * p - (1 - 4 * x)) - p**2

    def D(e):
        out = sp.diff(e, x) + sp.diff(e, p) * dp
        for k in range(4):
            out += sp.diff(e, r[k]) * r[k + 1]
        return out

    # K = u'^2 H1''(u)/H1(u), and r0 = u' H1'(u)/H1(u)
    K = r[1] + r[0]**2 - r[0] * b * (x - (1 - 4 * x) / p)
    w = (K + r[0] * p) / (16 * K + 4 * p**2 + 32 * r[0] * p)
    num, _ = sp.fraction(sp.together(D(w) - p * w))
    _, factors = sp.factor_list(sp.expand(num))
    core = max((f for f, _ in factors), key=lambda f: sp.Poly(f, p).degree())
    num2, _ = sp.fraction(sp.together(D(core)))
    return core, sp.expand(num2)


def to_flint(expr, ctx, names):
    P = sp.Poly(expr, *sp.symbols(names))
    return ctx.from_dict({m: int(c) for m, c in P.terms()})


def clear_to_F(g):
    """Substitute r_k = N_k / F0^(k+1) (r0 = F1/F0) and clear F0 powers."""
    fn = ["x", "F0", "F1", "F2", "F3", "F4"]
    ctx = flint.fmpz_mpoly_ctx.get(fn, "lex")
    x, F0, F1, F2, F3, F4 = ctx.gens()
    Fs = [F0, F1, F2, F3, F4]

    def D(e):
        out = e.derivative("x")
        for k in range(4):
            out += e.derivative(fn[1 + k]) * Fs[k + 1]
        return out

    N = [F1]
    for k in range(3):
        N.append(D(N[-1]) * F0 - (k + 1) * N[-1] * F1)
    terms = g.to_dict()
    W = max(sum((k + 1) * m[2 + k] for k in range(4)) for m in terms)
    total = ctx.from_dict({})
    for m, c in terms.items():
        w = sum((k + 1) * m[2 + k] for k in range(4))
        t = ctx.from_dict({(m[1], W - w, 0, 0, 0, 0): int(c)})
        for k in range(4):
            if m[2 + k]:
                t *= N[k] ** m[2 + k]
        total += t
    _, factors = total.factor()
    return max((f for f, _ in factors), key=len)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default=str(OUT))
    args = ap.parse_args()
    t0 = time.time()
    core, q2 = rho_relation()
    names = ["p", "x", "r0", "r1", "r2", "r3"]
    ctx = flint.fmpz_mpoly_ctx.get(names, "lex")
    res = to_flint(core, ctx, names).resultant(to_flint(q2, ctx, names), "p")
    _, factors = res.factor()
    # the spurious factors are tiny (powers of x, 4x-1, low-degree Riccati remnants)
    g = max((f for f, _ in factors), key=len)
    P = clear_to_F(g)
    rows = sorted(P.to_dict().items(), reverse=True)
    with open(args.out, "w") as fh:
        fh.write("# coefficient  deg_x  deg_F  deg_F'  deg_F''  deg_F'''  deg_F''''\n")
        for m, c in rows:
            fh.write("%d %s\n" % (int(c), " ".join(str(e) for e in m)))
    print("%d monomials, degrees %s, %.0f s" % (len(rows), P.degrees(), time.time() - t0))


if __name__ == "__main__":
    main()
