"""Eliminating auxiliary algebraic functions by successive resultants.

The polynomial arithmetic (subresultant sequences over GF(p)[x, z]) is
delegated to sympy's sparse polynomial rings.
"""
import sympy
from sympy.polys.domains import GF, ZZ
from sympy.polys.rings import ring

from ..errors import ZeroResultant
from ..ntheory import is_prime
from .bipoly import BivariatePoly

GENERATORS = ("A1", "A2", "x", "z")


def _to_ring(R, text):
    expr = sympy.sympify(str(text).replace("^", "**"), locals={g: sympy.Symbol(g) for g in GENERATORS})
    extra = expr.free_symbols - {sympy.Symbol(g) for g in GENERATORS}
    if extra:
        raise ValueError("unexpected symbols %s" % sorted(map(str, extra)))
    return R(sympy.Poly(expr, *[sympy.Symbol(g) for g in GENERATORS]).as_expr())


def resultant_eliminate(relation, defA1, defA2, modulus):
    """Res_A2(Res_A1(relation, defA1), defA2) as a polynomial in x and z.

    All three inputs are polynomials in x, z, A1, A2 (text or sympy
    expressions); defA1 must not involve A2 and defA2 must not involve A1.
    The result is returned as a BivariatePoly with y standing for z.
    """
    if modulus and not is_prime(modulus):
        raise ValueError("modulus must be prime (or 0 for integers)")
    dom = GF(modulus) if modulus else ZZ
    R, A1, A2, x, z = ring(",".join(GENERATORS), dom)
    rel = _to_ring(R, relation)
    d1 = _to_ring(R, defA1)
    d2 = _to_ring(R, defA2)
    if d1.degree(A2) > 0 or d2.degree(A1) > 0:
        raise ValueError("defA1 must be free of A2 and defA2 free of A1")
    if d1.degree(A1) < 1 or d2.degree(A2) < 1:
        raise ValueError("defining polynomials must involve their variable")
    # first generator is eliminated; the result lives in (A2, x, z)
    r1 = rel.resultant(d1)
    if not r1:
        raise ZeroResultant("relation and defA1 share a factor in A1")
    S = r1.ring
    d2s = S({m[1:]: c for m, c in d2.terms()})
    r2 = r1.resultant(d2s)
    if not r2:
        raise ZeroResultant("intermediate resultant and defA2 share a factor in A2")
    terms = {}
    for (a, b), c in r2.terms():
        c = int(c)
        terms[(a, b)] = c % modulus if modulus else c
    return BivariatePoly(terms, modulus)
