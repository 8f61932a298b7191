"""Parse small polynomial expressions such as "q*(n+1)*(n+2)" or "i*(i+1)*(3*n-3*i+1)".

Only +, -, *, integer powers, integer/rational literals and names are
accepted. Names listed in `params` are replaced by their exact values; the
remaining names must be among `variables`. The result is a dict mapping
exponent tuples (one entry per variable) to nonzero Fractions.
"""
import ast
from fractions import Fraction

from .errors import FormatError


def _add(p, q):
    out = dict(p)
    for k, v in q.items():
        s = out.get(k, 0) + v
        if s:
            out[k] = s
        else:
            out.pop(k, None)
    return out


def _mul(p, q):
    out = {}
    for k1, v1 in p.items():
        for k2, v2 in q.items():
            k = tuple(a + b for a, b in zip(k1, k2))
            s = out.get(k, 0) + v1 * v2
            if s:
                out[k] = s
            else:
                out.pop(k, None)
    return out


def parse_poly(text, variables=("n",), params=None):
    params = params or {}
    nv = len(variables)
    zero_exp = (0,) * nv

    def const(c):
        c = Fraction(c)
        return {zero_exp: c} if c else {}

    def walk(node):
        if isinstance(node, ast.Expression):
            return walk(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, int) and not isinstance(node.value, bool):
            return const(node.value)
        if isinstance(node, ast.Name):
            if node.id in variables:
                e = [0] * nv
                e[variables.index(node.id)] = 1
                return {tuple(e): Fraction(1)}
            if node.id in params:
                return const(params[node.id])
            raise FormatError("unknown name %r in %r" % (node.id, text))
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            p = walk(node.operand)
            return {k: -v for k, v in p.items()} if isinstance(node.op, ast.USub) else p
        if isinstance(node, ast.BinOp):
            if isinstance(node.op, ast.Pow):
                if not (isinstance(node.right, ast.Constant) and isinstance(node.right.value, int)
                        and node.right.value >= 0):
                    raise FormatError("exponents must be non-negative integer literals in %r" % text)
                base = walk(node.left)
                out = const(1)
                for _ in range(node.right.value):
                    out = _mul(out, base)
                return out
            a, b = walk(node.left), walk(node.right)
            if isinstance(node.op, ast.Add):
                return _add(a, b)
            if isinstance(node.op, ast.Sub):
                return _add(a, {k: -v for k, v in b.items()})
            if isinstance(node.op, ast.Mult):
                return _mul(a, b)
            if isinstance(node.op, ast.Div):
                if set(b) - {zero_exp}:
                    raise FormatError("division by a non-constant in %r" % text)
                d = b.get(zero_exp, 0)
                if not d:
                    raise FormatError("division by zero in %r" % text)
                return {k: v / d for k, v in a.items()}
        raise FormatError("unsupported syntax in %r" % text)

    try:
        tree = ast.parse(str(text).replace("^", "**"), mode="eval")
    except SyntaxError:
        raise FormatError("cannot parse %r" % text)
    return walk(tree)


def eval_poly(poly, values):
    total = Fraction(0)
    for exps, c in poly.items():
        t = c
        for v, e in zip(values, exps):
            if e:
                t *= v ** e
        total += t
    return total


def parse_value(v):
    """Exact rational from an int, a Fraction or a string like '-3/2'."""
    if isinstance(v, Fraction):
        return v
    if isinstance(v, int):
        return Fraction(v)
    if isinstance(v, float):
        raise FormatError("floats are not exact parameters: %r" % v)
    return Fraction(str(v).strip())
