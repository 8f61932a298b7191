"""Order-by-order power series solutions of algebraic differential equations."""
from dataclasses import dataclass
from fractions import Fraction

from ..ade.relation import AdeRelation, relation_from_expression, residual_series, verify_ade
from ..domain import QQ
from ..errors import Inconsistent, NonUniqueExtension
from ..series import PowerSeries


@dataclass
class AdeInitialData:
    """An ADE, the prescribed coefficients a_0..a_s and the target order.

    lag is the offset between a coefficient index n and the residual index
    n + lag where a_n first enters linearly; None means detect it at the
    first free step.
    """

    relation: AdeRelation
    prescribed: list
    order: int
    lag: object = None


def _residual(rel, coeffs, upto):
    """Residual coefficients 0..upto for the polynomial with the given coefficients."""
    k = rel.form.k
    n = upto + k
    c = list(coeffs[:n + 1]) + [Fraction(0)] * max(0, n + 1 - len(coeffs))
    return residual_series(PowerSeries(QQ, c, n, _raw=True), rel)


def ade_series_solve(data):
    """Extend the prescribed coefficients to a series solution through data.order.

    At step n the unknown a_n enters the residual coefficient n + lag
    affinely; the coefficient is solved from that single equation. A zero
    pivot with zero residual means a_n is free (NonUniqueExtension); a zero
    pivot with nonzero residual means no solution (Inconsistent).
    """
    rel = data.relation
    N = data.order
    a = [Fraction(c) for c in data.prescribed]
    if not a:
        raise ValueError("at least a_0 must be prescribed")
    lag = data.lag
    n = len(a)
    if lag is None and n <= N:
        lag = _detect_lag(rel, a, n)
    if lag is not None:
        # everything the prescribed coefficients determine must already vanish
        top = min(n, N + 1) + lag - 1
        if top >= 0:
            res = _residual(rel, a, top)
            bad = next((i for i, c in enumerate(res) if c), None)
            if bad is not None:
                raise Inconsistent(bad, res[bad])
    while n <= N:
        e = n + lag
        r0 = _residual(rel, a + [Fraction(0)], e)[e]
        r1 = _residual(rel, a + [Fraction(1)], e)[e]
        r2 = _residual(rel, a + [Fraction(2)], e)[e]
        if r2 - 2 * r1 + r0:
            raise NonUniqueExtension(n)
        pivot = r1 - r0
        if not pivot:
            if r0:
                raise Inconsistent(n, r0)
            raise NonUniqueExtension(n)
        a.append(-r0 / pivot)
        n += 1
    out = PowerSeries(QQ, a[:N + 1], N, _raw=True)
    report = verify_ade(out, rel)
    if not report.passed:
        raise Inconsistent(report.first_failure, report.residual)
    return out.to_integer() if out.is_integral() else out


def _detect_lag(rel, a, n):
    """Smallest e - n such that residual coefficient e depends on a_n."""
    k = rel.form.k
    span = n + k + 2 * (rel.form.d + 2)
    r0 = _residual(rel, a + [Fraction(0)], span)
    r1 = _residual(rel, a + [Fraction(1)], span)
    for e in range(len(r0)):
        if r0[e] != r1[e]:
            return e - n
    raise NonUniqueExtension(n)


def solve_expression(text, k, prescribed, order, params=None, lag=None):
    """Convenience wrapper: parse the ADE text (y_j = F^(j)) and solve."""
    rel = relation_from_expression(text, k, params)
    return ade_series_solve(AdeInitialData(rel, list(prescribed), order, lag))


TUTTE_Q4 = "(6*x*y1 - 10*y0 - 4*x)*y2 + 96*x"

GENERALIZED_TUTTE = ("-2*M^2*(M-N)*x + (M*x + 10*y0 - 6*x*y1)*y2"
                     " - M*(M-4*N)*(20*y0 - 18*x*y1 + 9*x^2*y2)")

# N_1 for 1/(1 - x*ln(1+x) - gamma*x)
RECIPROCAL_XLOG = "(1+x)*y0 - (x^2+x+1)*y0^2 + x*(1+x)*y1"


def tutte_family(A, N):
    """The q = 4 family (A-1)x + 12x^2/A + 24x^3/A^3 + ... from the ODE.

    The ODE is solved with a_0 = 0, a_1 = A - 1; each later coefficient is
    fixed by a nonzero pivot proportional to A.
    """
    A = Fraction(A)
    if A == 0:
        raise ValueError("A must be nonzero")
    return solve_expression(TUTTE_Q4, 2, [0, A - 1], N, lag=-1)


def generalized_tutte(M, Nparam, order):
    """Series solution of the two-parameter generalisation, leading term M(M-N)x^2."""
    params = {"M": Fraction(M), "N": Fraction(Nparam)}
    return solve_expression(GENERALIZED_TUTTE, 2, [0, 0], order, params, lag=-1)


def composition_ade():
    """The order-4 ADE shared by every H1(v*x*H1(x)), H1 = 2F1([1/2,1/2],[1],16x).

    Homogeneous of degree 11 in F..F''''; stored as one monomial per line
    (regenerate with scripts/derive_composition_ade.py).
    """
    from importlib import resources

    from ..ade.forms import AdeForm

    text = resources.files("dalgebra.data").joinpath("composition_ade.txt").read_text()
    mapping = {}
    for line in text.splitlines():
        if not line.strip() or line.startswith("#"):
            continue
        c, dx, *e = (int(t) for t in line.split())
        mapping.setdefault(tuple(e), [0] * 33)[dx] += c
    return AdeRelation.from_terms(AdeForm(11, 4, 32, True), mapping)


def composition_family(v, N):
    """Series solution 1 + 4v x + 4v(9v+4) x^2 + ... of composition_ade()."""
    v = Fraction(v)
    return ade_series_solve(AdeInitialData(composition_ade(), [1, 4 * v], N))
