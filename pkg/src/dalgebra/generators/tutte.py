"""Tutte's quadratic recurrence for planar triangulation colourings and relatives."""
from fractions import Fraction

from ..domain import QQ
from ..polyexpr import parse_value
from ..series import PowerSeries
from .recurrence import ConvTerm, LinearTerm, RecurrenceSpec, convolution_series


def tutte_spec(q):
    """q(n+1)(n+2) h[n+2] = q(q-4)(3n-1)(3n-2) h[n+1]
                            + 2 sum_{i=1}^{n} i(i+1)(3n-3i+1) h[i+1] h[n-i+2]."""
    q = parse_value(q)
    if q == 0:
        raise ZeroDivisionError("q = 0 makes the leading factor vanish")
    return RecurrenceSpec(
        name="tutte(q=%s)" % q,
        initial_terms=[Fraction(0), Fraction(0), q * (q - 1)],
        target=2,
        leading="q*(n+1)*(n+2)",
        linear=[LinearTerm("q*(q-4)*(3*n-1)*(3*n-2)", 1)],
        convolution=[ConvTerm("2*i*(i+1)*(3*n-3*i+1)", a=1, b=2, ilo=1, jlo=0)],
        parameters={"q": q},
    )


def tutte_series(q, N, method=None):
    """Series h_0..h_N in the ExactRational domain (integral for integer q)."""
    return convolution_series(tutte_spec(q), N, method)


def tutte_series_alt(q, N):
    """Direct loop over the rearranged form of the recurrence

        q(n+1)(n+2) h[n+2] = q(q-4)(9n(n+1) - 18(n+1) + 20) h[n+1]
                             + sum_{i=1}^{n} (i(i+1) h[i+1]) ((6(n-i+2) - 10) h[n-i+2])

    which mirrors the term-by-term shape of the differential equation
    (9x^2 H'' - 18x H' + 20H and (6xH' - 10H) H''). Independent check only.
    """
    q = parse_value(q)
    h = [Fraction(0), Fraction(0), q * (q - 1)]
    for n in range(1, N - 1):
        s = Fraction(0)
        for i in range(1, n + 1):
            s += (i * (i + 1) * h[i + 1]) * ((6 * (n - i + 2) - 10) * h[n - i + 2])
        rhs = q * (q - 4) * (9 * n * (n + 1) - 18 * (n + 1) + 20) * h[n + 1] + s
        h.append(rhs / (q * (n + 1) * (n + 2)))
    return h[:N + 1]


def divergent_c1_spec():
    """h[n+2] = sum_{i=1}^{n} i(i+1)(3n-3i+1) h[i+1] h[n-i+2], h_2 = 1."""
    return RecurrenceSpec(
        name="divergent_c1",
        initial_terms=[Fraction(0), Fraction(0), Fraction(1)],
        target=2,
        leading="1",
        convolution=[ConvTerm("i*(i+1)*(3*n-3*i+1)", a=1, b=2, ilo=1, jlo=0)],
    )


def divergent_c2_spec():
    """h[n+2] = sum_{i=1}^{n} i h[i+1] h[n-i+2], h_2 = 1."""
    return RecurrenceSpec(
        name="divergent_c2",
        initial_terms=[Fraction(0), Fraction(0), Fraction(1)],
        target=2,
        leading="1",
        convolution=[ConvTerm("i", a=1, b=2, ilo=1, jlo=0)],
    )


def tutte_normalized(q, N, method=None):
    """h_n / (q(q-1)): x^2 + (q-2) * sum_{n>=3} P_n(q) x^n."""
    q = parse_value(q)
    if q == 1:
        raise ZeroDivisionError("q = 1 makes the normalizing factor vanish")
    H = tutte_series(q, N, method).to_rational()
    c = [a / (q * (q - 1)) for a in H.coeffs]
    out = PowerSeries(QQ, c, N, _raw=True)
    return out.to_integer() if out.is_integral() else out
