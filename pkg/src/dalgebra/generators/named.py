"""Closed list of concrete series built from the series-core primitives."""
from fractions import Fraction

from ..domain import QQ
from ..series import PowerSeries
from .hypergeometric import HypergeometricSpec, hypergeometric_series


def _exact(s):
    return s.to_integer() if s.is_integral() else s


def xlog1p(N):
    """x*ln(1+x) = sum_{k>=2} (-1)^k x^k/(k-1)."""
    c = [Fraction(0)] * (N + 1)
    for k in range(2, N + 1):
        c[k] = Fraction((-1) ** k, k - 1)
    return PowerSeries(QQ, c, N, _raw=True)


def h1_series(N):
    """2F1([1/2,1/2],[1],16x) = sum binomial(2n,n)^2 x^n."""
    return hypergeometric_series(HypergeometricSpec(["1/2", "1/2"], [1], 16), N)


def composition_h1h2(N, v=1):
    """H1(v*H2(x)) with H2 = x*H1(x); v = 1 is the plain composition."""
    h1 = h1_series(N).to_integer()
    inner = h1.shift(1).truncate(N)
    inner = inner.scale(v) if Fraction(v).denominator == 1 else inner.to_rational().scale(v)
    if isinstance(v, int) or Fraction(v).denominator == 1:
        return h1.compose(inner)
    return _exact(h1.to_rational().compose(inner.to_rational()))


def root_pair_parts(N):
    h1 = hypergeometric_series(HypergeometricSpec(["1/2", "1/2"], [1], 320, 2), N)
    h2 = hypergeometric_series(HypergeometricSpec(["1/3", "1/3"], [1], 540, 2), N)
    return h1, h2


def root_zminus(N):
    """z- = H1 - sqrt(H1^2 - H2), H1 = 2F1([1/2,1/2],[1],320x^2), H2 = 2F1([1/3,1/3],[1],540x^2)."""
    h1, h2 = root_pair_parts(N + 1)
    disc = h1 * h1 - h2
    return _exact((h1.truncate(N) - disc.sqrt()))


def root_zplus(N):
    h1, h2 = root_pair_parts(N + 1)
    disc = h1 * h1 - h2
    return _exact((h1.truncate(N) + disc.sqrt()))


def pullback_2f1_xlog(N, alpha=0):
    """2F1([1/2,1/2],[1], 16*x*ln(1+x) + 16*alpha*x)."""
    outer = hypergeometric_series(HypergeometricSpec(["1/2", "1/2"], [1], 16), N)
    inner = xlog1p(N) + PowerSeries(QQ, [0, Fraction(alpha)], N)
    return _exact(outer.compose(inner))


def ratio_2f1_2f1(N):
    """2F1([1/3,1/3],[1],27x) / 2F1([1/2,1/2],[1],16x)."""
    num = hypergeometric_series(HypergeometricSpec(["1/3", "1/3"], [1], 27), N)
    den = hypergeometric_series(HypergeometricSpec(["1/2", "1/2"], [1], 16), N)
    return _exact(num * den.reciprocal())


def ratio_4f3_2f1(N):
    """4F3([1/2]*4,[1,1,1],256x) / 2F1([1/2,1/2],[1],16x)."""
    num = hypergeometric_series(HypergeometricSpec(["1/2"] * 4, [1, 1, 1], 256), N)
    den = hypergeometric_series(HypergeometricSpec(["1/2", "1/2"], [1], 16), N)
    return _exact(num * den.reciprocal())


def reciprocal_xlog(N, gamma=0):
    """1/(1 - x*ln(1+x) - gamma*x)."""
    g = xlog1p(N) + PowerSeries(QQ, [0, Fraction(gamma)], N)
    return (1 - g).reciprocal()


NAMED = {
    "composition_H1H2": composition_h1h2,
    "root_zminus": root_zminus,
    "root_zplus": root_zplus,
    "pullback_2F1_xlog": pullback_2f1_xlog,
    "ratio_2F1_2F1": ratio_2f1_2f1,
    "ratio_4F3_2F1": ratio_4f3_2f1,
    "reciprocal_xlog": reciprocal_xlog,
}


def named_construction(name, N):
    if N < 1:
        raise ValueError("order must be >= 1")
    try:
        fn = NAMED[name]
    except KeyError:
        raise ValueError("unknown construction %r; choose from %s" % (name, ", ".join(sorted(NAMED))))
    return fn(N)
