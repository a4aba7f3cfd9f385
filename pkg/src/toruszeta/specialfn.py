"""Self-contained special functions: complex Gamma, Riemann zeta with
analytic continuation, the modified Bessel function K_nu by quadrature of
its integral definition, divisor sums, Dedekind sums and Lambert series.

Everything here is a pure function of its inputs; the only state is a
bounded, thread-safe memo on the Bessel evaluator.
"""

from __future__ import annotations

import cmath
import math
import warnings
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .domain import DEFAULT_PRECISION, Precision, require_finite
from .errors import DomainError, PoleError, TruncationWarning

_POLE_TOL = 1e-12

# Lanczos approximation, g = 607/128 with 15 coefficients (Godfrey's set);
# relative accuracy ~1e-15 on the right half-plane.
_LANCZOS_G = 607.0 / 128.0
_LANCZOS_C = (
    0.99999999999999709182,
    57.156235665862923517,
    -59.597960355475491248,
    14.136097974741747174,
    -0.49191381609762019978,
    0.33994649984811888699e-4,
    0.46523628927048575665e-4,
    -0.98374475304879564677e-4,
    0.15808870322491248884e-3,
    -0.21026444172410488319e-3,
    0.21743961811521264320e-3,
    -0.16431810653676389022e-3,
    0.84418223983852743293e-4,
    -0.26190838401581408670e-4,
    0.36899182659531622704e-5,
)

# Bernoulli numbers B_2 .. B_60 (even index) for the Euler-Maclaurin tail.
_BERNOULLI = (
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
    854513.0 / 138.0,
    -236364091.0 / 2730.0,
    8553103.0 / 6.0,
    -23749461029.0 / 870.0,
    8615841276005.0 / 14322.0,
    -7709321041217.0 / 510.0,
    2577687858367.0 / 6.0,
    -26315271553053477373.0 / 1919190.0,
    2929993913841559.0 / 6.0,
    -261082718496449122051.0 / 13530.0,
    1520097643918070802691.0 / 1806.0,
    -27833269579301024235023.0 / 690.0,
    596451111593912163277961.0 / 282.0,
    -5609403368997817686249127547.0 / 46410.0,
    495057205241079648212477525.0 / 66.0,
    -801165718135489957347924991853.0 / 1590.0,
    29149963634884862421418123812691.0 / 798.0,
    -2479392929313226753685415739663229.0 / 870.0,
    84483613348880041862046775994036021.0 / 354.0,
    -1215233140483755572040304994079820246041491.0 / 56786730.0,
)


def sinpi(z: complex) -> complex:
    """sin(pi z) with exact integer-argument reduction (accurate near zeros)."""
    z = complex(z)
    m = math.floor(z.real + 0.5)
    r = complex(z.real - m, z.imag)
    val = cmath.sin(math.pi * r)
    return -val if m % 2 else val


def cospi(z: complex) -> complex:
    """cos(pi z), reduced like sinpi."""
    z = complex(z)
    return sinpi(complex(z.real + 0.5, z.imag))


def _near_nonpositive_integer(s: complex, tol: float = _POLE_TOL) -> bool:
    n = round(s.real)
    return n <= 0 and abs(s - n) < tol


def gamma(s: complex) -> complex:
    """Gamma(s) on the cut-free complex plane; PoleError at 0, -1, -2, ..."""
    s = complex(s)
    if _near_nonpositive_integer(s):
        raise PoleError(f"gamma pole at s = {s}")
    if s.real < 0.5:
        # reflection; sinpi keeps full accuracy next to the (excluded) poles
        return require_finite(math.pi / (sinpi(s) * gamma(1.0 - s)), "gamma")
    z = s - 1.0
    acc = _LANCZOS_C[0]
    for k in range(1, len(_LANCZOS_C)):
        acc += _LANCZOS_C[k] / (z + k)
    t = z + _LANCZOS_G + 0.5
    val = math.sqrt(2.0 * math.pi) * t ** (z + 0.5) * cmath.exp(-t) * acc
    return require_finite(val, "gamma")


def rgamma(s: complex) -> complex:
    """1/Gamma(s), entire; exactly 0 at the nonpositive integers."""
    s = complex(s)
    if _near_nonpositive_integer(s):
        return 0.0 + 0.0j
    if s.real < 0.5:
        return sinpi(s) * gamma(1.0 - s) / math.pi
    return 1.0 / gamma(s)


def _zeta_euler_maclaurin(s: complex) -> complex:
    """Euler-Maclaurin evaluation, reliable for Re s >= -1 (any Im s tested,
    |Im s| <= ~40); N grows with |Im s| to keep the correction series decaying."""
    n_cut = max(18, int(1.3 * abs(s.imag)) + 8)
    terms = [n ** (-s) for n in range(1, n_cut)]
    head_re = math.fsum(t.real for t in terms)
    head_im = math.fsum(t.imag for t in terms)
    head = complex(head_re, head_im)
    tail = n_cut ** (1.0 - s) / (s - 1.0) + 0.5 * n_cut ** (-s)
    # correction sum: B_2k/(2k)! * s(s+1)...(s+2k-2) * N^(-s-2k+1)
    poch = s
    power = n_cut ** (-s - 1.0)
    fact = 2.0
    corr = 0.0 + 0.0j
    n_cut_sq = float(n_cut) * n_cut
    prev_mag = math.inf
    for k, b2k in enumerate(_BERNOULLI, start=1):
        term = (b2k / fact) * poch * power
        mag = abs(term)
        if mag > prev_mag:  # asymptotic series turned; stop at its best
            break
        corr += term
        if mag < 1e-18 * max(1.0, abs(head + tail)):
            break
        prev_mag = mag
        poch = poch * (s + 2 * k - 1) * (s + 2 * k)
        power = power / n_cut_sq
        fact = fact * (2 * k + 1) * (2 * k + 2)
    return head + tail + corr


def riemann_zeta(s: complex) -> complex:
    """Riemann zeta with analytic continuation; PoleError at s = 1.

    Euler-Maclaurin handles Re s >= -1 directly; further left the summation
    pieces cancel catastrophically in double precision, so the reflection
    zeta(s) = 2^s pi^(s-1) sin(pi s/2) Gamma(1-s) zeta(1-s) is used instead.
    """
    s = complex(s)
    if abs(s - 1.0) < _POLE_TOL:
        raise PoleError("riemann_zeta pole at s = 1")
    if s.real >= -1.0:
        return require_finite(_zeta_euler_maclaurin(s), "riemann_zeta")
    sin_half = sinpi(0.5 * s)
    if sin_half == 0:  # trivial zeros, exactly
        return 0.0 + 0.0j
    chi = 2.0**s * math.pi ** (s - 1.0) * sin_half * gamma(1.0 - s)
    return require_finite(chi * _zeta_euler_maclaurin(1.0 - s), "riemann_zeta")


def _bessel_k_quad(nu: complex, x: float, rel_tol: float) -> complex:
    """exp(x) * K_nu(x) by quadrature.

    Substituting t = e^w in the defining integral
    K_nu(x) = 1/2 int_0^inf exp(-(x/2)(t + 1/t)) t^(nu-1) dt
    folds the two half-lines together into
    K_nu(x) = int_0^inf exp(-x cosh w) cosh(nu w) dw,
    which is manifestly even in nu.  The e^x rescaling keeps the integrand
    O(1) so the result is accurate relative to K's own (tiny) scale.
    """
    from .quadrature import adaptive_gauss

    a = abs(complex(nu).real)
    # find w_max with x(cosh w - 1) - a*w > ~45
    w_max = 1.0
    for _ in range(40):
        need = (45.0 + a * w_max + math.log1p(w_max)) / x + 1.0
        new = math.acosh(max(need, 1.0 + 1e-12))
        if new <= w_max:
            break
        w_max = new
    w_max = max(w_max, 1.0)

    nu_c = complex(nu)
    nu_arg: complex | float = nu_c if nu_c.imag != 0 else nu_c.real

    def f(w: np.ndarray) -> np.ndarray:
        # cosh(w) - 1 = -expm1(w) expm1(-w) / 2, accurate near w = 0
        return np.exp(0.5 * x * np.expm1(w) * np.expm1(-w)) * np.cosh(nu_arg * w)

    res = adaptive_gauss(f, 0.0, w_max, rel_tol=rel_tol)
    return res.value


@lru_cache(maxsize=8192)
def _bessel_k_cached(nu_re: float, nu_im: float, x: float, rel_tol: float) -> complex:
    return _bessel_k_quad(complex(nu_re, nu_im), x, rel_tol)


def bessel_k(nu: float | complex, x: float, prec: Precision = DEFAULT_PRECISION) -> float | complex:
    """Modified Bessel function of the second kind K_nu(x), x > 0.

    Real order returns a float; complex order (needed for evaluation at
    complex s through nu = 1/2 - s) goes through the identical quadrature
    path and returns a complex value.  K_nu = K_{-nu} holds by construction.
    """
    if not x > 0:
        raise DomainError(f"bessel_k requires x > 0, got {x}")
    nu_c = complex(nu)
    scaled = _bessel_k_cached(abs(nu_c.real), abs(nu_c.imag), float(x), prec.quad_rel_tol)
    # cosh is even, so only |Re nu|, |Im nu| matter up to conjugation
    if nu_c.imag != 0 and (nu_c.real < 0) != (nu_c.imag < 0):
        scaled = scaled.conjugate()
    val = scaled * math.exp(-x)
    if isinstance(nu, complex) and nu.imag != 0:
        return val
    return val.real


def sigma(v: complex, n: int) -> complex:
    """Divisor power sum sigma_v(n) = sum over d|n of d^v, by enumeration."""
    if n < 1:
        raise DomainError(f"sigma requires n >= 1, got {n}")
    v = complex(v)
    total = 0.0 + 0.0j
    d = 1
    while d * d <= n:
        if n % d == 0:
            total += d**v
            e = n // d
            if e != d:
                total += e**v
        d += 1
    return total


def dedekind_sum_exact(h: int, k: int) -> Fraction:
    """s(h, k) = sum_{n=1}^{k-1} (n/k)(hn/k - floor(hn/k) - 1/2), exactly."""
    if k < 1:
        raise DomainError(f"dedekind_sum requires k >= 1, got {k}")
    total = Fraction(0)
    for n in range(1, k):
        hn = Fraction(h * n, k)
        total += Fraction(n, k) * (hn - math.floor(hn) - Fraction(1, 2))
    return total


def dedekind_sum(h: int, k: int) -> float:
    """Dedekind sum s(h, k) (exact rational arithmetic, returned as float)."""
    return float(dedekind_sum_exact(h, k))


def lambert_series(
    alpha: complex, q: complex, prec: Precision = DEFAULT_PRECISION
) -> complex:
    """sum_{n>=1} n^alpha q^n / (1 - q^n) for |q| < 1.

    Stops once the term bound drops below series_tail_tol and a geometric
    ratio bounds the remainder below it too; hitting n_max first raises a
    TruncationWarning.
    """
    q = complex(q)
    if abs(q) >= 1.0:
        raise DomainError(f"lambert_series requires |q| < 1, got |q| = {abs(q)}")
    if q == 0:
        return 0.0 + 0.0j
    alpha = complex(alpha)
    aq = abs(q)
    total = 0.0 + 0.0j
    qn = 1.0 + 0.0j
    for n in range(1, prec.n_max + 1):
        qn *= q
        term = n**alpha * qn / (1.0 - qn)
        total += term
        bound = abs(term)
        if bound < prec.series_tail_tol:
            ratio = aq * ((n + 1.0) / n) ** max(alpha.real, 0.0)
            if ratio < 1.0 and bound * ratio / (1.0 - ratio) < prec.series_tail_tol:
                break
    else:
        warnings.warn(
            f"lambert_series hit n_max = {prec.n_max} before the tail bound",
            TruncationWarning,
            stacklevel=2,
        )
    return total
