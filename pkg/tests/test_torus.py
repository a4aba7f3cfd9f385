import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from toruszeta.domain import Precision, Sl2zMatrix
from toruszeta.errors import DomainError, PoleError, TruncationWarning
from toruszeta.eta import eta
from toruszeta.quadrature import adaptive_gauss, tanh_sinh
from toruszeta.specialfn import bessel_k, gamma, rgamma, riemann_zeta, sigma
from toruszeta.torus import (
    ContourIntegrandParams,
    determinant_torus,
    determinant_torus_numeric,
    eigenvalues,
    eisenstein,
    eisenstein_cs,
    eisenstein_contour,
    eisenstein_direct,
    functional_equation_residual,
    heat_kernel,
    kronecker_constant,
    lambert_q1,
    mellin_remainder_tau_i,
    nan_yue_williams_sum,
    pole_residue,
    remainder_bessel,
    remainder_fe_residual,
    remainder_integral,
    theta_mellin_check,
    weight_integral_check,
    zeta_laplacian,
    zeta_laplacian_deriv0,
    zeta_laplacian_deriv0_numeric,
)

SETTINGS = settings(max_examples=25, deadline=None, derandomize=True)

TAUS = (1j, 0.5 + 0.866j, 0.2 + 1.7j)

# Sum over nonzero (m, n) of (m^2 + n^2)^(-s) factors as 4 zeta(s) beta(s);
# frozen from that brute-force-checkable identity
E_STAR_2_I = 6.02681203969194012
E_STAR_3_I = 4.65891361560384344

# q-product oracle values
ETA_I = 0.7682254223260566
DET_I = 0.3483009824214192          # |eta(i)|^4
DET_2I = 0.4925719731282440         # 4 |eta(2i)|^4
DERIV0_I = 1.0546882809956719       # -log|eta(i)|^4
EULER_GAMMA = 0.5772156649015329
KRONECKER_I = 2.5849817595792532    # 2 pi (gamma - log 2 - log|eta(i)|^2)


# ------------------------------------------------------------- eigenvalues


def test_eigenvalues_first_shell_at_i():
    evs = eigenvalues(1j, (2 * math.pi) ** 2)
    assert sorted((e.m, e.n) for e in evs) == [(-1, 0), (0, -1), (0, 1), (1, 0)]
    assert all(abs(e.lambda_sq - (2 * math.pi) ** 2) < 1e-9 for e in evs)


def test_eigenvalues_second_shell_at_i():
    evs = eigenvalues(1j, 2 * (2 * math.pi) ** 2)
    assert len(evs) == 8
    diag = [e for e in evs if abs(e.m) == 1 and abs(e.n) == 1]
    assert len(diag) == 4
    assert all(abs(e.lambda_sq - 2 * (2 * math.pi) ** 2) < 1e-9 for e in diag)


def test_eigenvalues_sorted_and_brute_force_count():
    tau = 0.5 + 1.1j
    bound = 100 * (2 * math.pi / 1.1) ** 2
    evs = eigenvalues(tau, bound)
    lam = [e.lambda_sq for e in evs]
    assert lam == sorted(lam)
    count = 0
    for m in range(-60, 61):
        for n in range(-60, 61):
            if (m, n) == (0, 0):
                continue
            if (2 * math.pi / 1.1) ** 2 * ((m + 0.5 * n) ** 2 + (1.1 * n) ** 2) <= bound:
                count += 1
    assert len(evs) == count


def test_eigenvalues_domain():
    with pytest.raises(DomainError):
        eigenvalues(1j, 0.0)


# ------------------------------------------------------------- direct sum


def brute_lattice_sum(s: complex, tau: complex, k_max: int) -> complex:
    """Literal square-truncation lattice sum, no tail handling."""
    t1, t2 = tau.real, tau.imag
    m = np.arange(-k_max, k_max + 1)
    mm, nn = np.meshgrid(m, m, indexing="ij")
    r2 = (mm + nn * t1) ** 2 + (nn * t2) ** 2
    r2[k_max, k_max] = 1.0  # placeholder; origin removed below
    vals = np.exp(-s * np.log(r2))
    vals[k_max, k_max] = 0.0
    return t2**s * complex(np.sum(vals))


def test_direct_matches_literal_brute_force_at_s3():
    # at s = 3 the raw square tail at K = 3000 is ~1e-13, so no tail model
    got = eisenstein_direct(3.0, 1j).value
    ref = brute_lattice_sum(3.0, 1j, 3000)
    assert abs(got - ref) < 5e-12


def test_direct_frozen_values_at_i():
    assert abs(eisenstein_direct(2.0, 1j).value - E_STAR_2_I) < 1e-11
    assert abs(eisenstein_direct(3.0, 1j).value - E_STAR_3_I) < 1e-11


def test_direct_requires_convergent_region():
    with pytest.raises(DomainError):
        eisenstein_direct(1.0 + 1e-13, 1j)
    with pytest.raises(DomainError):
        eisenstein_direct(0.5, 1j)


def test_direct_truncation_cap_warns():
    capped = Precision(n_max=50)
    with pytest.warns(TruncationWarning):
        res = eisenstein_direct(2.0, 1j, capped)
    assert res.diagnostics.warnings


# ---------------------------------------------------- Chowla-Selberg series


def test_cs_agrees_with_direct():
    for s in (2.0, 3.0, 2.5 + 1j):
        for tau in TAUS:
            a = eisenstein_direct(s, tau).value
            b = eisenstein_cs(s, tau).value
            assert abs(a - b) / abs(b) < 1e-9


def test_cs_at_zero_is_minus_one():
    for tau in TAUS:
        assert eisenstein_cs(0.0, tau).value == -1.0


def test_cs_pole_is_rejected():
    with pytest.raises(PoleError):
        eisenstein_cs(1.0, 1j)


def test_cs_residue_at_one():
    for tau in (1j, 0.2 + 1.3j):
        assert abs(pole_residue(tau) - math.pi) < 1e-7


def test_cs_half_point_smooth():
    # s = 1/2 sits on two cancelling poles; the averaged value must match
    # nearby regular evaluations extrapolated inward (even in h, so two
    # Richardson levels in h^2)
    v_half = eisenstein_cs(0.5, 1j).value

    def sym(h):
        return 0.5 * (eisenstein_cs(0.5 + h, 1j).value + eisenstein_cs(0.5 - h, 1j).value)

    a1, a2, a3 = sym(0.02), sym(0.01), sym(0.005)
    r1 = (4.0 * a2 - a1) / 3.0
    r2 = (4.0 * a3 - a2) / 3.0
    extrap = (16.0 * r2 - r1) / 15.0
    assert abs(v_half - extrap) < 2e-8
    assert abs(v_half - (-3.9002649195995054)) < 1e-9  # frozen regression value


# ------------------------------------------------------------- remainders


def cs_main_terms_oracle(s: complex, tau: complex) -> complex:
    """First two series terms, assembled from independently tested pieces."""
    t2 = tau.imag
    term1 = 2.0 * t2**s * riemann_zeta(2 * s)
    term2 = (
        2.0
        * math.pi
        * t2 ** (1 - s)
        * gamma(s - 0.5)
        * rgamma(s)
        * riemann_zeta(2 * s - 1)
        / math.sqrt(math.pi)
    )
    return term1 + term2


def test_remainder_bessel_is_direct_minus_main_terms():
    for tau in (1j, 0.5 + 0.866j):
        expect = eisenstein_direct(2.0, tau).value - cs_main_terms_oracle(2.0, tau)
        assert abs(remainder_bessel(2.0, tau) - expect) < 1e-10


def test_remainder_bessel_vanishes_at_zero():
    assert remainder_bessel(0.0, 1j) == 0.0
    # limit path s -> 0: the 1/Gamma prefactor kills the series
    for k in (4, 6, 8):
        assert abs(remainder_bessel(10.0**-k, 1j)) < 10.0 ** (-k + 1)


def test_remainder_double_sum_identity():
    # double sum over (n, k) against the divisor-function single sum
    s, tau = 0.7, 0.2 + 1.3j
    t1, t2 = tau.real, tau.imag
    nu = 0.5 - s
    double = 0.0 + 0.0j
    for n in range(1, 9):
        for k in range(1, 9):
            double += (
                cmath.exp(2j * math.pi * k * n * t1)
                * bessel_k(nu, 2 * math.pi * k * n * t2)
                * (k / n) ** (s - 0.5)
            )
    single = 0.0 + 0.0j
    for n in range(1, 65):
        single += (
            sigma(1 - 2 * s, n)
            * cmath.exp(2j * math.pi * n * t1)
            * bessel_k(nu, 2 * math.pi * n * t2)
            * n ** (s - 0.5)
        )
    assert abs(double - single) < 1e-13


def test_remainder_integral_equals_bessel():
    assert abs(remainder_integral(0.3, 0.25 + 1.1j) - remainder_bessel(0.3, 0.25 + 1.1j)) < 1e-8
    assert abs(remainder_integral(-0.5, 1j) - remainder_bessel(-0.5, 1j)) < 1e-8


def test_remainder_integral_domain():
    with pytest.raises(DomainError):
        remainder_integral(1.2, 1j)


def test_contour_branch_parameters():
    from toruszeta.domain import as_tau

    p = ContourIntegrandParams(2, as_tau(0.3 + 1.4j))
    assert p.branch_point == complex(-0.6, 2.8)
    assert p.branch_point.imag > 0
    with pytest.raises(DomainError):
        ContourIntegrandParams(0, as_tau(1j))


def test_remainder_integral_telescopes_at_s_zero():
    # at s = 0 the u-weight is 1 and each n-integral telescopes to the
    # boundary values of the log
    assert remainder_integral(0.0, 1j) == 0.0
    tau = 0.3 + 0.9j
    n = 1
    t1, t2 = tau.real, tau.imag

    def logderiv(u):
        rho = np.exp(-2 * math.pi * u - 2 * math.pi * n * t2)
        c = math.cos(2 * math.pi * n * t1)
        return 4 * math.pi * (rho * c - rho * rho) / (1 - 2 * rho * c + rho * rho)

    quad = (
        tanh_sinh(logderiv, 0.0, 1.0, tol=1e-14).value
        + adaptive_gauss(logderiv, 1.0, 9.0, rel_tol=1e-13).value
    )
    e1 = cmath.exp(2j * math.pi * n * tau)
    e2 = cmath.exp(-2j * math.pi * n * tau.conjugate())
    boundary = -cmath.log((1 - e1) * (1 - e2))
    assert abs(quad - boundary.real) < 1e-12


# ------------------------------------------------------- three-way agreement


def test_contour_agrees_with_cs_on_grid():
    for s_re in (-1.5, -0.5, 0.3, 0.7):
        for s_im in (0.0, 0.5, -0.5):
            s = complex(s_re, s_im)
            for tau in TAUS:
                a = zeta_laplacian(s, tau, "contour").value
                b = zeta_laplacian(s, tau, "chowla_selberg").value
                assert abs(a - b) < 1e-8


def test_contour_agrees_with_cs_tall_torus():
    a = zeta_laplacian(0.4, 0.1 + 2j, "contour").value
    b = zeta_laplacian(0.4, 0.1 + 2j, "chowla_selberg").value
    assert abs(a - b) < 1e-9


def test_contour_domain():
    with pytest.raises(DomainError):
        eisenstein_contour(1.5, 1j)


def test_zeta_laplacian_is_scaled_eisenstein():
    val = zeta_laplacian(2.0, 1j, "direct").value
    assert abs(val - (2 * math.pi) ** -4 * E_STAR_2_I) < 1e-13


def test_zeta_laplacian_at_zero():
    for tau in TAUS:
        assert zeta_laplacian(0.0, tau, "chowla_selberg").value == -1.0


def test_unknown_method_rejected():
    with pytest.raises(DomainError):
        eisenstein(2.0, 1j, "fourier")


@SETTINGS
@given(st.lists(st.sampled_from(["T", "t", "S"]), min_size=1, max_size=4))
def test_eisenstein_modular_invariance(word):
    m = Sl2zMatrix.identity()
    for letter in word:
        step = {
            "T": Sl2zMatrix.shift(1),
            "t": Sl2zMatrix.shift(-1),
            "S": Sl2zMatrix.inversion(),
        }[letter]
        m = step @ m
    tau = 0.3 + 0.9j
    moved = m.apply(tau)
    a = eisenstein_direct(2.0, moved).value
    b = eisenstein_direct(2.0, tau).value
    assert abs(a - b) < 1e-9
    a = eisenstein_cs(0.4, moved).value
    b = eisenstein_cs(0.4, tau).value
    assert abs(a - b) < 1e-9


# ------------------------------------------------- determinant and deriv(0)


def test_deriv0_closed_form_at_i():
    assert abs(zeta_laplacian_deriv0(1j) - DERIV0_I) < 1e-13


def test_deriv0_closed_form_at_2i():
    assert abs(zeta_laplacian_deriv0(2j) - (-math.log(DET_2I))) < 1e-13


def test_deriv0_numeric_matches_closed():
    for tau in (1j, 0.5 + 0.866j, 0.3 + 2j):
        closed = zeta_laplacian_deriv0(tau)
        numeric = zeta_laplacian_deriv0_numeric(tau)
        assert abs(numeric - closed) < 1e-6


def test_determinant_at_i():
    assert abs(determinant_torus(1j) - DET_I) < 1e-14
    assert abs(determinant_torus(1j) - math.exp(-zeta_laplacian_deriv0(1j))) < 1e-15


def test_determinant_numeric_path():
    for tau in (1j, 0.5 + 0.866j, 0.3 + 2j):
        closed = determinant_torus(tau)
        assert abs(determinant_torus_numeric(tau) - closed) / closed < 1e-6


def test_determinant_shift_invariance():
    assert abs(determinant_torus(1.3 + 1.4j) - determinant_torus(0.3 + 1.4j)) < 1e-14


def test_determinant_inversion_covariance():
    # tau2^2 |eta|^4 is not modular invariant: under tau -> -1/tau it scales
    # by 1/|tau|^2 (tau2 |eta|^4 is the invariant combination)
    tau = 0.3 + 1.4j
    lhs = determinant_torus(-1.0 / tau) * abs(tau) ** 2
    assert abs(lhs - determinant_torus(tau)) / determinant_torus(tau) < 1e-13


# -------------------------------------------------------- Kronecker constant


def test_kronecker_closed_form_frozen():
    k = kronecker_constant(1j)
    assert abs(k.closed_form - KRONECKER_I) < 1e-12


def test_kronecker_limit_matches_closed_form():
    for tau in (1j, 0.2 + 1.3j):
        k = kronecker_constant(tau)
        assert k.residual < 1e-7


def test_kronecker_shift_invariance():
    a = kronecker_constant(1.0 + 1j)
    b = kronecker_constant(1j)
    assert abs(a.closed_form - b.closed_form) < 1e-13
    assert abs(a.limit_estimate - b.limit_estimate) < 1e-7


# ----------------------------------------------------- functional equations


def test_functional_equation_grid():
    assert functional_equation_residual(0.3, 1j) < 1e-9
    assert functional_equation_residual(2 + 0.5j, 0.4 + 0.7j) < 1e-9
    assert functional_equation_residual(0.5, 1j) == 0.0


def test_functional_equation_excluded_points():
    with pytest.raises(PoleError):
        functional_equation_residual(0.0, 1j)
    with pytest.raises(PoleError):
        functional_equation_residual(1.0, 1j)


def test_remainder_fe_grid():
    assert remainder_fe_residual(0.3, 1j) < 1e-9
    assert remainder_fe_residual(-0.7, 0.2 + 1.5j) < 1e-9
    assert remainder_fe_residual(0.5, 1j) == 0.0


# ------------------------------------------------------- Bessel-sum constants


def test_nan_yue_williams_at_i():
    pair = nan_yue_williams_sum(1j)
    assert abs(pair.series - 0.000936341) < 5e-9
    closed = -0.5 * math.log(ETA_I) - math.pi / 24.0
    assert abs(pair.closed_form - closed) < 1e-15
    assert pair.residual < 1e-12


def test_nan_yue_williams_generic_tau():
    pair = nan_yue_williams_sum(0.3 + 1.2j)
    assert pair.residual < 1e-10


def test_lambert_q1_at_i():
    pair = lambert_q1(1j)
    assert abs(pair.series - 0.000936341) < 5e-9
    reduction = 0.5 * sum(1.0 / (n * math.expm1(2 * math.pi * n)) for n in range(1, 12))
    assert abs(pair.series - reduction) < 1e-12
    assert pair.residual < 1e-12


def test_lambert_q1_generic_tau():
    assert lambert_q1(0.2 + 0.9j).residual < 1e-10


# ------------------------------------------------------------ Mellin at tau=i


def test_mellin_remainder_self_dual_point():
    got = mellin_remainder_tau_i(0.5)
    assert abs(got - remainder_bessel(0.5, 1j)) < 1e-8


def test_mellin_remainder_reflected_point():
    got = mellin_remainder_tau_i(0.3)
    assert abs(got - remainder_bessel(0.7, 1j)) < 1e-8


def test_mellin_remainder_first_term_dominates():
    def n_term(n: int) -> float:
        def f(u):
            root = np.sqrt(n * n + u)
            return u ** (0.5 - 1.0) * math.pi / (np.expm1(2 * math.pi * root) * root)

        return (
            tanh_sinh(f, 0.0, 1.0, tol=1e-13).value
            + adaptive_gauss(f, 1.0, 60.0, rel_tol=1e-12, abs_tol=1e-18).value
        ).real

    ratio = abs(n_term(2)) / abs(n_term(1))
    assert ratio < math.exp(-2 * math.pi) * 10.0


def test_mellin_remainder_domain():
    with pytest.raises(DomainError):
        mellin_remainder_tau_i(1.2)
    with pytest.raises(DomainError):
        mellin_remainder_tau_i(0.0)


# ----------------------------------------------------------------- heat trace


def test_heat_kernel_inversion():
    for x in (0.5, 2.0, 5.0):
        for tau in (1j, 0.3 + 1.4j):
            assert abs(heat_kernel(x, tau) - heat_kernel(1.0 / x, tau) / x) < 1e-12


def test_heat_kernel_fixed_point_trivial():
    tau = 0.2 + 0.8j
    assert abs(heat_kernel(1.0, tau) - heat_kernel(1.0, tau)) == 0.0


def test_heat_kernel_large_x_limit():
    assert abs(heat_kernel(60.0, 1j) - 1.0) < 1e-15


def test_heat_kernel_domain():
    with pytest.raises(DomainError):
        heat_kernel(0.0, 1j)


def test_theta_mellin_checks():
    assert theta_mellin_check(2.0, 1j) < 1e-8
    assert theta_mellin_check(0.5, 1j) == 0.0
    assert theta_mellin_check(2.5 + 1j, 0.3 + 0.8j) < 1e-9


# ----------------------------------------------------------- weight integral


def test_weight_integral_nine_point_grid():
    for s in (0.6, 0.75, 0.9):
        for x in (0.5, 1.0, 3.0):
            quad, closed = weight_integral_check(s, x)
            assert abs(quad - closed) < 1e-10


def test_weight_integral_domain():
    with pytest.raises(DomainError):
        weight_integral_check(0.3, 1.0)
    with pytest.raises(DomainError):
        weight_integral_check(0.7, -1.0)
