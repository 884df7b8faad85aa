import math
import random

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from raux.errors import (
    DomainError,
    InvalidArgument,
    NonFiniteError,
    QuadratureError,
    TruncationError,
)
from raux.numerics import (
    PrecisionContext,
    c_log,
    c_pow,
    central_derivative,
    forward_derivative,
    check_finite,
    ctx_new,
    holo_root,
    integrate_line,
)


def close(a, b, tol):
    return abs(a - b) <= tol * max(1, abs(b))


# -- contexts ------------------------------------------------------------------

@pytest.mark.parametrize("digits, bits", [(25, 192), (10, 128), (50, 256), (16, 128)])
def test_ctx_bits_rule(digits, bits):
    ctx = ctx_new(digits)
    assert ctx.bits == bits
    assert ctx.bits >= math.ceil(digits * math.log2(10)) + 64


def test_ctx_rejects_small_digits():
    with pytest.raises(InvalidArgument):
        ctx_new(5)
    with pytest.raises(InvalidArgument):
        ctx_new(9)


def test_ctx_rejects_thin_bits():
    with pytest.raises(InvalidArgument):
        PrecisionContext(bits=100, digits=25)


def test_eps_below_target(ctx25):
    assert 0 < ctx25.eps < ctx25.tol
    assert ctx25.eps == mpmath.mpf(2) ** (-192 + 16)


def test_contexts_do_not_share_precision():
    a, b = ctx_new(10), ctx_new(40)
    third_a = a.mp.mpf(1) / 3
    third_b = b.mp.mpf(1) / 3
    assert a.mp.prec == 128 and b.mp.prec == 256
    assert third_a != third_b
    assert mpmath.mp.prec == 53  # the global context is untouched


def test_doubled(ctx25):
    d = ctx25.doubled()
    assert d.bits == 2 * ctx25.bits and d.digits == ctx25.digits


# -- elementary functions ------------------------------------------------------------

def test_c_log_examples(ctx25):
    mp = ctx25.mp
    assert c_log(1, ctx25) == 0
    assert close(c_log(1j, ctx25), 1j * mp.pi / 2, ctx25.eps)
    assert close(c_log(-1, ctx25), 1j * mp.pi, ctx25.eps)
    with pytest.raises(DomainError):
        c_log(0, ctx25)


def test_c_pow_examples(ctx25):
    mp = ctx25.mp
    assert close(c_pow(mp.e, 1j * mp.pi, ctx25), -1, 10 * ctx25.eps)
    assert close(c_pow(4, 0.5, ctx25), 2, ctx25.eps)
    assert close(c_pow(1j, 1j, ctx25), mp.exp(-mp.pi / 2), 10 * ctx25.eps)
    assert c_pow(0, 2, ctx25) == 0
    with pytest.raises(DomainError):
        c_pow(0, -1 + 3j, ctx25)
    with pytest.raises(DomainError):
        c_pow(0, 0, ctx25)


def test_non_finite_is_an_error(ctx25):
    with pytest.raises(NonFiniteError):
        check_finite(ctx25, ctx25.mp.mpc(ctx25.mp.inf, 0))
    with pytest.raises(NonFiniteError):
        check_finite(ctx25, ctx25.mp.nan)


def test_exp_log_round_trip(ctx25):
    mp = ctx25.mp
    rng = random.Random(7)
    for _ in range(1000):
        r = math.exp(rng.uniform(math.log(0.1), math.log(10)))
        z = mp.mpc(mp.mpf(r) * mp.expj(rng.uniform(-math.pi, math.pi)))
        # reduce the imaginary part into (-pi, pi]
        zp = mp.mpc(z.real, z.imag - 2 * mp.pi * mp.floor((z.imag + mp.pi) / (2 * mp.pi)))
        if zp.imag == -mp.pi:
            zp += 2j * mp.pi
        assert abs(c_log(mp.exp(z), ctx25) - zp) <= 10 * ctx25.eps * abs(z)


@settings(max_examples=60, deadline=None)
@given(
    st.floats(-3, 3, allow_nan=False),
    st.floats(-3, 3, allow_nan=False),
)
def test_exp_log_property(x, y):
    ctx = ctx_new(20)
    mp = ctx.mp
    z = mp.mpc(x, y)
    if abs(z) < 1e-3:
        return
    assert abs(mp.exp(c_log(z, ctx)) - z) <= 10 * ctx.eps * abs(z)
    # just below the cut, -pi + delta may round to -pi itself
    assert -mp.pi <= c_log(z, ctx).imag <= mp.pi
    if y == 0 and x < 0:
        assert c_log(z, ctx).imag == mp.pi


# -- root finder ------------------------------------------------------------

def test_newton_sqrt2(ctx25):
    mp = ctx25.mp
    res = holo_root(lambda z: z * z - 2, 1.5, mp.mpf(10) ** -30, ctx25)
    assert res.converged
    assert abs(res.root - mp.sqrt(2)) < mp.mpf(10) ** -30
    assert res.iterations <= 12


def test_newton_nearest_roots(ctx25):
    mp = ctx25.mp
    res = holo_root(lambda z: z * z + 1, mp.mpc(0.5, 0.8), mp.mpf(10) ** -30, ctx25)
    assert res.converged and abs(res.root - 1j) < mp.mpf(10) ** -30
    res = holo_root(lambda z: mp.exp(z) - 1, mp.mpc(0.1, 6.2), mp.mpf(10) ** -30, ctx25)
    assert res.converged and abs(res.root - 2j * mp.pi) < mp.mpf(10) ** -29


def test_newton_quadratic_at_192_bits():
    ctx = PrecisionContext(bits=192, digits=25)
    res = holo_root(lambda z: z * z - 2, 1.5, ctx.eps, ctx)
    assert res.converged and res.iterations <= 12


def test_newton_reports_failure(ctx25):
    # no root: converged must stay false
    ctx = PrecisionContext(bits=192, digits=25, max_iter=8)
    res = holo_root(lambda z: z * z + 1, 3.0, ctx.eps, ctx)
    assert not res.converged


def test_converged_implies_residual_bound(ctx25):
    mp = ctx25.mp
    tol = mp.mpf(10) ** -20
    res = holo_root(lambda z: z**3 - z - 1, 1.3, tol, ctx25)
    assert res.converged and res.residual <= tol


def test_central_derivative_exp(ctx25):
    mp = ctx25.mp
    z = mp.mpc(0.3, 0.7)
    d = central_derivative(mp.exp, z, ctx25)
    assert abs(d - mp.exp(z)) < mp.mpf(10) ** -25


def test_forward_derivative_exp(ctx25):
    mp = ctx25.mp
    z = mp.mpc(0.3, 0.7)
    for fz in (None, mp.exp(z)):
        d = forward_derivative(mp.exp, z, ctx25, fz)
        assert abs(d / mp.exp(z) - 1) < mp.mpf(2) ** -(ctx25.bits // 2 - 2)


# -- quadrature -------------------------------------------------------------

def test_gaussian_integral():
    # half-length 6 leaves e^{-36 pi} ~ 1e-49 at the ends: enough for 10 digits only
    ctx = ctx_new(10)
    mp = ctx.mp
    val = integrate_line(lambda x: mp.exp(-mp.pi * x * x), 0, 1, 6, ctx)
    assert abs(val - 1) < 10 * ctx.eps


def test_gaussian_too_short_at_25_digits(ctx25):
    mp = ctx25.mp
    with pytest.raises(TruncationError):
        integrate_line(lambda x: mp.exp(-mp.pi * x * x), 0, 1, 6, ctx25)


def test_constant_along_diagonal(ctx25):
    mp = ctx25.mp
    d = mp.expjpi(mp.mpf(1) / 4)
    val = integrate_line(lambda x: mp.one, 0, d, 1, ctx25, tail_check=False)
    assert abs(val - 2 * d) < 10 * ctx25.eps


@pytest.mark.parametrize("rule", ["tanh-sinh", "trapezoid"])
def test_gaussian_through_half(rule):
    ctx = ctx_new(10)
    mp = ctx.mp
    d = mp.expjpi(-mp.mpf(1) / 4)
    centre = mp.mpf(0.5)

    # integrand in terms of t, recovered from x = 1/2 + t d
    def f(x):
        t = (x - centre) / d
        return mp.exp(-mp.pi * t * t)

    val = integrate_line(f, centre, d, 6, ctx, rule=rule)
    assert abs(val - d) < 10 * ctx.eps


@pytest.mark.parametrize("degree", [0, 1, 5, 9, 15])
def test_polynomial_exactness(ctx25, degree):
    mp = ctx25.mp
    rng = random.Random(degree)
    coeffs = [mp.mpc(rng.uniform(-1, 1), rng.uniform(-1, 1)) for _ in range(degree + 1)]
    a, b = mp.mpc(-0.3, 0.2), mp.mpc(1.1, -0.4)
    centre, half = (a + b) / 2, abs(b - a) / 2
    d = (b - a) / abs(b - a)

    def poly(x):
        return mp.polyval(coeffs[::-1], x)

    def anti(x):
        return sum(c * x ** (k + 1) / (k + 1) for k, c in enumerate(coeffs))

    exact = anti(b) - anti(a)
    val = integrate_line(poly, centre, d, half, ctx25, tail_check=False)
    assert abs(val - exact) <= 10 * ctx25.eps * max(1, abs(exact))


def test_quadrature_deterministic(ctx25):
    mp = ctx25.mp

    def f(x):
        return mp.exp(-x * x) * mp.cos(3 * x)

    a = integrate_line(f, 0.1, 1, 13, ctx25)
    b = integrate_line(f, 0.1, 1, 13, ctx25)
    assert a == b


def test_quadrature_errors(ctx25):
    mp = ctx25.mp
    with pytest.raises(InvalidArgument):
        integrate_line(lambda x: mp.one, 0, 1, 0, ctx25)
    with pytest.raises(InvalidArgument):
        integrate_line(lambda x: mp.one, 0, 1, 1, ctx25, rule="simpson")
    # an oscillation far beyond what the levels can resolve
    with pytest.raises(QuadratureError):
        integrate_line(lambda x: mp.cos(1e6 * x), 0, 1, 1, ctx25, tail_check=False, max_level=3,
                       rule="trapezoid")


def test_stats_reported(ctx25):
    mp = ctx25.mp
    stats = {}
    integrate_line(lambda x: mp.exp(-x * x), 0, 1, 12, ctx25, stats=stats)
    assert set(stats) >= {"peak", "l1", "nodes", "levels"}
    assert abs(stats["peak"] - 1) < 1e-20
