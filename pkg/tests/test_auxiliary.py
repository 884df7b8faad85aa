import mpmath
import pytest

from raux.auxiliary import (
    f_val,
    g_val,
    h_val,
    left_eq,
    omega_contains,
    r_aux,
    r_aux_logpolar,
    s_approx,
    siegel_residual,
    u_val,
    v_val,
    zero_map,
)
from raux.errors import DomainError, PoleError
from raux.numerics import ctx_new
from raux.special import chi, zeta
from raux.zeros import eta_refine, eta_seed


def bound(ctx):
    return ctx.mp.mpf(10) ** (-(ctx.digits - 5))


@pytest.mark.parametrize("s", ["2", "0.5+14j", "-5-12j", "6.5+13j", "0.01+0.01j", "-3.7", "4.2"])
def test_siegel_identity_points(ctx25, s):
    z = ctx25.mp.mpmathify(s)
    assert siegel_residual(z, ctx25) < bound(ctx25)


def test_siegel_pole(ctx25):
    with pytest.raises(PoleError):
        siegel_residual(3, ctx25)


def test_siegel_at_other_precisions():
    for digits in (12, 40):
        ctx = ctx_new(digits)
        assert siegel_residual(ctx.c("1.5", "-7.25"), ctx) < bound(ctx)


def test_zero_of_r(ctx25):
    # rho_{-1} to 30 digits from the pipeline: R vanishes there
    rho = ctx25.c("10.648190516854097751940687993", "-0.951042932605261793284278775782")
    assert abs(r_aux(rho, ctx25)) < 1e-20


def test_r_on_real_axis(ctx25):
    # R itself is not real there (Im R(sigma) = -pi/2 at sigma = 2), but the
    # combination in the functional identity is, since it equals zeta(sigma)
    mp = ctx25.mp
    assert abs(r_aux(2, ctx25).imag + mp.pi / 2) < 1e-20
    for s in ("2", "-1.5", "0.5", "5.25"):
        s = ctx25.c(s)
        tot = r_aux(s, ctx25) + chi(s, ctx25) * mp.conj(r_aux(1 - s, ctx25))
        assert abs(tot.imag) <= 10 * ctx25.eps * max(1, abs(tot))


def test_r_precision_doubling(ctx25):
    s = ctx25.c("-4.5", "9.75")
    hi = ctx25.doubled()
    a, b = r_aux(s, ctx25), r_aux(hi.mp.mpc(s), hi)
    assert abs(a - b) <= ctx25.tol * abs(b)


def test_r_large_imaginary_part(ctx25):
    # above the axis R stays moderate
    assert siegel_residual(ctx25.c("0.25", "400"), ctx25) < bound(ctx25)
    # below it |R| ~ e^602 and the identity cancels ~262 digits, so the
    # check needs that much headroom
    lg, _ = r_aux_logpolar(0.25 - 400j)
    assert 600 < lg < 605
    big = ctx_new(25 + 262)
    assert siegel_residual(big.c("0.25", "-400"), big) < bound(ctx25)


def test_logpolar_matches_multiprecision(ctx25):
    mp = ctx25.mp
    for s in (2 + 0j, 0.5 + 14j, -5 - 12j, 202.68 - 259.6j, 1 - 600j, 40 + 3j):
        lg, ph = r_aux_logpolar(s)
        ref = r_aux(mp.mpc(s), ctx25)
        assert abs(lg - float(mp.log(abs(ref)))) < 1e-10
        assert abs(mp.exp(1j * ph) - ref / abs(ref)) < 1e-10


def test_left_eq_near_tabulated_zero(ctx25):
    mp = ctx25.mp
    eta1 = ctx25.c("0.880367", "0.962502")
    assert abs(left_eq(1 + 2j * mp.pi * eta1**2, ctx25)) < 1e-5
    assert abs(left_eq(2, ctx25)) > 0.1


def test_zero_map_is_f_minus_one(ctx25):
    mp = ctx25.mp
    eta = ctx25.c("1.7", "3.1")
    s = 1 + 2j * mp.pi * eta * eta
    assert abs(zero_map(s, ctx25) - (f_val(eta, ctx25) - 1)) < 1e-40


def test_u_v_at_tabulated_points(ctx25):
    assert abs(u_val(ctx25.c("0.875036", "0.967592"), ctx25) + 2) < 1e-5
    assert abs(v_val(ctx25.c("1.022367", "0.644959"), ctx25) + 2) < 1e-5


def test_u_minus_v_is_eta(ctx25):
    for eta in ("0.3+0.2j", "5+9j", "-2+0.5j", "40+1j"):
        z = ctx25.mp.mpmathify(eta)
        assert abs(u_val(z, ctx25) - v_val(z, ctx25) - z) <= 2 * ctx25.eps * abs(z)


def test_g_is_one_at_even_u(ctx25):
    eta = eta_refine(3, eta_seed(3, ctx25), ctx25)  # u(eta) = -6
    assert abs(u_val(eta, ctx25) + 6) < 1e-25
    assert abs(g_val(eta, ctx25) - 1) < 1e-24
    assert abs(h_val(eta, ctx25) - ctx25.mp.exp(ctx25.mp.pi * 1j * (-6 - eta))) < 1e-24


def test_f_at_tabulated_eta100(ctx25):
    # six printed decimals and |df/deta| ~ 60 allow a deviation of about 1e-4
    assert abs(f_val(ctx25.c("2.355977", "6.846003"), ctx25) - 1) < 1e-3


@pytest.mark.parametrize("fn", [u_val, v_val, g_val, h_val, f_val])
def test_lower_half_plane_rejected(ctx25, fn):
    with pytest.raises(DomainError):
        fn(ctx25.c(1, 0), ctx25)
    with pytest.raises(DomainError):
        fn(ctx25.c(1, -2), ctx25)


def test_s_approx_examples(ctx25):
    assert abs(s_approx(ctx25.c("0.880367", "0.962502"), ctx25)) < 0.3
    assert abs(s_approx(ctx25.c("4.587996", "18.422864"), ctx25)) < 0.06
    with pytest.raises(DomainError):
        s_approx(ctx25.mp.mpf(1) / 4, ctx25)


def test_first_approximation_trend(ctx25):
    # R(1 + 2 pi i eta^2) against -chi(s) (S(eta) - 1) along a ray inside Omega
    mp = ctx25.mp
    devs = []
    for r in (6, 12, 24):
        eta = r * mp.expj(mp.pi / 2 - 0.06)
        assert omega_contains(eta, ctx25)
        s = 1 + 2j * mp.pi * eta**2
        rhs = -chi(s, ctx25) * (s_approx(eta, ctx25) - 1)
        devs.append(abs(r_aux(s, ctx25) / rhs - 1))
    assert devs[0] < 1
    assert devs[0] > devs[1] > devs[2]
    assert all(d * r < 1 for d, r in zip(devs, (6, 12, 24)))


def test_omega_examples(ctx25):
    mp = ctx25.mp
    assert omega_contains(5 * mp.expjpi(mp.mpf(1) / 3), ctx25)
    assert not omega_contains(2 * mp.expjpi(mp.mpf(1) / 3), ctx25)
    assert not omega_contains(5 * mp.expj(1.55), ctx25)
    assert not omega_contains(5 * mp.expj(0.7), ctx25)  # below pi/4
    assert omega_contains(mpmath.mpc(3, 4))  # default context


def test_zeta_tail_and_g_trend_small(ctx25):
    mp = ctx25.mp
    from raux.zeros import zero_solve

    rec = zero_solve(10, ctx_new(15), validate=False)
    eta = ctx25.mp.mpc(rec.eta_final)
    assert abs(f_val(eta, ctx25) / g_val(eta, ctx25) - 1) * abs(eta) <= 10
    assert abs(zeta(-2j * mp.pi * eta**2, ctx25) - 1) * abs(eta) <= 10
