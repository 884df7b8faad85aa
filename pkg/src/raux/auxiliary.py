"""Riemann's auxiliary function R(s) and the functions built on it.

R(s) is the line integral

    R(s) = int_{0 \\ 1} x^(-s) e^(pi i x^2) / (e^(pi i x) - e^(-pi i x)) dx

over a line of slope 1 crossing (0, 1), run from upper right to lower left.
Sliding the line to cross the real axis at N + 1/2 picks up the residues
at x = 1..N, each equal to k^(-s), so

    R(s) = sum_{k<=N} k^(-s) + int_{N \\ N+1} (...) dx.

N is chosen so that the line passes next to the saddle point of the
integrand; there the integrand is a narrow Gaussian bump and the integral
carries no cancellation even when |R(s)| is astronomically large.
"""

from __future__ import annotations

import cmath
import math
from collections import OrderedDict
from functools import lru_cache

import numpy as np

from .errors import DomainError, PrecisionExhausted
from .numerics import (
    PrecisionContext,
    c_log,
    c_pow,
    check_finite,
    ctx_new,
    integrate_line,
)
from .special import chi, zeta

R_GUARD_BITS = 32
MAX_R_BITS = 1 << 15

_SLOPE = cmath.exp(0.25j * math.pi)


# per contour plan: node -> (log x, e^(pi i x^2) / (2 i sin(pi x))), which do
# not depend on s; Newton steps and difference quotients reuse the same plan
_NODE_CACHE: OrderedDict = OrderedDict()
_NODE_PLANS = 6


def _node_table(key) -> dict:
    table = _NODE_CACHE.get(key)
    if table is None:
        table = _NODE_CACHE[key] = {}
        while len(_NODE_CACHE) > _NODE_PLANS:
            _NODE_CACHE.popitem(last=False)
    else:
        _NODE_CACHE.move_to_end(key)
    return table


@lru_cache(maxsize=64)
def _work_ctx(bits: int, digits: int, max_iter: int) -> PrecisionContext:
    return PrecisionContext(bits=bits, digits=digits, max_iter=max_iter)


def _log_abs_integrand(s: complex, x):
    """log |x^-s e^(pi i x^2) / (2 i sin(pi x))| in double precision (array-valued)."""
    x = np.asarray(x, dtype=complex)
    val = -(s * np.log(x)).real - np.pi * (x * x).imag
    pb = np.pi * np.abs(x.imag)
    with np.errstate(over="ignore"):
        sh = np.sinh(np.minimum(pb, 20.0))
        small = np.log(2) + 0.5 * np.log(np.sin(np.pi * x.real) ** 2 + sh**2)
    return val - np.where(pb > 20, pb, small)


def _contour_plan(s: complex, bits: int):
    """Return (N, centre offset t0, half length T, log peak) for the shifted line."""
    x0 = cmath.sqrt(s / (2j * math.pi))
    c = x0.real - x0.imag
    if c < 0:
        x0, c = -x0, -c
    n = max(0, int(round(c - 0.5)))
    cross = n + 0.5
    tau = ((x0 - cross) * _SLOPE.conjugate()).real

    def prof(t):
        return _log_abs_integrand(s, cross + np.asarray(t) * _SLOPE)

    grid = tau + 0.025 * np.arange(-600, 601)
    vals = prof(grid)
    i = int(np.argmax(vals))
    best_t, best = float(grid[i]), float(vals[i])
    drop = (bits + 24) * math.log(2)
    # distance, on each side of the peak, at which the integrand has fallen by 2**-(bits+24)
    offsets = 1.0 + 0.25 * np.arange(0, 400)
    half = 1.0
    for side in (1, -1):
        # first offset beyond which every sample stays below the threshold
        above = np.nonzero(prof(best_t + side * offsets) > best - drop)[0]
        k = 0 if above.size == 0 else above[-1] + 1
        if k >= offsets.size:
            raise PrecisionExhausted("integrand does not decay along the shifted line")
        half = max(half, float(offsets[k]))
    # snap the centre to a 1/16 grid so nearby s share nodes (see _node_table)
    snapped = round(best_t * 16) / 16
    return n, snapped, half + 0.0625, best


def r_aux(s, ctx: PrecisionContext, stats: dict | None = None):
    """Riemann's auxiliary function R(s) at the context precision.

    The working precision is raised above ``ctx.bits`` by whatever the
    integrand or the residue sum lose to cancellation, so the result is
    accurate relative to |R(s)|.  Below ``2**-ctx.bits`` times the size of
    the terms (next to a zero of R) the accuracy is absolute instead.  If
    the needed precision exceeds ``MAX_R_BITS`` a :class:`PrecisionExhausted`
    error is raised.
    """
    s = ctx.mp.mpc(check_finite(ctx, ctx.mp.mpc(s), "argument"))
    sc = complex(s)
    extra = 0
    for _ in range(3):
        bits = ctx.bits + extra + R_GUARD_BITS
        if bits > MAX_R_BITS:
            raise PrecisionExhausted(
                f"R({ctx.mp.nstr(s, 8)}) needs {bits} bits, more than {MAX_R_BITS}"
            )
        n, t0, half, _ = _contour_plan(sc, bits)
        wctx = _work_ctx(bits, ctx.digits, ctx.max_iter)
        mp = wctx.mp
        sw = mp.mpc(s)
        d = mp.expjpi(mp.mpf(1) / 4)
        centre = (n + mp.mpf(0.5)) + t0 * d
        two_i = mp.mpc(0, 2)
        pi_i = mp.mpc(0, mp.pi)
        neg_s = -sw
        nodes = _node_table((bits, n, t0, half))

        def integrand(x):
            key = x._mpc_
            hit = nodes.get(key)
            if hit is None:
                hit = nodes[key] = (mp.log(x), mp.exp(pi_i * x * x) / (two_i * mp.sinpi(x)))
            return mp.exp(neg_s * hit[0]) * hit[1]

        st = {}
        integral = integrate_line(integrand, centre, d, half, wctx, stats=st, rule="trapezoid")
        head = mp.zero
        head_max = mp.zero
        for k in range(1, n + 1):
            term = mp.power(k, -sw)
            head += term
            head_max = max(head_max, abs(term))
        value = head - integral
        scale = max(st["l1"], head_max)
        mag = abs(value)
        # bits cancelled away, counted only down to the context's resolution
        loss = ctx.bits if mag == 0 else int(mp.ceil(mp.log(scale / mag, 2)))
        loss = min(max(loss, 0), ctx.bits)
        if stats is not None:
            stats.update(n=n, half_length=half, bits=bits, loss=loss, nodes=st["nodes"])
        if loss <= extra + R_GUARD_BITS - 8:
            return check_finite(ctx, ctx.mp.mpc(value), "R")
        extra = loss
    raise PrecisionExhausted(f"R({ctx.mp.nstr(s, 8)}) lost {loss} bits at {bits} bits")


def _log_two_i_sin(x):
    """Elementwise log(2 i sin(pi x)) for complex arrays, free of overflow."""
    up = x.imag >= 0
    out = np.empty_like(x)
    xu = x[up]
    out[up] = 1j * np.pi - 1j * np.pi * xu + np.log1p(-np.exp(2j * np.pi * xu))
    xd = x[~up]
    out[~up] = 1j * np.pi * xd + np.log1p(-np.exp(-2j * np.pi * xd))
    return out


def r_aux_logpolar(s: complex, step: float = 0.04) -> tuple[float, float]:
    """R(s) in double precision as ``(log|R(s)|, arg R(s))``.

    Same shifted contour as :func:`r_aux`, integrated by the trapezoid rule
    at a fixed step with every term scaled by the largest one, so the result
    is usable however large or small |R(s)| is.  Good to roughly 1e-12
    relative for moderate |s|.
    """
    s = complex(s)
    n, t0, half, _ = _contour_plan(s, 53)
    t = t0 + np.arange(-half, half + step / 2, step)
    x = (n + 0.5) + t * _SLOPE
    expo = -s * np.log(x) + 1j * np.pi * x * x - _log_two_i_sin(x)
    top = expo.real.max()
    integral = np.exp(expo - top).sum() * step * _SLOPE
    if n:
        head = -s * np.log(np.arange(1, n + 1, dtype=float))
        scale = max(top, head.real.max())
        total = np.exp(head - scale).sum() - integral * math.exp(top - scale)
    else:
        scale = top
        total = -integral
    if total == 0:
        return -math.inf, 0.0
    return scale + math.log(abs(total)), cmath.phase(total)


def siegel_residual(s, ctx: PrecisionContext):
    """|zeta(s) - R(s) - chi(s) conj(R(1 - conj s))| / max(1, |zeta(s)|)."""
    mp = ctx.mp
    s = mp.mpc(s)
    z = zeta(s, ctx)
    c = chi(s, ctx)
    lhs = r_aux(s, ctx) + c * mp.conj(r_aux(1 - mp.conj(s), ctx))
    return abs(z - lhs) / max(mp.one, abs(z))


def left_eq(s, ctx: PrecisionContext):
    """``R(s) - chi(s) zeta(1-s)``; vanishes exactly at reflections of zeros of R."""
    s = ctx.mp.mpc(s)
    return r_aux(s, ctx) - chi(s, ctx) * zeta(1 - s, ctx)


def zero_map(s, ctx: PrecisionContext):
    """``left_eq`` rescaled by chi(1-s)/zeta(1-s): equals f(eta) - 1 at s = 1 + 2 pi i eta^2.

    Has the same zeros as :func:`left_eq` off the zeros of zeta(1-s), but is
    of order one near them, which makes residuals comparable across n.
    """
    s = ctx.mp.mpc(s)
    w = 1 - s
    return chi(w, ctx) * r_aux(s, ctx) / zeta(w, ctx) - 1


# -- functions of eta ---------------------------------------------------------

def _need_upper(eta, ctx):
    eta = ctx.mp.mpc(eta)
    if eta.imag <= 0:
        raise DomainError(f"Im(eta) must be positive, got {eta}")
    return eta


def _log2_over_2pi(ctx):
    return ctx.mp.log(2) / (2 * ctx.mp.pi)


def u_val(eta, ctx: PrecisionContext):
    eta = _need_upper(eta, ctx)
    mp = ctx.mp
    e2 = eta * eta
    return 2 * e2 * c_log(eta, ctx) - e2 + eta + 1j * _log2_over_2pi(ctx) - mp.mpf(1) / 8


def v_val(eta, ctx: PrecisionContext):
    eta = _need_upper(eta, ctx)
    return u_val(eta, ctx) - eta


def g_val(eta, ctx: PrecisionContext):
    return ctx.mp.exp(ctx.mp.pi * 1j * u_val(eta, ctx))


def h_val(eta, ctx: PrecisionContext):
    return ctx.mp.exp(ctx.mp.pi * 1j * v_val(eta, ctx))


def f_val(eta, ctx: PrecisionContext):
    """``chi(-2 pi i eta^2) R(1 + 2 pi i eta^2) / zeta(-2 pi i eta^2)``."""
    eta = _need_upper(eta, ctx)
    mp = ctx.mp
    w = -2j * mp.pi * eta * eta
    z = zeta(w, ctx)
    if z == 0:
        raise DomainError(f"zeta vanishes at {w}")
    return chi(w, ctx) * r_aux(1 - w, ctx) / z


def s_approx(eta, ctx: PrecisionContext):
    """Closed-form stand-in S(eta) whose zeros sit next to the zeros of f - 1."""
    mp = ctx.mp
    eta = mp.mpc(eta)
    den = 2 * mp.cospi(2 * eta)
    if den == 0:
        raise DomainError(f"cos(2 pi eta) vanishes at eta={eta}")
    e2 = eta * eta
    power = c_pow(eta, 2j * mp.pi * e2, ctx)
    factor = mp.sqrt(2) * mp.expjpi(mp.mpf(3) / 8) * mp.sinpi(eta) / den
    return 1 + power * mp.expjpi(-e2) * factor


def omega_contains(eta, ctx: PrecisionContext | None = None) -> bool:
    """Membership in {r e^(i phi): r > e, pi/4 < phi < pi/2 - log(r)/r^2}."""
    ctx = ctx or ctx_new(15)
    mp = ctx.mp
    eta = mp.mpc(eta)
    r = abs(eta)
    if r <= mp.e:
        return False
    phi = mp.arg(eta)
    return bool(mp.pi / 4 < phi < mp.pi / 2 - mp.log(r) / (r * r))
