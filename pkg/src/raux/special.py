"""Complex log-gamma, zeta, the functional-equation factor chi and Lambert W_1."""

from __future__ import annotations

import math
import threading
from fractions import Fraction

from .errors import BranchError, ConvergenceError, DomainError, PoleError
from .numerics import PrecisionContext, check_finite

# -- Bernoulli numbers ------------------------------------------------------

_bern_lock = threading.Lock()
_bern_even: tuple = (Fraction(1),)  # B_0, B_2, B_4, ...


def _tangent_numbers(n: int) -> list:
    # Brent-Harvey integer recurrence, T[k] = k-th tangent number
    t = [0] * (n + 1)
    t[1] = 1
    for k in range(2, n + 1):
        t[k] = (k - 1) * t[k - 1]
    for k in range(2, n + 1):
        for j in range(k, n + 1):
            t[j] = (j - k) * t[j - 1] + (j - k + 2) * t[j]
    return t


def bernoulli_even(count: int) -> tuple:
    """Exact ``(B_0, B_2, ..., B_{2*count})`` as Fractions, cached process-wide."""
    global _bern_even
    table = _bern_even
    if len(table) > count:
        return table
    with _bern_lock:
        if len(_bern_even) <= count:
            n = max(count, 2 * len(_bern_even))
            t = _tangent_numbers(n)
            vals = [Fraction(1)]
            for k in range(1, n + 1):
                sign = 1 if k % 2 else -1
                vals.append(Fraction(sign * 2 * k * t[k], 4**k * (4**k - 1)))
            _bern_even = tuple(vals)
        return _bern_even


def _bern_mpf(ctx: PrecisionContext, k: int):
    b = bernoulli_even(k)[k]
    return ctx.mp.mpf(b.numerator) / b.denominator


# -- helpers ----------------------------------------------------------------

def _is_nonpositive_integer(mp, s) -> bool:
    return s.imag == 0 and s.real <= 0 and mp.isint(s.real)


def _stirling(ctx: PrecisionContext, z):
    """Stirling series for log Gamma at a point with large |z| and Re z > 0."""
    mp = ctx.mp
    total = (z - 0.5) * mp.log(z) - z + mp.log(2 * mp.pi) / 2
    cutoff = mp.ldexp(mp.one, -ctx.bits - 4)
    zinv = 1 / z
    zinv2 = zinv * zinv
    power = zinv
    prev = None
    k = 1
    while True:
        term = _bern_mpf(ctx, k) / (2 * k * (2 * k - 1)) * power
        total += term
        size = abs(term)
        if size <= cutoff:
            return total
        if prev is not None and size > prev:
            raise ConvergenceError(f"Stirling series diverged at |z|={mp.nstr(abs(z), 5)}")
        prev = size
        power *= zinv2
        k += 1


def _stirling_radius(bits: int) -> float:
    # smallest term of the series is about exp(-2*pi*|z|)
    return (bits + 16) * math.log(2) / (2 * math.pi) + 4


def log_gamma(s, ctx: PrecisionContext):
    """Principal branch of log Gamma(s), continuous off the cut (-inf, 0].

    Small or left-lying arguments are shifted right by the recurrence
    ``log G(s) = log G(s+m) - sum(log(s+k))`` before the Stirling series is
    applied.  Far in the left half-plane the reflection formula is used and
    the multiple of 2*pi*i is fixed against the leading Stirling term.
    """
    mp = ctx.mp
    s = mp.mpc(s)
    if _is_nonpositive_integer(mp, s):
        raise PoleError(f"Gamma has a pole at {s}")
    X = _stirling_radius(ctx.bits)
    if s.real < -40 - X:
        return _log_gamma_reflected(ctx, s)
    if s.real >= 0 and abs(s) >= X:
        return check_finite(ctx, _stirling(ctx, s), "log_gamma")
    m = max(0, math.ceil(X - float(s.real)))
    shift = mp.zero
    for k in range(m):
        shift += mp.log(s + k)
    return check_finite(ctx, _stirling(ctx, s + m) - shift, "log_gamma")


def _log_gamma_reflected(ctx: PrecisionContext, s):
    mp = ctx.mp
    sp = mp.sinpi(s)
    if sp == 0:
        raise PoleError(f"Gamma has a pole at {s}")
    raw = mp.log(mp.pi) - mp.log(sp) - log_gamma(1 - s, ctx)
    if s.imag == 0:
        # upper-side limit on the cut, matching the shifted recurrence
        guide_s = mp.mpc(s.real, mp.ldexp(mp.one, -ctx.bits))
    else:
        guide_s = s
    guide = (guide_s - 0.5) * mp.log(guide_s) - guide_s + mp.log(2 * mp.pi) / 2
    k = mp.nint((guide.imag - raw.imag) / (2 * mp.pi))
    return check_finite(ctx, raw + 2j * mp.pi * k, "log_gamma")


# -- zeta -------------------------------------------------------------------

def _em_plan(s, tol_log: float):
    """Pick (N, M) so the Euler-Maclaurin remainder is below exp(tol_log)."""
    sigma = float(s.real)
    sc = complex(s)
    log2pi = math.log(2 * math.pi)
    n = 2
    while True:
        logn = math.log(n)
        acc = 0.0  # log |s (s+1) ... (s+2j-2)|
        prev = math.inf
        j = 1
        while True:
            acc += math.log(abs(sc + 2 * j - 2)) if j == 1 else (
                math.log(abs(sc + 2 * j - 3)) + math.log(abs(sc + 2 * j - 2))
            )
            logt = math.log(2) - 2 * j * log2pi + acc - (sigma + 2 * j - 1) * logn
            if logt < tol_log:
                return n, j - 1
            if logt > prev or j > 5000:
                break
            prev = logt
            j += 1
        n *= 2


def zeta(s, ctx: PrecisionContext):
    """Riemann zeta by Euler-Maclaurin summation.

    For Re(s) < 1/2 the functional equation ``zeta(s) = chi(s) zeta(1-s)`` is
    applied first.  Truncation point and number of Bernoulli corrections are
    chosen from a log-magnitude estimate of the remainder.
    """
    mp = ctx.mp
    s = mp.mpc(s)
    if s == 1:
        raise PoleError("zeta has a pole at s=1")
    if s == 0:
        return mp.mpc(-0.5)
    if s.real < 0.5:
        c = chi(s, ctx)
        if c == 0:
            return mp.mpc(0)
        return check_finite(ctx, c * zeta(1 - s, ctx), "zeta")
    tol_log = -(ctx.bits + 8) * math.log(2)
    n, m = _em_plan(s, tol_log)
    total = mp.zero
    for k in range(1, n):
        total += mp.power(k, -s)
    nn = mp.mpf(n)
    npow = mp.power(nn, -s)
    total += npow / 2 + nn * npow / (s - 1)
    if m:
        rising = s  # s (s+1) ... (s+2j-2)
        fact = mp.mpf(2)  # (2j)!
        npow_j = npow / nn  # N^(-s-2j+1)
        inv_n2 = 1 / (nn * nn)
        for j in range(1, m + 1):
            if j > 1:
                rising *= (s + 2 * j - 3) * (s + 2 * j - 2)
                fact *= (2 * j - 1) * (2 * j)
                npow_j *= inv_n2
            total += _bern_mpf(ctx, j) / fact * rising * npow_j
    return check_finite(ctx, total, "zeta")


# -- chi --------------------------------------------------------------------

def chi(s, ctx: PrecisionContext):
    """``chi(s) = 2^s pi^(s-1) sin(pi s/2) Gamma(1-s)``, so zeta(s) = chi(s) zeta(1-s)."""
    mp = ctx.mp
    s = mp.mpc(s)
    if s.imag == 0 and mp.isint(s.real):
        k = int(s.real)
        if k >= 1 and k % 2 == 1:
            raise PoleError(f"chi has a pole at s={k}")
        if k <= 0 and k % 2 == 0:
            return mp.mpc(0)
    if s.real >= 0.5:
        # same function written as (2 pi)^s / (2 cos(pi s/2) Gamma(s))
        val = mp.power(2 * mp.pi, s) / (2 * mp.cospi(s / 2) * mp.exp(log_gamma(s, ctx)))
    else:
        val = (
            mp.power(2, s)
            * mp.power(mp.pi, s - 1)
            * mp.sinpi(s / 2)
            * mp.exp(log_gamma(1 - s, ctx))
        )
    return check_finite(ctx, val, "chi")


# -- Lambert W, branch k = 1 ------------------------------------------------

def lambert_w1_guess(z, ctx: PrecisionContext):
    """Asymptotic initializer ``L1 - L2 + L2/L1`` with ``L1 = log z + 2 pi i``."""
    mp = ctx.mp
    l1 = mp.log(z) + 2j * mp.pi
    l2 = mp.log(l1)
    return l1 - l2 + l2 / l1


def lambert_w1(z, ctx: PrecisionContext):
    """Branch W_1 of the inverse of ``w -> w e^w``, polished by Halley steps."""
    mp = ctx.mp
    z = mp.mpc(z)
    if z == 0:
        raise DomainError("W_1 is singular at 0")
    w0 = lambert_w1_guess(z, ctx)
    w = w0
    tol = 10 * ctx.eps
    for _ in range(ctx.max_iter):
        ew = mp.exp(w)
        f = w * ew - z
        wp1 = w + 1
        dw = f / (ew * wp1 - (w + 2) * f / (2 * wp1))
        w -= dw
        if abs(dw) <= tol * max(mp.one, abs(w)):
            if abs(w - w0) > 1:
                raise BranchError(
                    f"Halley iterate left the W_1 initializer by {mp.nstr(abs(w - w0), 5)}"
                )
            return check_finite(ctx, w, "lambert_w1")
    raise ConvergenceError(f"Halley iteration for W_1({z}) did not converge")
