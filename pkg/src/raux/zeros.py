"""Zeros rho_{-n} of R(s) in the fourth quadrant, from the index n.

The pipeline for one index:

1. ``a_n = 1/8 - 2n - i log2 / (2 pi)``
2. ``eta''_n = sqrt(a_n / W_1(a_n / e))``, the root with argument in [-pi/4, 3pi/4)
3. ``eta'_n``: Newton root of ``2 eta^2 log eta - eta^2 + eta = a_n`` near ``eta''_n``
4. Newton on ``R(s) - chi(s) zeta(1-s)`` from ``s = 1 + 2 pi i eta'_n^2``
5. ``rho_{-n} = 1 - conj(s)``
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

from .auxiliary import omega_contains, r_aux_logpolar, u_val, zero_map
from .errors import (
    ConvergenceError,
    DomainError,
    InvalidArgument,
    RauxError,
    SeedMismatch,
    StageError,
)
from .numerics import PrecisionContext, ctx_new, holo_root
from .special import lambert_w1

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class ZeroRecord:
    n: int
    a_n: object
    eta_seed: object
    eta_refined: object
    eta_final: object
    rho: object
    residual: object
    iterations: tuple
    digits: int
    advisories: tuple = field(default=())

    @property
    def beta(self):
        return self.rho.real

    @property
    def gamma(self):
        return self.rho.imag

    @property
    def rho_tilde(self):
        return 1 - self.rho.conjugate()


@dataclass(frozen=True)
class WedgeParams:
    r: object
    theta: object
    epsilon: object
    asserted: bool

    def rho(self, ctx: PrecisionContext):
        mp = ctx.mp
        return 2 * mp.pi * self.r**2 * mp.expj(self.theta)


def _check_index(n, minimum=1):
    if isinstance(n, bool) or not isinstance(n, int) or n < minimum:
        raise InvalidArgument(f"index must be an integer >= {minimum}, got {n!r}")


def upper_sqrt(z2, ctx: PrecisionContext):
    """Square root with argument in [-pi/4, 3pi/4)."""
    mp = ctx.mp
    r = mp.sqrt(mp.mpc(z2))
    if r != 0 and mp.arg(r) < -mp.pi / 4:
        r = -r
    return r


def a_coeff(n: int, ctx: PrecisionContext):
    _check_index(n)
    mp = ctx.mp
    return mp.mpc(mp.mpf(1) / 8 - 2 * n, -mp.log(2) / (2 * mp.pi))


def eta_seed(n: int, ctx: PrecisionContext):
    """``eta''_n`` from the Lambert W_1 solution of the simplified equation."""
    a = a_coeff(n, ctx)
    w = lambert_w1(a / ctx.mp.e, ctx)
    return upper_sqrt(a / w, ctx)


def eta_refine(n: int, seed, ctx: PrecisionContext, return_iterations: bool = False):
    """``eta'_n``: the root of ``u(eta) = -2n`` next to ``seed``."""
    mp = ctx.mp
    a = a_coeff(n, ctx)
    seed = mp.mpc(seed)

    def poly(eta):
        e2 = eta * eta
        return 2 * e2 * mp.log(eta) - e2 + eta - a

    tol = mp.mpf(10) ** (-(ctx.digits + 2))
    res = holo_root(poly, seed, tol, ctx, residual_tol=tol * max(1, abs(a)))
    if not res.converged:
        raise ConvergenceError(f"eta' iteration for n={n} stalled at {res.root}")
    if abs(res.root - seed) >= 1:
        raise SeedMismatch(f"eta' for n={n} moved {mp.nstr(abs(res.root - seed), 5)} from the seed")
    return (res.root, res.iterations) if return_iterations else res.root


def agreeing_digits(x, y, ctx: PrecisionContext, cap: int) -> int:
    """Leading significant digits of ``x`` that ``y`` reproduces to within one unit."""
    mp = ctx.mp
    if x == y:
        return cap
    if x == 0:
        return 0
    lead = int(mp.floor(mp.log10(abs(x))))
    diff = abs(x - y)
    for k in range(cap, 0, -1):
        if diff <= mp.mpf(10) ** (lead - k + 1):
            return k
    return 0


def _stage(name, n, fn, *args, **kw):
    try:
        return fn(*args, **kw)
    except RauxError as exc:
        raise StageError(name, n, exc) from exc


COARSE_DIGITS = 10


def _newton_ramped(n, fn_at, start, ctx: PrecisionContext):
    """Newton on ``fn_at(ctx)`` at 10 digits first, then at full precision."""
    mp = ctx.mp
    iterations = 0
    coarse = ctx_new(COARSE_DIGITS, max_iter=ctx.max_iter)
    if coarse.bits < ctx.bits:  # otherwise the coarse pass saves nothing
        rough = holo_root(fn_at(coarse), start, mp.mpf(10) ** -12, coarse, residual_tol=1e-8)
        iterations += rough.iterations
        if rough.converged:
            start = rough.root
    tol = mp.mpf(10) ** (-(ctx.digits + 10))
    res = holo_root(fn_at(ctx), start, tol, ctx, residual_tol=mp.mpf(10) ** (-ctx.digits))
    if not res.converged:
        raise ConvergenceError(f"Newton stalled at {res.root}, residual {res.residual}")
    return res.root, res.residual, iterations + res.iterations


def _solve(n: int, ctx: PrecisionContext, warm_start=None):
    mp = ctx.mp
    advisories = []
    a = _stage("a_coeff", n, a_coeff, n, ctx)
    seed = _stage("eta_seed", n, eta_seed, n, ctx)
    if not omega_contains(seed, ctx):
        advisories.append("eta_seed outside Omega")
    refined, it_refine = _stage("eta_refine", n, eta_refine, n, seed, ctx, return_iterations=True)
    if not omega_contains(refined, ctx):
        advisories.append("eta_refined outside Omega")
    if warm_start is None:
        start = 1 + 2j * mp.pi * refined * refined
        fn_at = lambda c: (lambda s: zero_map(s, c))  # noqa: E731
        root, residual, it_solve = _stage("solve", n, _newton_ramped, n, fn_at, start, ctx)
    else:
        tol = mp.mpf(10) ** (-(ctx.digits + 10))
        res = _stage(
            "solve", n, holo_root, lambda s: zero_map(s, ctx), mp.mpc(warm_start), tol, ctx,
            residual_tol=mp.mpf(10) ** (-ctx.digits),
        )
        if not res.converged:
            raise StageError("solve", n, ConvergenceError(f"Newton stalled at {res.root}"))
        root, residual, it_solve = res.root, res.residual, res.iterations
    rho = 1 - mp.conj(root)
    if not (rho.real > 0 and rho.imag < 0):
        raise StageError("extract", n, DomainError(f"solution {rho} is not in the fourth quadrant"))
    final = upper_sqrt(1j * mp.conj(rho) / (2 * mp.pi), ctx)
    if not omega_contains(final, ctx):
        advisories.append("eta_final outside Omega")
    for msg in advisories:
        log.info("n=%d: %s", n, msg)
    return ZeroRecord(
        n=n,
        a_n=a,
        eta_seed=seed,
        eta_refined=refined,
        eta_final=final,
        rho=rho,
        residual=residual,
        iterations=(it_refine, it_solve),
        digits=ctx.digits,
        advisories=tuple(advisories),
    )


def zero_solve(n: int, ctx: PrecisionContext, validate: bool = True) -> ZeroRecord:
    """Compute rho_{-n}.

    With ``validate`` the zero is recomputed at twice the working precision
    and ``digits`` is set to the number of leading significant digits of both
    beta and gamma that survive (at most ``ctx.digits``).  Without it,
    ``digits`` is the unverified target ``ctx.digits``.
    """
    _check_index(n)
    rec = _solve(n, ctx)
    if not validate:
        return rec
    hi = _solve(n, ctx.doubled(), warm_start=rec.rho_tilde)
    digits = min(
        agreeing_digits(rec.beta, hi.beta, ctx, ctx.digits),
        agreeing_digits(rec.gamma, hi.gamma, ctx, ctx.digits),
    )
    return ZeroRecord(**{**rec.__dict__, "digits": digits})


def wedge_params(rho, ctx: PrecisionContext) -> WedgeParams:
    """Solve ``rho = 2 pi r^2 exp(i theta)`` for r, theta and the wedge offset epsilon.

    ``asserted`` is False below ``|rho| = 2 pi e^2``, where ``log r <= 1`` and
    epsilon is not expected to lie in (0, 1).
    """
    mp = ctx.mp
    rho = mp.mpc(rho)
    if not (rho.real > 0 and rho.imag < 0):
        raise DomainError(f"{rho} is not in the open fourth quadrant")
    r = mp.sqrt(abs(rho) / (2 * mp.pi))
    theta = mp.arg(rho)
    lr = mp.log(r)
    pi3 = mp.pi**3
    eps = (theta + mp.pi / 2 - mp.pi / (2 * lr) + pi3 / (24 * lr**3)) * 24 * lr**4 / pi3
    return WedgeParams(r=r, theta=theta, epsilon=eps, asserted=bool(abs(rho) > 2 * mp.pi * mp.e**2))


def rho_asymptotic(n: int, ctx: PrecisionContext):
    """Three-term asymptotic expansion of rho_{-n} in powers of 1/log n."""
    _check_index(n, 3)
    mp = ctx.mp
    L = mp.log(n)
    ell = mp.log(L)
    l2 = mp.log(2)
    pi2 = mp.pi**2
    re = 4 * pi2 * n / L**2 * (
        1
        + (2 * ell - 2 * l2 - 1) / L
        + (3 * ell**2 - (5 + 6 * l2) * ell + 3 * l2**2 + 5 * l2 + 1 - pi2) / L**2
    )
    im = -4 * mp.pi * n / L * (
        1
        + (ell - l2) / L
        + (ell**2 - (2 * l2 + 1) * ell + l2**2 + l2 - pi2) / L**2
    )
    return mp.mpc(re, im)


def eta_seed_asymptotic(n: int, ctx: PrecisionContext):
    """Leading terms of ``eta''_n`` for large n."""
    _check_index(n, 3)
    mp = ctx.mp
    L = mp.log(n)
    ell = mp.log(L)
    corr = 1 + ell / (2 * L) - (mp.log(2) - 1 + 1j * mp.pi) / (2 * L)
    return 1j * mp.sqrt(2 * n / L) * corr


# -- argument-principle oracle --------------------------------------------------

class BoundaryZero(RauxError):
    """R vanishes on (or numerically at) the contour; move the rectangle."""


def count_zeros(rect, ctx: PrecisionContext | None = None, step: float = 0.5) -> int:
    """Number of zeros of R inside ``rect = (x0, x1, y0, y1)``.

    Tracks the argument of R around the boundary, bisecting any step across
    which the phase moves by pi/2 or more.  R is evaluated in double
    precision in log-polar form, so its size never overflows.  ``ctx`` only
    sets the threshold below which a boundary value counts as a zero.
    """
    x0, x1, y0, y1 = map(float, rect)
    if not (x0 < x1 and y0 < y1):
        raise InvalidArgument(f"degenerate rectangle {rect}")
    tiny = math.log(10 * float(ctx.eps)) if ctx is not None else math.log(1e-13)
    corners = [complex(x0, y0), complex(x1, y0), complex(x1, y1), complex(x0, y1)]
    total = 0.0
    cache = {}

    def phase(z):
        if z not in cache:
            lg, ph = r_aux_logpolar(z)
            if lg < tiny:
                raise BoundaryZero(f"|R| is negligible at {z} on the boundary")
            cache[z] = ph
        return cache[z]

    def wrap(d):
        return (d + math.pi) % (2 * math.pi) - math.pi

    def walk(a, b, pa, pb, depth):
        d = wrap(pb - pa)
        if abs(d) < math.pi / 2:
            return d
        if depth > 50:
            raise BoundaryZero(f"phase jump near {a} could not be resolved")
        m = (a + b) / 2
        pm = phase(m)
        return walk(a, m, pa, pm, depth + 1) + walk(m, b, pm, pb, depth + 1)

    for i in range(4):
        a, b = corners[i], corners[(i + 1) % 4]
        pieces = max(1, math.ceil(abs(b - a) / step))
        pts = [a + (b - a) * k / pieces for k in range(pieces + 1)]
        for p, q in zip(pts, pts[1:]):
            total += walk(p, q, phase(p), phase(q), 0)
    count = round(total / (2 * math.pi))
    if abs(total / (2 * math.pi) - count) > 1e-6:
        raise ConvergenceError(f"winding {total / (2 * math.pi)} is not an integer")
    return count
