"""Precision-managed complex arithmetic, line quadrature and a Newton root finder.

Every value lives in an mpmath context owned by a :class:`PrecisionContext`,
so two computations at different precisions never share mutable state.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import mpmath

from .errors import (
    ConvergenceError,
    DomainError,
    InvalidArgument,
    NonFiniteError,
    QuadratureError,
    TruncationError,
)

GUARD_BITS = 16
CONTEXT_HEADROOM_BITS = 64
LOG2_10 = math.log2(10)

Evaluator = Callable[[mpmath.mpc], mpmath.mpc]


def _bits_for_digits(digits: int) -> int:
    raw = math.ceil(digits * LOG2_10) + CONTEXT_HEADROOM_BITS
    return -(-raw // 64) * 64


@dataclass(frozen=True)
class PrecisionContext:
    """Working precision plus the tolerances derived from it.

    ``bits`` is the mantissa precision used for arithmetic, ``digits`` the
    number of decimal digits the caller wants to be correct.  ``mp`` is a
    private mpmath context running at ``bits``.
    """

    bits: int
    digits: int
    max_iter: int = 60
    mp: mpmath.ctx_mp.MPContext = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.digits < 1 or self.bits < 1:
            raise InvalidArgument("bits and digits must be positive")
        if self.bits < math.ceil(self.digits * LOG2_10) + CONTEXT_HEADROOM_BITS:
            raise InvalidArgument(
                f"{self.bits} bits cannot carry {self.digits} digits with headroom"
            )
        ctx = mpmath.MPContext()
        ctx.prec = self.bits
        object.__setattr__(self, "mp", ctx)

    @property
    def eps(self) -> mpmath.mpf:
        return self.mp.ldexp(self.mp.one, -self.bits + GUARD_BITS)

    @property
    def tol(self) -> mpmath.mpf:
        """Relative tolerance that the target digit count asks for."""
        return self.mp.mpf(10) ** (-self.digits)

    def with_bits(self, bits: int) -> "PrecisionContext":
        return PrecisionContext(bits=bits, digits=self.digits, max_iter=self.max_iter)

    def doubled(self) -> "PrecisionContext":
        return self.with_bits(2 * self.bits)

    def c(self, re, im=0) -> mpmath.mpc:
        """Build a ComplexVal at this context's precision."""
        if isinstance(re, str) and im == 0:
            return self.mp.mpc(self.mp.mpmathify(re))
        return self.mp.mpc(re, im)


def ctx_new(digits: int, bits: int | None = None, max_iter: int = 60) -> PrecisionContext:
    """Context targeting ``digits`` correct decimals.

    Without an explicit ``bits`` the precision is ``ceil(digits*log2(10)) + 64``
    rounded up to a multiple of 64.
    """
    if not isinstance(digits, int) or digits < 10:
        raise InvalidArgument(f"digits must be an integer >= 10, got {digits!r}")
    if bits is None:
        bits = _bits_for_digits(digits)
    return PrecisionContext(bits=bits, digits=digits, max_iter=max_iter)


def check_finite(ctx: PrecisionContext, z, what: str = "value"):
    if not ctx.mp.isfinite(z):
        raise NonFiniteError(f"non-finite {what}: {z}")
    return z


def c_log(z, ctx: PrecisionContext) -> mpmath.mpc:
    """Principal logarithm, imaginary part in (-pi, pi]."""
    z = ctx.mp.mpc(z)
    if z == 0:
        raise DomainError("log(0)")
    return check_finite(ctx, ctx.mp.log(z), "log")


def c_pow(z, w, ctx: PrecisionContext) -> mpmath.mpc:
    """``z**w`` through the principal logarithm."""
    z = ctx.mp.mpc(z)
    w = ctx.mp.mpc(w)
    if z == 0:
        if w.real > 0:
            return ctx.mp.mpc(0)
        raise DomainError("0 raised to a power with non-positive real part")
    return check_finite(ctx, ctx.mp.exp(w * ctx.mp.log(z)), "power")


@dataclass(frozen=True)
class RootResult:
    root: mpmath.mpc
    residual: mpmath.mpf
    iterations: int
    converged: bool


def _diff_step(z, ctx: PrecisionContext):
    mp = ctx.mp
    return mp.ldexp(mp.one, -(ctx.bits // 2)) * max(mp.one, abs(z))


def central_derivative(fn: Evaluator, z, ctx: PrecisionContext, fz=None):
    """Central difference with step ``2**(-bits/2) * max(1, |z|)``."""
    h = _diff_step(z, ctx)
    return (fn(z + h) - fn(z - h)) / (2 * h)


def forward_derivative(fn: Evaluator, z, ctx: PrecisionContext, fz=None):
    """One-sided difference with the same step, reusing ``fz = fn(z)`` when given.

    At this step size rounding limits either difference to about
    ``2**(-bits/2)`` relative error, so the one-sided form costs one
    evaluation instead of two for the same accuracy.
    """
    h = _diff_step(z, ctx)
    if fz is None:
        fz = fn(z)
    return (fn(z + h) - fz) / h


def holo_root(
    fn: Evaluator,
    start,
    tol,
    ctx: PrecisionContext,
    residual_tol=None,
) -> RootResult:
    """Newton iteration for a holomorphic ``fn`` with a numerical derivative.

    Stops once ``|dz| <= tol * max(1, |z|)``.  The result is flagged as
    converged only if that happened within ``ctx.max_iter`` steps and
    ``|fn(root)| <= residual_tol`` (``tol`` by default).
    """
    mp = ctx.mp
    tol = mp.mpf(tol)
    if tol <= 0:
        raise InvalidArgument("tol must be positive")
    residual_tol = tol if residual_tol is None else mp.mpf(residual_tol)
    z = mp.mpc(start)
    fz = check_finite(ctx, fn(z), "map value")
    for it in range(1, ctx.max_iter + 1):
        d = forward_derivative(fn, z, ctx, fz)
        if d == 0:
            raise ConvergenceError(f"zero derivative at {z}")
        dz = fz / d
        z = check_finite(ctx, z - dz, "iterate")
        fz = check_finite(ctx, fn(z), "map value")
        if abs(dz) <= tol * max(mp.one, abs(z)):
            res = abs(fz)
            return RootResult(z, res, it, bool(res <= residual_tol))
    return RootResult(z, abs(fz), ctx.max_iter, False)


# -- tanh-sinh quadrature ---------------------------------------------------

def _tanh_sinh_span(bits: int) -> float:
    # beyond this |u| every weight is below 2**-bits of the central one
    return math.asinh((bits * math.log(2) + 40) / math.pi)


def integrate_line(
    integrand: Evaluator,
    center,
    direction,
    half_length,
    ctx: PrecisionContext,
    tail_check: bool = True,
    max_level: int = 12,
    stats: dict | None = None,
    rule: str = "tanh-sinh",
) -> mpmath.mpc:
    """Integrate ``integrand(center + t*direction) * direction`` for ``t`` in [-L, L].

    ``rule="tanh-sinh"`` (default) suits integrands with endpoint behaviour
    of any kind.  ``rule="trapezoid"`` is the uniform rule, which converges
    geometrically for integrands analytic in a strip around the segment that
    have already decayed below ``eps`` at both ends.

    Either rule halves its step until two consecutive levels agree to
    ``ctx.eps`` relative to the L1 norm of the sampled integrand.  With
    ``tail_check`` the integrand must be below ``ctx.eps`` (relative to its
    peak on the nodes) at both endpoints, otherwise
    :class:`TruncationError` is raised.

    If ``stats`` is a dict it receives ``peak`` (max |integrand|), ``l1``,
    ``nodes`` and ``levels``.
    """
    mp = ctx.mp
    center = mp.mpc(center)
    direction = mp.mpc(direction)
    L = mp.mpf(half_length)
    if L <= 0:
        raise InvalidArgument("half_length must be positive")
    eps = ctx.eps
    halfpi = mp.pi / 2

    def f_at(t):
        return check_finite(ctx, integrand(center + t * direction), "integrand")

    peak = mp.zero
    l1 = mp.zero
    nodes = 0

    def add(u):
        # one symmetric pair of nodes (or the centre when u == 0)
        nonlocal peak, l1, nodes
        sh = halfpi * mp.sinh(u)
        ch = halfpi * mp.cosh(u)
        e2 = mp.exp(-2 * sh)
        # tanh(sh) and 1 - tanh(sh) without cancellation
        gap = 2 * e2 / (1 + e2)
        w = L * ch * 4 * e2 / (1 + e2) ** 2
        if u == 0:
            v = f_at(mp.zero)
            nodes += 1
            a = abs(v)
            peak = max(peak, a)
            l1 += w * a
            return w * v
        t = L * (1 - gap)
        v1 = f_at(t)
        v2 = f_at(-t)
        nodes += 2
        a1, a2 = abs(v1), abs(v2)
        peak = max(peak, a1, a2)
        l1 += w * (a1 + a2)
        return w * (v1 + v2)

    if rule == "trapezoid":
        return _trapezoid(f_at, L, direction, ctx, tail_check, max_level, stats)
    if rule != "tanh-sinh":
        raise InvalidArgument(f"unknown quadrature rule {rule!r}")

    umax = _tanh_sinh_span(ctx.bits)
    h = mp.one
    total = add(mp.zero)
    k = 1
    while k * h <= umax:
        total += add(k * h)
        k += 1
    estimate = total * h
    prev = None
    for level in range(1, max_level + 1):
        h /= 2
        k = 1
        while k * h <= umax:
            total += add(k * h)
            k += 2
        prev, estimate = estimate, total * h
        if level >= 2 and abs(estimate - prev) <= eps * l1 * h:
            break
    else:
        raise QuadratureError(
            f"tanh-sinh did not settle after {max_level} levels "
            f"(last change {mp.nstr(abs(estimate - prev), 5)})"
        )

    if tail_check:
        ends = max(abs(f_at(L)), abs(f_at(-L)))
        if ends >= eps * peak:
            raise TruncationError(
                f"integrand at endpoints is {mp.nstr(ends, 5)}, peak {mp.nstr(peak, 5)}"
            )
    if stats is not None:
        stats.update(peak=peak, l1=l1 * h, nodes=nodes, levels=level)
    return check_finite(ctx, estimate * direction, "integral")


def _trapezoid(f_at, L, direction, ctx, tail_check, max_level, stats):
    mp = ctx.mp
    eps = ctx.eps
    peak = mp.zero
    l1 = mp.zero
    nodes = 0

    def add(t):
        nonlocal peak, l1, nodes
        v = f_at(t)
        a = abs(v)
        peak = max(peak, a)
        l1 += a
        nodes += 1
        return v

    # level 0: 16 panels, endpoints at half weight
    panels = 16
    h = 2 * L / panels
    ends = add(L), add(-L)
    total = (ends[0] + ends[1]) / 2
    l1 -= (abs(ends[0]) + abs(ends[1])) / 2
    for i in range(1, panels):
        total += add(-L + i * h)
    estimate = total * h
    for level in range(1, max_level + 1):
        h /= 2
        panels *= 2
        for i in range(1, panels, 2):
            total += add(-L + i * h)
        prev, estimate = estimate, total * h
        if level >= 2 and abs(estimate - prev) <= eps * l1 * h:
            break
    else:
        raise QuadratureError(f"trapezoid rule did not settle after {max_level} levels")
    if tail_check and max(abs(ends[0]), abs(ends[1])) >= eps * peak:
        raise TruncationError(
            f"integrand at endpoints is {mp.nstr(max(abs(ends[0]), abs(ends[1])), 5)}, "
            f"peak {mp.nstr(peak, 5)}"
        )
    if stats is not None:
        stats.update(peak=peak, l1=l1 * h, nodes=nodes, levels=level)
    return check_finite(ctx, estimate * direction, "integral")
