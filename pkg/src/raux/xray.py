"""X-rays: the curves where a function is real or purely imaginary.

A zero of f sits where a curve Im f = 0 crosses a curve Re f = 0, so the
picture shows zeros at a glance.  Rendering runs in double precision on a
(width+1) x (height+1) grid of pixel corners.  Evaluators work with
log f, so sizes far outside the double range still give the right signs.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import loggamma

from .auxiliary import _log_two_i_sin, r_aux_logpolar
from .errors import ConvergenceError, InvalidArgument, RauxError
from .numerics import PrecisionContext, ctx_new
from .zeros import eta_refine, eta_seed

FUNCS = ("R", "S", "zeta", "chi", "zexpz")
MIN_PIXELS = 16

RE_CURVE = 1  # Im f changes sign: f is real somewhere in the pixel
IM_CURVE = 2  # Re f changes sign: f is purely imaginary somewhere in the pixel
UNDEFINED = 4

_LOG_2I = cmath.log(2j)
_LOG_I = cmath.log(1j)


@dataclass(frozen=True, eq=False)
class XRayImage:
    window: tuple
    width: int
    height: int
    mask: np.ndarray  # (height, width) uint8 of RE_CURVE | IM_CURVE | UNDEFINED
    markers: tuple = ()
    values: np.ndarray | None = field(default=None, repr=False)  # f/|f| at the corners
    func: str = ""

    def __post_init__(self):
        _check_frame(self.window, self.width, self.height)
        if self.mask.shape != (self.height, self.width):
            raise InvalidArgument(f"mask shape {self.mask.shape} does not match the image")

    def with_markers(self, points) -> "XRayImage":
        return XRayImage(
            self.window, self.width, self.height, self.mask,
            tuple(complex(p) for p in points), self.values, self.func,
        )

    def pixel_of(self, z) -> tuple[int, int]:
        """(row, column) of the pixel holding ``z``; may fall outside the image."""
        x0, x1, y0, y1 = self.window
        col = math.floor((z.real - x0) / (x1 - x0) * self.width)
        row = math.floor((y1 - z.imag) / (y1 - y0) * self.height)
        return row, col

    def near_curves(self, z, radius: int = 2) -> tuple[bool, bool]:
        """Is a Re-curve (first) or an Im-curve (second) within ``radius`` pixels of z."""
        row, col = self.pixel_of(complex(z))
        r0, r1 = max(0, row - radius), min(self.height, row + radius + 1)
        c0, c1 = max(0, col - radius), min(self.width, col + radius + 1)
        block = self.mask[r0:r1, c0:c1]
        return bool((block & RE_CURVE).any()), bool((block & IM_CURVE).any())


def _check_frame(window, width, height):
    x0, x1, y0, y1 = window
    if not (x0 < x1 and y0 < y1):
        raise InvalidArgument(f"degenerate window {window}")
    for v in (x0, x1, y0, y1):
        if not math.isfinite(v):
            raise InvalidArgument(f"non-finite window {window}")
    if width < MIN_PIXELS or height < MIN_PIXELS:
        raise InvalidArgument(f"image must be at least {MIN_PIXELS}x{MIN_PIXELS} pixels")


# -- double-precision log evaluators ----------------------------------------

def _log_sin_pi(x):
    return _log_two_i_sin(x) - _LOG_2I


def _log_chi_left(s):
    # log chi(s) from 2^s pi^(s-1) sin(pi s/2) Gamma(1-s); accurate for Re s <= 1/2
    return s * math.log(2) + (s - 1) * math.log(math.pi) + _log_sin_pi(s / 2) + loggamma(1 - s)


def log_chi(s):
    """log chi(s) on a complex array (up to multiples of 2 pi i)."""
    s = np.asarray(s, dtype=complex)
    out = np.empty_like(s)
    left = s.real <= 0.5
    out[left] = _log_chi_left(s[left])
    out[~left] = -_log_chi_left(1 - s[~left])
    return out


def _em_zeta(s, terms: int, corrections: int = 12):
    """Euler-Maclaurin zeta for Re s >= 1/2 with a fixed truncation point."""
    n = float(terms)
    total = np.zeros_like(s)
    for k in range(1, terms):
        total += np.exp(-s * math.log(k))
    npow = np.exp(-s * math.log(n))
    with np.errstate(divide="ignore", invalid="ignore"):
        total += npow / 2 + n * npow / (s - 1)
    rising = s.copy()
    fact = 2.0
    npow_j = npow / n
    # B_2, B_4, ..., B_24
    bern = [1 / 6, -1 / 30, 1 / 42, -1 / 30, 5 / 66, -691 / 2730, 7 / 6, -3617 / 510,
            43867 / 798, -174611 / 330, 854513 / 138, -236364091 / 2730]
    for j in range(1, corrections + 1):
        if j > 1:
            rising = rising * (s + 2 * j - 3) * (s + 2 * j - 2)
            fact *= (2 * j - 1) * (2 * j)
            npow_j = npow_j / (n * n)
        total += bern[j - 1] / fact * rising * npow_j
    return total


def log_zeta(s):
    """log zeta(s) on a complex array; the functional equation covers Re s < 1/2."""
    s = np.asarray(s, dtype=complex)
    right = np.where(s.real >= 0.5, s, 1 - s)
    terms = max(16, math.ceil(float(np.abs(right).max(initial=0.0)) / 2) + 16)
    with np.errstate(divide="ignore", invalid="ignore"):
        lz = np.log(_em_zeta(right, terms))
        return np.where(s.real >= 0.5, lz, log_chi(s) + lz)


def log_s(eta):
    """log(S(eta) - 1) where S is the closed-form approximation of f."""
    eta = np.asarray(eta, dtype=complex)
    e2 = eta * eta
    return (
        2j * math.pi * e2 * np.log(eta)
        - 1j * math.pi * e2
        + 0.5 * math.log(2)
        + 0.375j * math.pi
        + _log_sin_pi(eta)
        - (_log_two_i_sin(2 * eta + 0.5) - _LOG_I)
    )


def _direction(logf):
    """f/|f| from log f: 0 where f vanishes, NaN where f is undefined."""
    with np.errstate(invalid="ignore", over="ignore"):
        out = np.exp(1j * logf.imag)
    out[np.isneginf(logf.real)] = 0
    out[~np.isfinite(logf.real) & ~np.isneginf(logf.real)] = np.nan
    out[np.isnan(logf.imag) & ~np.isneginf(logf.real)] = np.nan
    return out


def _one_plus_exp(logt):
    """Direction of 1 + e^logt without forming e^logt when it is huge."""
    with np.errstate(over="ignore", invalid="ignore"):
        big = logt.real > 40
        small = np.where(big, 0, logt)
        val = 1 + np.exp(small)
        out = val / np.abs(val)
    out = np.where(big, np.exp(1j * logt.imag), out)
    out[np.isnan(logt.real) | np.isposinf(logt.real)] = np.nan
    return out


def _eval_r(z):
    out = np.empty(z.shape, dtype=complex)
    flat, res = z.ravel(), out.reshape(-1)
    for i, s in enumerate(flat):
        try:
            lg, ph = r_aux_logpolar(complex(s))
            res[i] = 0 if lg == -math.inf else cmath.exp(1j * ph)
        except (RauxError, ValueError, OverflowError, ZeroDivisionError):
            res[i] = np.nan
    return out


def _evaluate(func: str, z):
    with np.errstate(all="ignore"):
        if func == "zexpz":
            return _direction(np.log(z) + z)
        if func == "S":
            return _one_plus_exp(log_s(z))
        if func == "zeta":
            return _direction(log_zeta(z))
        if func == "chi":
            return _direction(log_chi(z))
        if func == "R":
            return _eval_r(z)
    raise InvalidArgument(f"unknown function {func!r}; expected one of {FUNCS}")


def _poles(func: str, window):
    x0, x1, y0, y1 = window
    if func == "zeta":
        cands = [1.0]
    elif func == "chi":
        cands = [float(k) for k in range(1, math.floor(x1) + 1, 2)]
    elif func == "S":
        # cos(2 pi eta) = 0
        cands = [0.25 + 0.5 * k for k in range(math.floor(2 * x0 - 0.5), math.ceil(2 * x1))]
    else:
        return []
    return [complex(c) for c in cands if x0 <= c <= x1 and y0 <= 0 <= y1]


def corner_grid(window, width, height):
    """Complex pixel-corner coordinates, row 0 at the top edge ``y1``."""
    x0, x1, y0, y1 = window
    xs = np.linspace(x0, x1, width + 1)
    ys = np.linspace(y1, y0, height + 1)
    return xs[None, :] + 1j * ys[:, None]


def _sign_change(a):
    # True where the four corners of a pixel do not all share the sign of a
    pos = a > 0
    corners = pos[:-1, :-1], pos[:-1, 1:], pos[1:, :-1], pos[1:, 1:]
    anyp = corners[0] | corners[1] | corners[2] | corners[3]
    allp = corners[0] & corners[1] & corners[2] & corners[3]
    return anyp & ~allp


def _span(frac: float, size: int) -> list:
    # pixel indices whose closed interval contains the fractional coordinate
    k = math.floor(frac)
    idx = [k - 1, k] if frac == k else [k]
    return [i for i in idx if 0 <= i < size]


def _pixels_touching(img: XRayImage, p: complex) -> list:
    x0, x1, y0, y1 = img.window
    cols = _span((p.real - x0) / (x1 - x0) * img.width, img.width)
    rows = _span((y1 - p.imag) / (y1 - y0) * img.height, img.height)
    return [(r, c) for r in rows for c in cols]


def xray_render(
    func: str, window, width: int, height: int, ctx: PrecisionContext | None = None
) -> XRayImage:
    """Flag the pixels crossed by Re f = 0 and Im f = 0 curves.

    A pixel gets ``RE_CURVE`` when Im f changes sign between its corners and
    ``IM_CURVE`` when Re f does.  Pixels touching a corner where f could not
    be evaluated, or containing a known pole, are marked ``UNDEFINED`` and
    carry no curve flags.  ``ctx`` is accepted for interface symmetry; the
    rendering itself is double precision.
    """
    if func not in FUNCS:
        raise InvalidArgument(f"unknown function {func!r}; expected one of {FUNCS}")
    window = tuple(float(v) for v in window)
    _check_frame(window, width, height)
    z = corner_grid(window, width, height)
    vals = _evaluate(func, z)
    bad = ~np.isfinite(vals)
    re_flag = _sign_change(np.where(bad, 0, vals.imag))
    im_flag = _sign_change(np.where(bad, 0, vals.real))
    undefined = bad[:-1, :-1] | bad[:-1, 1:] | bad[1:, :-1] | bad[1:, 1:]
    mask = (re_flag * RE_CURVE | im_flag * IM_CURVE).astype(np.uint8)
    img = XRayImage(window, width, height, mask, (), vals, func)
    for p in _poles(func, window):
        for r, c in _pixels_touching(img, p):
            undefined[r, c] = True
    mask[undefined] = UNDEFINED
    return img


# -- markers ----------------------------------------------------------------

def _log_f(eta: complex) -> complex:
    """log f(eta) = log chi(w) + log R(1 - w) - log zeta(w), w = -2 pi i eta^2."""
    w = -2j * math.pi * eta * eta
    lg, ph = r_aux_logpolar(1 - w)
    arr = np.array([w])
    return complex(log_chi(arr)[0] + (lg + 1j * ph) - log_zeta(arr)[0])


def eta_marker(n: int, ctx: PrecisionContext | None = None, tol: float = 1e-11) -> complex:
    """eta_n in double precision, for plotting.

    Newton on f(eta) - 1 from the refined seed; good to about 1e-10, which
    is far below a pixel at any sensible resolution.
    """
    ctx = ctx or ctx_new(10)
    eta = complex(eta_refine(n, eta_seed(n, ctx), ctx))

    def g(e):
        return cmath.exp(_log_f(e)) - 1

    ge = g(eta)
    for _ in range(ctx.max_iter):
        h = 1e-6 * max(1.0, abs(eta))
        d = (g(eta + h) - g(eta - h)) / (2 * h)
        step = ge / d
        eta -= step
        ge = g(eta)
        if abs(step) <= tol * max(1.0, abs(eta)):
            return eta
    raise ConvergenceError(f"double-precision eta_{n} did not settle")


def eta_markers(count: int, ctx: PrecisionContext | None = None) -> list:
    ctx = ctx or ctx_new(10)
    return [eta_marker(n, ctx) for n in range(1, count + 1)]


# -- output -----------------------------------------------------------------

_BLACK = (0, 0, 0)
_GRAY = (128, 128, 128)
_RED = (255, 0, 0)


def _raster(img: XRayImage) -> np.ndarray:
    rgb = np.full((img.height, img.width, 3), 255, dtype=np.uint8)
    rgb[(img.mask & IM_CURVE) > 0] = _GRAY
    rgb[(img.mask & RE_CURVE) > 0] = _BLACK
    for p in img.markers:
        row, col = img.pixel_of(p)
        r0, r1 = max(0, row - 1), min(img.height, row + 2)
        c0, c1 = max(0, col - 1), min(img.width, col + 2)
        if r0 < r1 and c0 < c1:
            rgb[r0:r1, c0:c1] = _RED
    return rgb


def _svg(img: XRayImage) -> str:
    from skimage.measure import find_contours

    w, h = img.width, img.height
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w}" height="{h}" '
        f'viewBox="0 0 {w} {h}">',
        f'<polygon points="0,0 {w},0 {w},{h} 0,{h}" fill="#ffffff"/>',
    ]
    if img.values is not None:
        finite = np.isfinite(img.values)
        # Im-curves first so Re-curves are drawn on top, as in the raster
        for part, colour in ((img.values.real, "#808080"), (img.values.imag, "#000000")):
            field_ = np.where(finite, part, 0.0)
            for path in find_contours(field_, 0.0, mask=finite):
                pts = " ".join(f"{c:.3f},{r:.3f}" for r, c in path)
                out.append(
                    f'<polyline points="{pts}" fill="none" stroke="{colour}" stroke-width="1"/>'
                )
    for p in img.markers:
        row, col = img.pixel_of(p)
        out.append(f'<rect x="{col - 1}" y="{row - 1}" width="3" height="3" fill="#ff0000"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def image_write(img: XRayImage, path, fmt: str = "portable-pixmap") -> None:
    """Write ``img`` as binary P6 (``portable-pixmap``) or SVG 1.1 (``svg``)."""
    if fmt in ("portable-pixmap", "ppm", "p6"):
        data = f"P6\n{img.width} {img.height}\n255\n".encode("ascii") + _raster(img).tobytes()
    elif fmt == "svg":
        data = _svg(img).encode("utf-8")
    else:
        raise InvalidArgument(f"unknown image format {fmt!r}")
    # OSError (carrying the path) propagates to the caller
    with open(path, "wb") as fh:
        fh.write(data)
