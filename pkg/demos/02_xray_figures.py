# coding: utf-8

# # X-rays
#
# An X-ray draws the curves where a function is real (black) and where it
# is purely imaginary (gray).  Zeros sit where the two families cross.
# Images go to the directory given on the command line (default: the
# current directory).

# %%

import sys
from pathlib import Path

import numpy as np

from raux.xray import IM_CURVE, RE_CURVE, eta_markers, image_write, xray_render

out = Path(sys.argv[1] if len(sys.argv) > 1 else ".")
out.mkdir(parents=True, exist_ok=True)

# %% [markdown]
# z e^z: far to the left the gray and black curves flatten out along the
# lines Im z = k pi / 2.

# %%

img = xray_render("zexpz", (-20, 20, -10, 10), 800, 400)
image_write(img, out / "zexpz.ppm")
print("zexpz: flagged pixels", int(np.count_nonzero(img.mask & (RE_CURVE | IM_CURVE))))

# %% [markdown]
# S(eta) on (0, 5)^2 with the first twenty eta_n on top.  Every red square
# lands on a crossing.

# %%

marks = eta_markers(20)
img = xray_render("S", (0, 5, 0, 5), 800, 800).with_markers(marks)
image_write(img, out / "S_markers.ppm")
image_write(img, out / "S_markers.svg", "svg")
print("all markers on crossings:", all(img.near_curves(e) == (True, True) for e in marks))

# %% [markdown]
# R(s) itself over a window in the fourth quadrant, where its zeros live.
# Each pixel corner costs one double-precision quadrature, so keep this small.

# %%

img = xray_render("R", (0, 60, -60, 0), 200, 200)
image_write(img, out / "R.ppm")
print("wrote", sorted(p.name for p in out.iterdir() if p.suffix in (".ppm", ".svg")))
