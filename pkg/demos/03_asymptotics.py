# coding: utf-8

# # How the zeros spread out
#
# For large n the zeros follow rho_{-n} ~ 4 pi^2 n / log^2 n - 4 pi i n / log n,
# with corrections in powers of 1/log n.  The expansion converges slowly,
# so the relative error shrinks only like (log log n / log n)^3.

# %%

from raux import count_zeros, ctx_new, rho_asymptotic, wedge_params, zero_solve

ctx = ctx_new(15)
mp = ctx.mp

# %%

for n in (10**2, 10**3, 10**4, 10**5):
    rho = zero_solve(n, ctx, validate=False).rho
    approx = rho_asymptotic(n, ctx)
    print(f"n={n:>6}  rho={mp.nstr(rho, 12):>34}  rel. error {mp.nstr(abs(approx / rho - 1), 3)}")

# %% [markdown]
# The zeros also hug the curve theta = -pi/2 + pi/(2 log r) in polar form
# rho = 2 pi r^2 e^(i theta); epsilon measures the offset and stays in (0, 1).

# %%

for n in (10, 20, 40):
    w = wedge_params(zero_solve(n, ctx, validate=False).rho, ctx)
    print(f"n={n}  r={mp.nstr(w.r, 8)}  epsilon={mp.nstr(w.epsilon, 6)}")

# %% [markdown]
# A count by the argument principle, independent of the solver, confirms
# that no zero was skipped in a box.

# %%

box = (0, 80, -80, 0)
solved = 0
n = 1
while True:
    rho = zero_solve(n, ctx, validate=False).rho
    if rho.imag < box[2]:
        break
    solved += rho.real < box[1]
    n += 1
print("argument principle:", count_zeros(box), " solver:", solved)
