# coding: utf-8

# # Zeros of R(s) in the fourth quadrant
#
# Each zero rho_{-n} is found in three moves: a closed-form seed from the
# Lambert W function, a Newton polish on the simplified equation
# u(eta) = -2n, and a final Newton solve on the full equation for R.
# Run with `python3 demos/01_first_zeros.py`.

# %%

from raux import ctx_new, eta_refine, eta_seed, siegel_residual, zero_solve

ctx = ctx_new(25)
mp = ctx.mp

# %% [markdown]
# The three approximations for a few indices.  Each one moves the point by
# less than the one before.

# %%

for n in (1, 100, 1000):
    seed = eta_seed(n, ctx)
    refined = eta_refine(n, seed, ctx)
    rec = zero_solve(n, ctx, validate=False)
    print(f"n={n}")
    print("  eta''", mp.nstr(seed, 10))
    print("  eta' ", mp.nstr(refined, 10))
    print("  eta  ", mp.nstr(rec.eta_final, 10))
    print("  rho  ", mp.nstr(rec.rho, 20))

# %% [markdown]
# With validation on, the solve is repeated at twice the precision and
# `digits` counts how many leading digits survived.

# %%

rec = zero_solve(2, ctx)
print("rho_-2 =", mp.nstr(rec.rho, 25), " digits kept:", rec.digits)

# %% [markdown]
# R is tied to zeta by zeta(s) = R(s) + chi(s) conj(R(1 - conj s)).  The
# residual of that identity is a cheap end-to-end check of the evaluator.

# %%

for s in ("0.5+14.1j", "-3+7j", "6-12j"):
    print(s, mp.nstr(siegel_residual(mp.mpc(complex(s)), ctx), 3))
