# %% [markdown]
# # Stability of helicoids
#
# The smallest Dirichlet eigenvalue of the Jacobi operator on growing
# patches decides stability.  Small pitches stay positive; large pitches
# turn negative once the patch is big enough.  Pitches in between are not
# certified either way.

# %%
from hypertube import helicoid

for a in (0.0, 0.5, 1.0, 2.0, 5.0):
    sw = helicoid.stability_sweep(a)
    print(f"a={a}: lambda_min={sw.lambda_min:+.4f} sign={sw.sign} regime={sw.regime}")

# %% The eigenvalue along the ladder never increases for nested patches.
sw = helicoid.stability_sweep(5.0, refine=0)
for est in sw.estimates:
    p = est.patch
    print(f"u_max={p.u_max:3.1f} v_span={p.v_max:6.3f} grid={est.grid} lambda={est.lambda_min:+.3f}")
