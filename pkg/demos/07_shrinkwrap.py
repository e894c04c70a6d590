# %% [markdown]
# # Shrinkwrapping metrics
#
# Tripling lengths in a thin shell around the core geodesic creates a torus
# of critical area, a barrier that minimizing surfaces cannot cross.  As
# the shell shrinks with ``t``, the meridian disk area decays like
# ``(1 - t)^2``.

# %%
from hypertube import shrinkwrap

sigma = 0.1
for t in (0.0, 0.5, 0.9):
    p = shrinkwrap.ShrinkwrapParams(sigma, t)
    b = shrinkwrap.minimal_torus(p)
    print(f"t={t}: barrier at {b.radius / p.radius:.4f} of the support, window {b.window}")

# %%
lo, hi = shrinkwrap.disk_ratio_band(sigma)
for t in (0.5, 0.9, 0.99, 0.999):
    p = shrinkwrap.ShrinkwrapParams(sigma, t)
    q = shrinkwrap.disk_cross_section_area(p) / (1 - t) ** 2
    print(f"t={t}: disk area / (1-t)^2 = {q:.6f}  (band {lo:.4f}..{hi:.4f})")
