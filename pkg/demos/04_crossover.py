# %% [markdown]
# # When does the twisted annulus beat the torus?
#
# For fixed length the annulus area grows with the twist while the torus
# area stays put.  The crossover twist and the inequalities used in the
# minimal-surface argument are computed here.

# %%
import math

import numpy as np

from hypertube import comparison

for l in (0.001, 0.01, 0.05):
    c = comparison.crossover(l)
    print(f"l={l}: theta*={c.theta_star:.6f}  pitch*={c.pitch_star:.2f}")

# %% Gap curve for plotting.
rows = comparison.gap_curve(0.01, np.linspace(0.02, 0.4, 8))
for l, th, ann, tor, gap in rows:
    print(f"theta={th:.3f} gap={gap:+.4f}")

# %% The two strict inequalities at a half twist.
rep = comparison.main_inequalities(0.01, math.pi)
print(rep)
print("smallest admissible twist:", comparison.min_twist_for_theorem(0.01))
print("growth threshold on r:", comparison.GROWTH_THRESHOLD)
