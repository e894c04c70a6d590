# %% [markdown]
# # Maximal tubes around short geodesics
#
# A closed geodesic shorter than about 0.107 has an embedded tube whose
# radius grows without bound as the length shrinks.  This script tabulates
# the tube profile and shows the limits of torus area and volume.

# %%
import math

import numpy as np

from hypertube import tube

print("length bound:", tube.max_length_bound())

# %%
print(f"{'l':>10} {'r_max':>10} {'torus':>10} {'volume':>10}")
for l in np.geomspace(1e-7, 0.1, 8):
    p = tube.tube_profile(l)
    print(f"{l:10.3g} {p.r_max:10.4f} {p.boundary_area:10.6f} {p.volume:10.6f}")
print("limits:", math.sqrt(3) / 2, math.sqrt(3) / 4)

# %% Lengths past the bound are rejected.
try:
    tube.tube_radius(0.2)
except tube.DomainError as exc:
    print("error:", exc)
