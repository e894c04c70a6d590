# %% [markdown]
# # The helicoid of pitch a
#
# Ruled by geodesics through the axis, minimal, and invariant under the
# screw motion whose complex length has pitch ``a``.  We check these
# properties pointwise and compute the area of the quotient annulus.

# %%
import math

import numpy as np

from hypertube import helicoid
from hypertube.isometry import MoebiusMap, moebius_to_lorentz
from hypertube.tube import tube_radius

rng = np.random.default_rng(0)
a, u, v = 3.0, 0.7, -0.4
print("mean curvature:", helicoid.mean_curvature(a, u, v))
print("ruling residual:", helicoid.ruling_residual(a, u, v))
print("Gauss curvature:", helicoid.gauss_curvature(a, u), "vs", -1 - a**2 / helicoid.metric_G(a, u) ** 2)

# %% The deck transformation shifts v by l.
l, theta = 0.01, math.pi
L = moebius_to_lorentz(MoebiusMap.from_complex_length(l, theta))
x = helicoid.helicoid_point(theta / l, u, v)
print("deck error:", np.abs(L @ x - helicoid.helicoid_point(theta / l, u, v + l)).max())

# %% Annulus area inside the maximal tube, against its two lower bounds.
r = tube_radius(l)
A = helicoid.annulus_area(l, theta, r)
print("annulus area:", A)
print("twist bound:", 2 * theta * (math.cosh(r) - 1), " core bound:", 2 * l * math.sinh(r))
