# %% [markdown]
# # Isometries of hyperbolic space
#
# A Möbius map acts on the sphere at infinity and extends to an isometry of
# the upper half-space.  A loxodromic map translates along an axis by ``l``
# and twists around it by ``theta``; together these form its complex length.

# %%
import math

import numpy as np

from hypertube.isometry import (
    MoebiusMap, UpperHalfSpacePoint, axis, classify, complex_length, distance_uhs,
    moebius_to_lorentz, normalize, poincare_extension, uhs_to_hyperboloid,
)

# %% Build a loxodromic map in normal form and hide it behind a conjugation.
g0 = MoebiusMap.from_complex_length(0.01, math.pi / 2)
h = normalize(MoebiusMap(1 + 1j, 0.5, -0.3j, 2.0))
g = h @ g0 @ h.inverse()
print("classification:", classify(g))
print("complex length:", complex_length(g))

# %% The axis is the geodesic joining the fixed points, oriented by travel.
line = axis(g)
print("axis endpoints:", line.start, line.end)
p = line.point(0.0)
q = poincare_extension(g, p)
print("displacement along the axis:", distance_uhs(p, q))

# %% The same map acts linearly on the hyperboloid and preserves the Lorentz form.
L = moebius_to_lorentz(g)
eta = np.diag([-1.0, 1, 1, 1])
print("max |L^T eta L - eta| =", np.abs(L.T @ eta @ L - eta).max())
x = uhs_to_hyperboloid(UpperHalfSpacePoint(0.2 + 0.1j, 0.7)).as_array()
print("image on the hyperboloid:", L @ x)
