# %% [markdown]
# # Discrete surfaces
#
# Triangle meshes on the hyperboloid measure area by angle defect.  They
# reproduce the closed-form areas under refinement, flow back to the
# minimal annulus after a perturbation, and confirm the coarea formula by
# slicing with distance to the axis.

# %%
import math

from hypertube import helicoid, mesh, tube
from hypertube.isometry import T_AXIS

l, theta = 0.01, math.pi
r = tube.tube_radius(l)
ref = helicoid.annulus_area(l, theta, r)
for k in (16, 32, 64):
    A = mesh.mesh_area(mesh.build_helicoid_annulus_mesh(l, theta, r, k, k))
    print(f"{k}x{k}: rel err {A / ref - 1:+.2e}")

# %% Perturb a small annulus and let gradient descent restore it.
m0 = mesh.build_helicoid_annulus_mesh(1.0, 1.0, 1.0, 16, 16)
bumped = mesh.perturb(m0, 1e-2, seed=1)
res = mesh.minimize_area(bumped, max_steps=200)
print("quadrature:", helicoid.annulus_area(1.0, 1.0, 1.0))
print("perturbed:", res.areas[0], "-> minimized:", res.areas[-1], "steps:", res.steps)

# %% Coarea: direct clipped area vs integrated slice lengths.
hel = mesh.build_helicoid_annulus_mesh(l, theta, r, 64, 64)
c = mesh.coarea_verify(hel, T_AXIS, 1.0)
print("helicoid:", c.direct, c.sliced, c.rel_diff)
tilt = 0.7
plane = mesh.build_geodesic_disk_mesh(1.1 * math.asinh(math.sinh(1.0) / math.cos(tilt)), 64, 128, tilt)
c = mesh.coarea_verify(plane, T_AXIS, 1.0)
print("tilted plane:", c.direct, c.sliced, "analytic:", mesh.tilted_plane_clipped_area(1.0, tilt))
