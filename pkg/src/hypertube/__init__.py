"""Numerical toolkit for short geodesics, their maximal tubes and the
helicoidal minimal annuli inside them."""

__version__ = "0.1.0"

from .isometry import (INFINITY, ComplexLength, GeodesicLine, HyperboloidPoint, MoebiusMap,
                       UpperHalfSpacePoint, axis, classify, complex_length, dist_to_axis,
                       distance_uhs, hyperboloid_to_uhs, normalize, poincare_extension,
                       uhs_to_hyperboloid)
from .tube import (TubeProfile, boundary_torus_area, max_length_bound, meridian_disk_area,
                   meyerhoff_kappa, tube_profile, tube_radius, tube_volume, tubes_disjoint)
from .helicoid import (HelicoidPatch, JacobiEstimate, annulus_area, first_fundamental_form,
                       gauss_curvature, helicoid_frame, helicoid_point, jacobi_lambda_min,
                       longitude_length, mean_curvature, ruling_residual, stability_sweep)
from .comparison import (ComparisonReport, area_gap, crossover_pitch, disk_obstruction,
                         main_inequalities, min_twist_for_theorem, separation_count)
from .shrinkwrap import (ShrinkwrapParams, area_domination_check, bump, conformal_factor,
                         disk_cross_section_area, minimal_torus_radius)
from .mesh import (TriMesh, build_helicoid_annulus_mesh, build_meridian_disk_mesh,
                   coarea_verify, mesh_area, minimize_area)
