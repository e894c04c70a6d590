"""The verification sweep behind ``hypertube report``.

Each check returns a :class:`Check` with a pass flag and the numbers it was
judged on.  Nothing here records wall-clock time, so a report is a pure
function of the seed.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import mpmath
import numpy as np

from . import comparison, helicoid, mesh, shrinkwrap, tube
from .isometry import T_AXIS, lorentz_inner


@dataclass
class Check:
    id: int
    name: str
    passed: bool
    details: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {"id": self.id, "name": self.name, "passed": bool(self.passed),
                "details": self.details}


def check_meyerhoff_bound() -> Check:
    mpmath.mp.dps = 50
    exact = mpmath.sqrt(3) / (4 * mpmath.pi) * mpmath.log(mpmath.sqrt(2) + 1) ** 2
    got = tube.max_length_bound()
    err = abs(float(mpmath.mpf(got) - exact))
    ok = err <= 1e-14 and round(got, 3) == 0.107
    return Check(1, "meyerhoff_bound", ok, {"value": got, "abs_err_vs_50_digit": err})


def check_tube_asymptotics(l: float = 1e-6, tol: float = 1e-3) -> Check:
    area = tube.boundary_torus_area(l)
    vol = tube.tube_volume(l)
    da, dv = abs(area - math.sqrt(3) / 2), abs(vol - math.sqrt(3) / 4)
    return Check(2, "tube_asymptotics", da < tol and dv < tol,
                 {"l": l, "torus_area": area, "volume": vol, "area_err": da, "volume_err": dv})


def check_kappa_expansion(l: float = 1e-6) -> Check:
    ratio = tube.meyerhoff_kappa(l) * math.sqrt(3) / (2 * math.pi * l)
    return Check(3, "kappa_expansion", abs(ratio - 1) < 1e-2, {"l": l, "ratio": ratio})


def check_annulus_area() -> Check:
    worst_closed = 0.0
    for l in (0.001, 0.01, 0.1):
        for r in (0.1, 1.0, 3.0):
            got = helicoid.annulus_area(l, 0.0, r)
            worst_closed = max(worst_closed, abs(got / (2 * l * math.sinh(r)) - 1))
    violations = 0
    for l in np.linspace(0.001, 0.1, 10):
        for th in np.linspace(0.1, 3.0, 10):
            for r in np.linspace(0.2, 3.0, 5):
                if helicoid.annulus_area(l, th, r) < 2 * th * (math.cosh(r) - 1):
                    violations += 1
    return Check(4, "annulus_area", worst_closed <= 1e-12 and violations == 0,
                 {"closed_form_rel_err": worst_closed, "lower_bound_violations": violations})


def _gap_scan(l: float, thetas: np.ndarray, nodes: int = 400) -> np.ndarray:
    """Gap on many twists at once by fixed Gauss-Legendre quadrature."""
    r = tube.tube_radius(l)
    x, w = np.polynomial.legendre.leggauss(nodes)
    u = 0.5 * r * (x + 1)
    integ = np.sqrt((l * np.cosh(u)) ** 2 + np.outer(thetas**2, np.sinh(u) ** 2))
    ann = r * integ @ w
    return ann - tube.boundary_torus_area(l)


def check_crossover(points: int = 10_000) -> Check:
    details, ok = {}, True
    for l in (0.001, 0.01, 0.05):
        r = tube.tube_radius(l)
        hi = 1.01 * tube.boundary_torus_area(l) / (2 * (math.cosh(r) - 1))
        thetas = np.linspace(hi / points, hi, points)
        gaps = _gap_scan(l, thetas)
        step = thetas[1] - thetas[0]
        change = np.flatnonzero((gaps[:-1] < 0) & (gaps[1:] >= 0))
        monotone = bool(np.all(np.diff(gaps) > 0))
        theta_star = comparison.crossover(l).theta_star
        if change.size != 1:
            ok = False
            details[str(l)] = {"sign_changes": int(change.size)}
            continue
        scan_root = 0.5 * (thetas[change[0]] + thetas[change[0] + 1])
        within = abs(theta_star - scan_root) <= step
        ok = ok and within and monotone
        details[str(l)] = {"theta_star": theta_star, "scan_root": float(scan_root),
                           "scan_step": float(step), "monotone": monotone}
    return Check(5, "crossover", ok, details)


def check_inequality_chain() -> Check:
    rep = comparison.main_inequalities(0.01, math.pi)
    tmin = comparison.min_twist_for_theorem(0.01)
    target = 2 * math.pi * 0.01 * math.sinh(tube.tube_radius(0.01))
    return Check(6, "inequality_chain", rep.holds and abs(tmin - target) <= 1e-10,
                 {"holds": rep.holds, "min_twist": tmin, "closed_form": target})


def check_helicoid_identities(seed: int, samples: int = 200, box: float = 2.0) -> Check:
    # |u|, |v| <= 2 keeps the Lorentz terms below ~200 so an absolute 1e-12
    # is above double rounding; scale-relative errors are reported as well
    rng = np.random.default_rng(seed)
    a = rng.uniform(0, 10, samples)
    u = rng.uniform(-box, box, samples)
    v = rng.uniform(-box, box, samples)
    hyp = eu = eu_rel = hmax = rmax = 0.0
    for ai, ui, vi in zip(a, u, v):
        x = helicoid.helicoid_point(ai, ui, vi)
        hyp = max(hyp, float(abs(lorentz_inner(x, x) + 1)))
        xu, _, _ = helicoid.helicoid_frame(ai, ui, vi)
        err = abs(lorentz_inner(xu, xu) - 1)
        eu = max(eu, err)
        eu_rel = max(eu_rel, err / float(xu @ xu))
        hmax = max(hmax, abs(helicoid.mean_curvature(ai, ui, vi)))
        rmax = max(rmax, helicoid.ruling_residual(ai, ui, vi))
    ok = hyp <= 1e-12 and eu <= 1e-12 and hmax < 1e-8 and rmax < 1e-12
    return Check(7, "helicoid_identities", ok,
                 {"box": box, "hyperboloid_err": hyp, "xu_norm_err": eu,
                  "xu_norm_rel_err": eu_rel, "max_mean_curvature": hmax,
                  "max_ruling_residual": rmax})


def check_stability() -> Check:
    details, ok = {}, True
    for a in (0.0, 0.5, 1.0):
        sw = helicoid.stability_sweep(a)
        good = sw.sign == "positive" and all(e.lambda_min > 0 for e in sw.estimates)
        ok = ok and good
        details[str(a)] = {"lambda_min": sw.lambda_min, "sign": sw.sign}
    sw = helicoid.stability_sweep(5.0)
    ok = ok and sw.sign == "negative"
    details["5.0"] = {"lambda_min": sw.lambda_min, "sign": sw.sign,
                      "refined": [r.lambda_min for r in sw.refined]}
    return Check(8, "stability_signs", ok, details)


def _order(sizes, errors) -> float:
    return float(-np.polyfit(np.log(sizes), np.log(errors), 1)[0])


def check_mesh_oracle() -> Check:
    l, th = 0.01, math.pi
    r = tube.tube_radius(l)
    ann_ref = helicoid.annulus_area(l, th, r)
    disk_ref = tube.meridian_disk_area(r)
    sizes = (16, 32, 64, 128)
    ann_err, disk_err = [], []
    for k in sizes:
        ann_err.append(abs(mesh.mesh_area(mesh.build_helicoid_annulus_mesh(l, th, r, k, k)) / ann_ref - 1))
        disk_err.append(abs(mesh.mesh_area(mesh.build_meridian_disk_mesh(r, k, k)) / disk_ref - 1))
    p_ann, p_disk = _order(sizes, ann_err), _order(sizes, disk_err)
    ok = ann_err[-1] < 0.01 and disk_err[-1] < 0.01 and p_ann >= 1.8 and p_disk >= 1.8
    return Check(9, "mesh_oracle", ok,
                 {"annulus_rel_err_128": ann_err[-1], "disk_rel_err_128": disk_err[-1],
                  "annulus_order": p_ann, "disk_order": p_disk})


def check_coarea() -> Check:
    l, th, s = 0.01, math.pi, 1.0
    hel = mesh.build_helicoid_annulus_mesh(l, th, tube.tube_radius(l), 64, 64)
    c1 = mesh.coarea_verify(hel, T_AXIS, s, 200)
    tilt = 0.7
    radius = 1.1 * math.asinh(math.sinh(s) / math.cos(tilt))
    plane = mesh.build_geodesic_disk_mesh(radius, 64, 128, tilt)
    c2 = mesh.coarea_verify(plane, T_AXIS, s, 200)
    ok = c1.rel_diff < 0.01 and c2.rel_diff < 0.01
    return Check(10, "coarea", ok,
                 {"helicoid": {"direct": c1.direct, "sliced": c1.sliced, "rel_diff": c1.rel_diff},
                  "tilted_plane": {"direct": c2.direct, "sliced": c2.sliced,
                                   "rel_diff": c2.rel_diff, "tilt": tilt}})


def check_shrinkwrap() -> Check:
    sigma = 0.1
    ok, details = True, {}
    for t in (0.0, 0.5, 0.9):
        p = shrinkwrap.ShrinkwrapParams(sigma, t)
        b = shrinkwrap.minimal_torus(p)
        inside = b.window[0] < b.radius < b.window[1]
        grid = np.linspace(0, 1.5 * p.radius, 2001)
        w = np.array([shrinkwrap.conformal_factor(s, p) for s in grid])
        plateau = shrinkwrap.conformal_factor(0.5 * p.radius, p)
        good = inside and w.min() >= 1 and w.max() <= 3 and plateau == 3.0 \
            and shrinkwrap.area_domination_check(p, grid)
        ok = ok and good
        details[f"t={t}"] = {"barrier_radius": b.radius, "window": list(b.window),
                             "plateau": plateau}
    lo, hi = shrinkwrap.disk_ratio_band(sigma)
    ratios = [shrinkwrap.disk_cross_section_area(shrinkwrap.ShrinkwrapParams(sigma, t)) / (1 - t) ** 2
              for t in (0.5, 0.9, 0.99, 0.999)]
    ok = ok and all(lo <= q <= hi for q in ratios)
    details["disk_ratio"] = ratios
    details["band"] = [lo, hi]
    return Check(11, "shrinkwrap_metric", ok, details)


def check_counting() -> Check:
    ok = all(comparison.separation_count(n) == 2**n for n in range(21))
    return Check(12, "separation_count", ok, {"n_max": 20})


def run_all(seed: int = 0) -> list[Check]:
    return [
        check_meyerhoff_bound(),
        check_tube_asymptotics(),
        check_kappa_expansion(),
        check_annulus_area(),
        check_crossover(),
        check_inequality_chain(),
        check_helicoid_identities(seed),
        check_stability(),
        check_mesh_oracle(),
        check_coarea(),
        check_shrinkwrap(),
        check_counting(),
    ]
