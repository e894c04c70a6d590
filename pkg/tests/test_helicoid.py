import math

import numpy as np
import pytest
import scipy.linalg as sla
from hypothesis import given, settings, strategies as st
from scipy.integrate import dblquad, quad

from hypertube import helicoid as hel
from hypertube.isometry import MoebiusMap, lorentz_inner, moebius_to_lorentz
from hypertube.tube import tube_radius

ETA = np.diag([-1.0, 1.0, 1.0, 1.0])

pitch = st.floats(0.0, 10.0)
coord = st.floats(-2.0, 2.0)


def fd_partials(a, u, v, h=1e-4):
    """Central differences of the parametrization."""
    x = lambda p, q: hel.helicoid_point(a, p, q)
    xu = (x(u + h, v) - x(u - h, v)) / (2 * h)
    xv = (x(u, v + h) - x(u, v - h)) / (2 * h)
    xuu = (x(u + h, v) - 2 * x(u, v) + x(u - h, v)) / h**2
    xvv = (x(u, v + h) - 2 * x(u, v) + x(u, v - h)) / h**2
    xuv = (x(u + h, v + h) - x(u + h, v - h) - x(u - h, v + h) + x(u - h, v - h)) / (4 * h * h)
    return xu, xv, xuu, xuv, xvv


def null_normal(a, u, v):
    """Unit normal as the Lorentz-orthogonal complement of span(x, x_u, x_v)."""
    x = hel.helicoid_point(a, u, v)
    xu, xv, *_ = fd_partials(a, u, v)
    M = np.vstack([x, xu, xv]) @ ETA
    n = sla.null_space(M)[:, 0]
    return n / math.sqrt(lorentz_inner(n, n))


class TestParametrization:
    @settings(max_examples=100)
    @given(a=pitch, u=coord, v=coord)
    def test_on_hyperboloid(self, a, u, v):
        x = hel.helicoid_point(a, u, v)
        assert abs(lorentz_inner(x, x) + 1) <= 1e-12
        assert x[0] >= 1

    def test_vectorized(self):
        U, V = np.meshgrid(np.linspace(-1, 1, 5), np.linspace(0, 2, 7), indexing="ij")
        X = hel.helicoid_point(1.5, U, V)
        assert X.shape == (5, 7, 4)
        assert np.allclose(X[2, 3], hel.helicoid_point(1.5, U[2, 3], V[2, 3]))

    @settings(max_examples=50)
    @given(a=pitch, u=coord, v=coord)
    def test_derivatives_match_fd(self, a, u, v):
        d = hel.helicoid_derivatives(a, u, v)
        for key, fd in zip(("xu", "xv", "xuu", "xuv", "xvv"), fd_partials(a, u, v)):
            scale = max(1.0, np.abs(d[key]).max())
            assert np.abs(d[key] - fd).max() <= 2e-5 * scale * max(1, a * a)

    @settings(max_examples=50)
    @given(a=pitch, u=coord, v=coord)
    def test_first_form(self, a, u, v):
        xu, xv, _ = hel.helicoid_frame(a, u, v)
        E, F, G = hel.first_fundamental_form(a, u)
        assert lorentz_inner(xu, xu) == pytest.approx(E, abs=1e-12)
        assert lorentz_inner(xu, xv) == pytest.approx(F, abs=1e-10 * max(1, a))
        assert lorentz_inner(xv, xv) == pytest.approx(G, rel=1e-11)

    def test_deck_map_shifts_v(self):
        rng = np.random.default_rng(0)
        for l, th in [(0.01, math.pi), (0.5, -1.0), (0.07, 2.5)]:
            L = moebius_to_lorentz(MoebiusMap.from_complex_length(l, th))
            for _ in range(20):
                u, v = rng.uniform(-2, 2, 2)
                x = hel.helicoid_point(th / l, u, v)
                assert np.abs(L @ x - hel.helicoid_point(th / l, u, v + l)).max() <= 1e-10


class TestCurvature:
    @settings(max_examples=50)
    @given(a=pitch, u=coord, v=coord)
    def test_normal_matches_null_space(self, a, u, v):
        _, _, N = hel.helicoid_frame(a, u, v)
        assert lorentz_inner(N, N) == pytest.approx(1.0, abs=1e-12)
        ref = null_normal(a, u, v)
        s = np.sign(lorentz_inner(N, ref))
        assert np.abs(N - s * ref).max() <= 1e-6 * max(1.0, np.abs(N).max())

    @settings(max_examples=50)
    @given(a=pitch, u=coord, v=coord)
    def test_second_form_closed_form(self, a, u, v):
        e, f, g = hel.second_fundamental_form(a, u, v)
        G = hel.metric_G(a, u)
        scale = max(1.0, a * a) * math.cosh(u) ** 2
        assert abs(e) <= 1e-12 * scale
        assert abs(g) <= 1e-12 * scale * max(1, a)
        assert f == pytest.approx(a / math.sqrt(G), abs=1e-12 * scale)

    def test_mean_curvature_fd(self):
        # independent route: FD second derivatives against the null-space normal
        rng = np.random.default_rng(1)
        for _ in range(20):
            a, u, v = rng.uniform(0, 5), rng.uniform(-1.5, 1.5), rng.uniform(-2, 2)
            _, _, xuu, xuv, xvv = fd_partials(a, u, v)
            N = null_normal(a, u, v)
            e, g = lorentz_inner(xuu, N), lorentz_inner(xvv, N)
            G = hel.metric_G(a, u)
            assert abs(0.5 * (e * G + g) / G) < 1e-5
            assert abs(hel.mean_curvature(a, u, v)) < 1e-8

    @pytest.mark.parametrize("a", [0.0, 0.5, 2.0, 7.0])
    def test_gauss_curvature_brioschi(self, a):
        # for du^2 + G dv^2: K = -(sqrt G)_uu / sqrt G, by finite differences
        h = 1e-3
        for u in np.linspace(-2, 2, 9):
            sg = lambda p: math.sqrt(hel.metric_G(a, p))
            K_fd = -(sg(u + h) - 2 * sg(u) + sg(u - h)) / h**2 / sg(u)
            G = hel.metric_G(a, u)
            assert hel.gauss_curvature(a, u) == pytest.approx(K_fd, rel=1e-4, abs=1e-6)
            assert hel.gauss_curvature(a, u) == pytest.approx(-1 - a * a / G**2, rel=1e-12)

    @pytest.mark.parametrize("a", [0.0, 0.5, 2.0, 7.0])
    def test_gauss_equation(self, a):
        # K = -1 + det(II)/det(I) and |A|^2 from the shape operator
        for u in np.linspace(-2, 2, 7):
            e, f, g = hel.second_fundamental_form(a, u, 0.3)
            G = hel.metric_G(a, u)
            assert hel.gauss_curvature(a, u) == pytest.approx(-1 + (e * g - f * f) / G, rel=1e-10)
            A2 = e * e + 2 * f * f / G + g * g / G**2
            assert hel.squared_second_form(a, u) == pytest.approx(A2, rel=1e-10, abs=1e-14)

    @settings(max_examples=50)
    @given(a=pitch, u=coord, v=coord)
    def test_rulings_are_geodesics(self, a, u, v):
        assert hel.ruling_residual(a, u, v) < 1e-12
        assert hel.ruling_residual(a, u, v, method="fd") < 1e-6 * math.cosh(u) * math.cosh(v)

    def test_ruling_method_check(self):
        with pytest.raises(ValueError):
            hel.ruling_residual(1.0, 0.0, 0.0, method="spline")


class TestAnnulus:
    @pytest.mark.parametrize("l, th, r", [(0.01, math.pi, 1.98), (0.05, 0.3, 1.0), (0.1, 2.0, 3.0)])
    def test_against_quad(self, l, th, r):
        want = 2 * quad(lambda u: math.hypot(l * math.cosh(u), th * math.sinh(u)), 0, r,
                        epsabs=0, epsrel=1e-13)[0]
        assert hel.annulus_area(l, th, r) == pytest.approx(want, rel=1e-10)

    def test_against_surface_area_integral(self):
        # area of the fundamental domain from the induced metric computed numerically
        l, th, r = 0.3, 1.2, 1.1
        a = th / l

        def density(v, u):
            xu, xv, *_ = fd_partials(a, u, v, h=1e-5)
            E, F, G = (lorentz_inner(xu, xu), lorentz_inner(xu, xv), lorentz_inner(xv, xv))
            return math.sqrt(E * G - F * F)

        want = dblquad(density, -r, r, 0, l, epsrel=1e-9)[0]
        assert hel.annulus_area(l, th, r) == pytest.approx(want, rel=1e-7)

    def test_untwisted_closed_form(self):
        for l in (0.001, 0.01, 0.1):
            for r in (0.1, 1.0, 3.0):
                assert hel.annulus_area(l, 0.0, r) == pytest.approx(2 * l * math.sinh(r), rel=1e-12)

    @settings(max_examples=60, deadline=None)
    @given(l=st.floats(0.001, 0.1), th=st.floats(0.01, 3.2), r=st.floats(0.1, 3))
    def test_lower_bounds(self, l, th, r):
        A = hel.annulus_area(l, th, r)
        assert A >= 2 * th * (math.cosh(r) - 1)
        assert A >= 2 * l * math.sinh(r)

    def test_longitude_polygon(self):
        l, th, s = 0.2, 1.5, 0.8
        v = np.linspace(0, l, 20001)
        pts = hel.helicoid_point(th / l, np.full_like(v, s), v)
        d = np.diff(pts, axis=0)
        chords = 2 * np.arcsinh(0.5 * np.sqrt(np.einsum("ij,jk,ik->i", d, ETA, d)))
        # two longitudes, at u = +s and u = -s, of equal length
        assert hel.longitude_length(l, th, s) == pytest.approx(2 * chords.sum(), rel=1e-8)

    def test_bad_radius(self):
        with pytest.raises(ValueError):
            hel.annulus_area(0.1, 1.0, 0.0)


def dense_lambda_min(a, patch, grid):
    A, w = hel.jacobi_operator(a, patch, grid)
    return float(sla.eigh(A.toarray(), np.diag(w), eigvals_only=True)[0])


class TestJacobi:
    @pytest.mark.parametrize("a", [0.0, 0.5, 2.0, 5.0])
    def test_matches_dense_eigh(self, a):
        patch = hel.HelicoidPatch.symmetric(a, 1.5, 1.0)
        est = hel.jacobi_lambda_min(a, patch, (20, 12))
        assert est.lambda_min == pytest.approx(dense_lambda_min(a, patch, (20, 12)), rel=1e-8, abs=1e-8)

    def test_symmetric(self):
        A, w = hel.jacobi_operator(1.0, hel.HelicoidPatch.symmetric(1.0, 1.0), (10, 10))
        assert abs(A - A.T).max() < 1e-12
        assert np.all(w > 0)

    def test_totally_geodesic_above_two(self):
        # a = 0: |A|^2 = 0 and -Delta > 0, so every Dirichlet eigenvalue exceeds 2
        for u_max in (0.5, 2.0, 3.0):
            est = hel.jacobi_lambda_min(0.0, hel.HelicoidPatch.symmetric(0.0, u_max, 4.0), (24, 24))
            assert est.lambda_min > 2.0

    def test_flat_limit(self):
        # tiny patch near the axis of H_0: -Delta + 2 on a square of side h
        h = 0.02
        patch = hel.HelicoidPatch(0.0, -h / 2, h / 2, 0.0, h)
        est = hel.jacobi_lambda_min(0.0, patch, (40, 40))
        assert est.lambda_min == pytest.approx(2 * (math.pi / h) ** 2 + 2, rel=2e-3)

    def test_grid_convergence(self):
        a = 1.0
        p = hel.HelicoidPatch.symmetric(a, 2.0, 1.0)
        lams = [hel.jacobi_lambda_min(a, p, hel.patch_grid(p, k, k)).lambda_min for k in (8, 16, 32)]
        assert abs(lams[2] - lams[1]) < abs(lams[1] - lams[0])

    @pytest.mark.parametrize("a", [0.5, 5.0])
    def test_nested_ladder_monotone(self, a):
        sw = hel.stability_sweep(a, refine=0)
        by_u = {}
        for est in sw.estimates:
            by_u.setdefault(est.patch.u_max, []).append(est.lambda_min)
        for lams in by_u.values():
            assert all(x >= y - 1e-9 for x, y in zip(lams, lams[1:]))
        for periods_idx in range(3):
            col = [by_u[u][periods_idx] for u in sorted(by_u)]
            assert all(x >= y - 1e-9 for x, y in zip(col, col[1:]))

    def test_small_grid_rejected(self):
        with pytest.raises(ValueError):
            hel.jacobi_operator(1.0, hel.HelicoidPatch.symmetric(1.0, 1.0), (4, 10))

    @pytest.mark.parametrize("a", [0.0, 0.5, 1.0])
    def test_stable_pitches(self, a):
        sw = hel.stability_sweep(a)
        assert sw.sign == "positive" and sw.regime == "stable"
        assert all(e.lambda_min > 0 for e in sw.estimates)

    def test_unstable_pitch(self):
        sw = hel.stability_sweep(5.0)
        assert sw.sign == "negative" and sw.regime == "unstable"
        assert all(r.stable_sign == "negative" for r in sw.refined)

    def test_intermediate_never_certified(self):
        assert hel.stability_sweep(2.0, refine=0).regime == "inconclusive"


def test_patch_validation():
    with pytest.raises(ValueError):
        hel.HelicoidPatch(1.0, 1.0, 1.0, 0.0, 1.0)
    p = hel.HelicoidPatch.symmetric(2.0, 1.0, 2.0)
    assert p.v_max == pytest.approx(2 * math.pi)


def test_tube_radius_example_area():
    r = tube_radius(0.01)
    assert hel.annulus_area(0.01, math.pi, r) > 2 * math.pi * (math.cosh(r) - 1)
