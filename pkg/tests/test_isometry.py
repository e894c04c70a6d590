import cmath
import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hypertube.isometry import (
    INFINITY, T_AXIS, ClassificationError, DegenerateMapError, GeodesicLine, HyperboloidPoint,
    MoebiusMap, UpperHalfSpacePoint, axis, classify, complex_length, dist_to_axis,
    dist_to_axis_hyperboloid, distance_hyperboloid, distance_uhs, hyperboloid_to_uhs,
    lorentz_inner, moebius_to_lorentz, normalize, poincare_extension, radial_gradient,
    uhs_to_hyperboloid,
)

finite = st.floats(-3, 3, allow_nan=False)
cplx = st.builds(complex, finite, finite)
heights = st.floats(0.05, 5.0)
points = st.builds(UpperHalfSpacePoint, cplx, heights)


def random_map(rng, scale=1.0):
    while True:
        e = rng.normal(size=4) * scale + 1j * rng.normal(size=4) * scale
        m = MoebiusMap(*e)
        if abs(m.det) > 1e-2:
            return m


def arc_length_oracle(p, q, n=4001):
    """Hyperbolic length of the geodesic arc from p to q, integrated along it.

    Points are moved by a map sending p to j and q onto the t-axis; the
    length of the segment of the t-axis is then ``|log t|``.  Here instead the
    metric ``|dx| / t`` is integrated along the Euclidean circle arc, which
    uses nothing from the distance formula.
    """
    z0, z1, t0, t1 = p.z, q.z, p.t, q.t
    if abs(z1 - z0) < 1e-14:
        return abs(math.log(t1 / t0))
    # geodesic is a semicircle over the line through z0, z1, centred at c on it
    e = (z1 - z0) / abs(z1 - z0)
    x0, x1 = 0.0, abs(z1 - z0)
    c = (x1**2 + t1**2 - t0**2) / (2 * x1)
    R = math.hypot(c - x0, t0)
    a0, a1 = math.atan2(t0, x0 - c), math.atan2(t1, x1 - c)
    # ds = R d(angle) / (R sin(angle)) = d(angle)/sin(angle)
    return abs(float(mpmath.quad(lambda s: 1 / mpmath.sin(s), [a0, a1])))


class TestNormalize:
    def test_det_one(self):
        rng = np.random.default_rng(0)
        for _ in range(50):
            m = normalize(random_map(rng))
            assert abs(m.det - 1) <= 1e-12

    def test_sign_canonical(self):
        m = MoebiusMap(2, 1, 1, 1)
        neg = MoebiusMap(-2, -1, -1, -1)
        assert normalize(m) == normalize(neg)
        assert normalize(m).trace.real >= 0

    def test_degenerate(self):
        with pytest.raises(DegenerateMapError, match="degenerate"):
            normalize(MoebiusMap(1, 2, 2, 4))


class TestClassify:
    def test_examples(self):
        assert classify(MoebiusMap.identity()) == "identity"
        assert classify(MoebiusMap(1, 1, 0, 1)) == "parabolic"
        assert classify(MoebiusMap.from_complex_length(0.0, 1.0)) == "elliptic"
        assert classify(MoebiusMap.from_complex_length(0.3, 0.0)) == "loxodromic"
        assert classify(MoebiusMap.from_complex_length(0.3, 2.0)) == "loxodromic"

    def test_scalar_multiple_is_identity(self):
        assert classify(MoebiusMap(3j, 0, 0, 3j)) == "identity"


class TestComplexLength:
    def test_normal_form_round_trip(self):
        for l in (0.01, 0.5, 2.0):
            for th in (-3.0, -0.5, 0.0, 1.0, 3.1):
                cl = complex_length(MoebiusMap.from_complex_length(l, th))
                assert cl.l == pytest.approx(l, abs=1e-12)
                assert cl.theta == pytest.approx(th, abs=1e-9)

    def test_theta_pi_folds(self):
        cl = complex_length(MoebiusMap.from_complex_length(0.2, -math.pi))
        assert cl.theta == pytest.approx(math.pi)

    def test_pitch(self):
        cl = complex_length(MoebiusMap.from_complex_length(0.01, -math.pi / 2))
        assert cl.pitch == pytest.approx(50 * math.pi)
        assert cl.twist_sign == -1

    def test_trace_relation_mpmath(self):
        rng = np.random.default_rng(7)
        for _ in range(20):
            m = normalize(random_map(rng))
            if classify(m) != "loxodromic":
                continue
            cl = complex_length(m)
            tr = mpmath.mpc(m.trace.real, m.trace.imag)
            got = 2 * mpmath.cosh(mpmath.mpc(cl.l, cl.theta) / 2)
            assert abs(abs(got) - abs(tr)) < 1e-9 * max(1, abs(tr))
            assert min(abs(got - tr), abs(got + tr)) < 1e-9 * max(1, abs(tr))

    def test_non_loxodromic_raises(self):
        with pytest.raises(ClassificationError):
            complex_length(MoebiusMap(1, 1, 0, 1))

    @settings(max_examples=60, deadline=None)
    @given(l=st.floats(0.01, 3), th=st.floats(-3.1, 3.1), h=st.tuples(cplx, cplx, cplx, cplx))
    def test_conjugation_invariance(self, l, th, h):
        H = MoebiusMap(*h)
        if abs(H.det) < 1e-2:
            return
        m = MoebiusMap.from_complex_length(l, th)
        c = complex_length(H @ m @ H.inverse())
        assert c.l == pytest.approx(l, abs=1e-9)
        assert c.theta == pytest.approx(th, abs=1e-9)


class TestExtension:
    def test_fixes_axis_translation(self):
        m = MoebiusMap.from_complex_length(0.7, 1.3)
        q = poincare_extension(m, UpperHalfSpacePoint(0j, 2.0))
        assert abs(q.z) < 1e-15
        assert q.t == pytest.approx(2.0 * math.exp(0.7))

    def test_unnormalized_matrix_same_action(self):
        rng = np.random.default_rng(2)
        m = random_map(rng)
        k = 2.5 - 1j
        big = MoebiusMap(k * m.a, k * m.b, k * m.c, k * m.d)
        p = UpperHalfSpacePoint(0.3 + 0.2j, 0.9)
        a, b = poincare_extension(m, p), poincare_extension(big, p)
        assert a.z == pytest.approx(b.z, abs=1e-12)
        assert a.t == pytest.approx(b.t, rel=1e-12)

    def test_boundary_limit(self):
        # as t -> 0 the extension approaches the boundary action
        m = MoebiusMap(1 + 1j, 2, 0.5, 1)
        z = 0.4 - 0.3j
        q = poincare_extension(m, UpperHalfSpacePoint(z, 1e-8))
        assert q.z == pytest.approx(m(z), abs=1e-6)

    @settings(max_examples=80, deadline=None)
    @given(p=points, q=points, h=st.tuples(cplx, cplx, cplx, cplx))
    def test_isometry(self, p, q, h):
        m = MoebiusMap(*h)
        if abs(m.det) < 1e-2:
            return
        d0 = distance_uhs(p, q)
        d1 = distance_uhs(poincare_extension(m, p), poincare_extension(m, q))
        assert d1 == pytest.approx(d0, abs=1e-10 * max(1, d0) * max(1, d0))


class TestDistances:
    def test_vertical_segment(self):
        p, q = UpperHalfSpacePoint(0j, 1.0), UpperHalfSpacePoint(0j, math.e**2)
        assert distance_uhs(p, q) == pytest.approx(2.0, abs=1e-14)

    def test_arc_oracle(self):
        rng = np.random.default_rng(3)
        for _ in range(10):
            p = UpperHalfSpacePoint(complex(*rng.normal(size=2)), rng.uniform(0.2, 2))
            q = UpperHalfSpacePoint(complex(*rng.normal(size=2)), rng.uniform(0.2, 2))
            assert distance_uhs(p, q) == pytest.approx(arc_length_oracle(p, q), rel=1e-10)

    def test_models_agree(self):
        rng = np.random.default_rng(4)
        pts = [UpperHalfSpacePoint(complex(*rng.normal(size=2)), rng.uniform(0.1, 3))
               for _ in range(10)]
        for p in pts:
            for q in pts:
                x, y = uhs_to_hyperboloid(p).as_array(), uhs_to_hyperboloid(q).as_array()
                oracle = math.acosh(max(1.0, -float(lorentz_inner(x, y))))
                assert distance_hyperboloid(x, y) == pytest.approx(distance_uhs(p, q), abs=1e-10)
                assert oracle == pytest.approx(distance_uhs(p, q), abs=1e-7)

    @settings(max_examples=80, deadline=None)
    @given(p=points)
    def test_round_trip(self, p):
        back = hyperboloid_to_uhs(uhs_to_hyperboloid(p))
        assert back.z == pytest.approx(p.z, abs=1e-12 * max(1, abs(p.z)) / p.t)
        assert back.t == pytest.approx(p.t, rel=1e-12)

    def test_hyperboloid_point_validates(self):
        with pytest.raises(ValueError):
            HyperboloidPoint(1.0, 1.0, 0.0, 0.0)

    def test_lorentz_matrix_matches_extension(self):
        rng = np.random.default_rng(5)
        m = random_map(rng)
        L = moebius_to_lorentz(m)
        eta = np.diag([-1.0, 1, 1, 1])
        assert np.allclose(L.T @ eta @ L, eta, atol=1e-10)
        p = UpperHalfSpacePoint(0.2 + 0.1j, 0.8)
        want = uhs_to_hyperboloid(poincare_extension(m, p)).as_array()
        assert np.allclose(L @ uhs_to_hyperboloid(p).as_array(), want, atol=1e-10)


class TestAxis:
    def test_standard(self):
        g = axis(MoebiusMap.from_complex_length(0.5, 1.0))
        assert g.start == 0 and g.end is INFINITY
        g = axis(MoebiusMap.from_complex_length(0.5, 1.0).inverse())
        assert g.start is INFINITY and g.end == 0

    def test_conjugated_axis_and_translation(self):
        rng = np.random.default_rng(6)
        for _ in range(10):
            H = normalize(random_map(rng))
            m = H @ MoebiusMap.from_complex_length(0.4, 0.9) @ H.inverse()
            g = axis(m)
            want = GeodesicLine(H(0j), H(INFINITY))
            assert g.start == pytest.approx(want.start, abs=1e-8)
            assert g.end == pytest.approx(want.end, abs=1e-8)
            # m moves points of the axis by l along it
            p = g.point(0.3)
            q = poincare_extension(m, p)
            assert dist_to_axis(q, g) < 1e-6
            assert distance_uhs(p, q) == pytest.approx(0.4, abs=1e-8)
            assert distance_uhs(g.point(0.7), q) < 1e-6

    def test_parametrization_unit_speed(self):
        g = GeodesicLine(1 + 1j, -2 + 0.5j)
        assert distance_uhs(g.point(-0.4), g.point(1.1)) == pytest.approx(1.5, abs=1e-12)

    def test_distinct_endpoints(self):
        with pytest.raises(ValueError):
            GeodesicLine(1j, 1j)
        with pytest.raises(ValueError):
            GeodesicLine(INFINITY, INFINITY)


class TestDistToAxis:
    def test_closed_form_t_axis(self):
        p = UpperHalfSpacePoint(0.3 - 0.4j, 0.25)
        assert math.sinh(dist_to_axis(p, T_AXIS)) == pytest.approx(0.5 / 0.25, rel=1e-14)

    def test_brute_force_min(self):
        rng = np.random.default_rng(8)
        g = GeodesicLine(0.5 + 0.2j, -1.0 + 1.0j)
        s = np.linspace(-8, 8, 4001)
        for _ in range(5):
            p = UpperHalfSpacePoint(complex(*rng.normal(size=2)), rng.uniform(0.2, 2))
            d = [distance_uhs(p, g.point(x)) for x in s]
            i = int(np.argmin(d))
            # refine on a fine local grid
            fine = np.linspace(s[max(i - 1, 0)], s[min(i + 1, len(s) - 1)], 2001)
            best = min(distance_uhs(p, g.point(x)) for x in fine)
            assert dist_to_axis(p, g) == pytest.approx(best, abs=1e-8)

    def test_hyperboloid_version(self):
        g = GeodesicLine(0.5 + 0.2j, -1.0 + 1.0j)
        p = UpperHalfSpacePoint(0.1 + 0.3j, 0.7)
        x = uhs_to_hyperboloid(p).as_array()
        assert dist_to_axis_hyperboloid(x, g) == pytest.approx(dist_to_axis(p, g), abs=1e-12)

    def test_radial_gradient_fd(self):
        x = uhs_to_hyperboloid(UpperHalfSpacePoint(0.4 + 0.2j, 0.6)).as_array()
        grad = radial_gradient(x)
        assert lorentz_inner(grad, grad) == pytest.approx(1.0, abs=1e-12)
        assert lorentz_inner(grad, x) == pytest.approx(0.0, abs=1e-12)
        # directional derivative along a random tangent vector
        rng = np.random.default_rng(9)
        w = rng.normal(size=4)
        w = w + lorentz_inner(w, x) * x
        h = 1e-6
        xp = np.cosh(h) * x + np.sinh(h) * w / math.sqrt(lorentz_inner(w, w))
        xm = np.cosh(h) * x - np.sinh(h) * w / math.sqrt(lorentz_inner(w, w))
        fd = (dist_to_axis_hyperboloid(xp) - dist_to_axis_hyperboloid(xm)) / (2 * h)
        assert fd == pytest.approx(lorentz_inner(grad, w) / math.sqrt(lorentz_inner(w, w)), abs=1e-7)


def test_infinity_is_singleton():
    import pickle
    assert pickle.loads(pickle.dumps(INFINITY)) is INFINITY
    assert MoebiusMap(1, 0, 0, 1)(INFINITY) is INFINITY
    assert MoebiusMap(0, 1, 1, 0)(0j) is INFINITY
    assert cmath.isfinite(MoebiusMap(0, 1, 1, 0)(INFINITY))
