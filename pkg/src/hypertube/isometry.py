"""Moebius transformations acting on hyperbolic 3-space.

Two models are used throughout the package:

* the upper half-space ``{z + t j : t > 0}`` with metric ``(|dz|^2 + dt^2)/t^2``;
* the hyperboloid ``{x : <x,x> = -1, x1 >= 1}`` in Lorentzian 4-space with
  ``<x,y> = -x1 y1 + x2 y2 + x3 y3 + x4 y4``.

The chart between them sends ``z + t j`` to::

    x1 = (|z|^2 + t^2 + 1) / (2t),   x2 = (|z|^2 + t^2 - 1) / (2t),
    x3 + i x4 = z / t

so the vertical axis ``z = 0`` becomes the curve ``(cosh v, sinh v, 0, 0)``
with ``t = e^v``.  Equivalently the point corresponds to the Hermitian matrix
``[[x1 + x2, x3 + i x4], [x3 - i x4, x1 - x2]]`` and ``g`` acts by
``X -> A X A^*``; :func:`moebius_to_lorentz` uses this.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from .config import DEFAULTS


class DegenerateMapError(ValueError):
    pass


class ClassificationError(ValueError):
    """Raised when an operation needs a loxodromic map and gets something else."""


class ConsistencyError(ArithmeticError):
    pass


def lorentz_inner(x, y):
    """Lorentzian inner product along the last axis."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    return -x[..., 0] * y[..., 0] + np.sum(x[..., 1:] * y[..., 1:], axis=-1)


# ---------------------------------------------------------------------------
# points and lines

@dataclass(frozen=True)
class UpperHalfSpacePoint:
    z: complex
    t: float

    def __post_init__(self):
        if not self.t > 0:
            raise ValueError(f"height must be positive, got t={self.t!r}")


@dataclass(frozen=True)
class HyperboloidPoint:
    x1: float
    x2: float
    x3: float
    x4: float

    def __post_init__(self):
        x = self.as_array()
        if abs(lorentz_inner(x, x) + 1.0) > DEFAULTS.hyperboloid or self.x1 < 1.0 - DEFAULTS.hyperboloid:
            raise ValueError(f"point {tuple(x)} is not on the hyperboloid")

    def as_array(self) -> np.ndarray:
        return np.array([self.x1, self.x2, self.x3, self.x4])

    @classmethod
    def from_array(cls, x) -> "HyperboloidPoint":
        return cls(*(float(c) for c in x))


class _Infinity:
    """The point at infinity of the Riemann sphere."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INFINITY"

    def __reduce__(self):
        return (_Infinity, ())


INFINITY = _Infinity()
BoundaryPoint = Union[complex, _Infinity]


def _is_inf(p) -> bool:
    return p is INFINITY


# ---------------------------------------------------------------------------
# Moebius maps

@dataclass(frozen=True)
class MoebiusMap:
    """The map ``z -> (a z + b) / (c z + d)``; ``M`` and ``-M`` act identically."""

    a: complex
    b: complex
    c: complex
    d: complex

    @property
    def det(self) -> complex:
        return self.a * self.d - self.b * self.c

    @property
    def trace(self) -> complex:
        return self.a + self.d

    def matrix(self) -> np.ndarray:
        return np.array([[self.a, self.b], [self.c, self.d]], dtype=complex)

    @classmethod
    def from_matrix(cls, m) -> "MoebiusMap":
        m = np.asarray(m, dtype=complex)
        return cls(complex(m[0, 0]), complex(m[0, 1]), complex(m[1, 0]), complex(m[1, 1]))

    @classmethod
    def identity(cls) -> "MoebiusMap":
        return cls(1, 0, 0, 1)

    @classmethod
    def from_complex_length(cls, l: float, theta: float) -> "MoebiusMap":
        """Normal form ``z -> exp(l + i theta) z``."""
        half = cmath.exp(0.5 * complex(l, theta))
        return cls(half, 0, 0, 1 / half)

    def __matmul__(self, other: "MoebiusMap") -> "MoebiusMap":
        return MoebiusMap.from_matrix(self.matrix() @ other.matrix())

    def inverse(self) -> "MoebiusMap":
        return MoebiusMap(self.d, -self.b, -self.c, self.a)

    def __call__(self, z: BoundaryPoint) -> BoundaryPoint:
        """Action on the sphere at infinity."""
        a, b, c, d = self.a, self.b, self.c, self.d
        if _is_inf(z):
            return INFINITY if c == 0 else a / c
        den = c * z + d
        if den == 0:
            return INFINITY
        return (a * z + b) / den


def normalize(m: MoebiusMap) -> MoebiusMap:
    """Scale to determinant one, choosing the sign with ``Re tr >= 0``.

    Ties (``Re tr == 0``) are broken by ``Im tr >= 0``, so ``M`` and ``-M``
    normalize to the same entries.
    """
    det = m.det
    if det == 0 or not cmath.isfinite(det):
        raise DegenerateMapError("degenerate Möbius map")
    s = cmath.sqrt(det)
    a, b, c, d = m.a / s, m.b / s, m.c / s, m.d / s
    tr = a + d
    if tr.real < 0 or (tr.real == 0 and tr.imag < 0):
        a, b, c, d = -a, -b, -c, -d
    return MoebiusMap(a, b, c, d)


def classify(m: MoebiusMap, tol: float | None = None) -> str:
    """Return one of ``identity``, ``parabolic``, ``elliptic`` or ``loxodromic``."""
    tol = DEFAULTS.trace if tol is None else tol
    m = normalize(m)
    scale = max(1.0, abs(m.a), abs(m.b), abs(m.c), abs(m.d))
    if abs(m.b) <= tol * scale and abs(m.c) <= tol * scale and abs(m.a - m.d) <= tol * scale:
        return "identity"
    tr = m.trace
    if abs(tr.imag) <= tol * scale:
        if abs(abs(tr.real) - 2.0) <= tol * scale:
            return "parabolic"
        if abs(tr.real) < 2.0:
            return "elliptic"
    return "loxodromic"


@dataclass(frozen=True)
class ComplexLength:
    """Translation length ``l`` and twist ``theta`` in ``(-pi, pi]``."""

    l: float
    theta: float

    def __post_init__(self):
        if not self.l > 0:
            raise ValueError(f"translation length must be positive, got {self.l!r}")
        if not -math.pi < self.theta <= math.pi:
            raise ValueError(f"twist {self.theta!r} outside (-pi, pi]")

    @property
    def pitch(self) -> float:
        """``|theta| / l``; see :attr:`twist_sign` for the handedness."""
        return abs(self.theta) / self.l

    @property
    def twist_sign(self) -> int:
        return (self.theta > 0) - (self.theta < 0)

    def __complex__(self) -> complex:
        return complex(self.l, self.theta)


def complex_length(m: MoebiusMap, tol: float | None = None) -> ComplexLength:
    """Complex length from ``tr = 2 cosh((l + i theta)/2)``.

    The trace of the normalized representative has ``Re >= 0``, so the
    principal inverse cosh has imaginary part in ``[-pi/2, pi/2]`` and the
    twist lands in ``[-pi, pi]``; ``-pi`` is folded to ``pi``.
    """
    kind = classify(m, tol)
    if kind != "loxodromic":
        raise ClassificationError(f"no complex length: map is {kind}")
    m = normalize(m)
    half = cmath.acosh(0.5 * m.trace)
    l, theta = 2.0 * half.real, 2.0 * half.imag
    if theta <= -math.pi:
        theta += 2.0 * math.pi
    if theta > math.pi:
        theta -= 2.0 * math.pi
    return ComplexLength(l, theta)


# ---------------------------------------------------------------------------
# action on H^3

def poincare_extension(m: MoebiusMap, p: UpperHalfSpacePoint) -> UpperHalfSpacePoint:
    a, b, c, d = m.a, m.b, m.c, m.d
    z, t = complex(p.z), float(p.t)
    czd = c * z + d
    den = abs(czd) ** 2 + abs(c) ** 2 * t * t
    det = m.det
    # the height picks up |det| for an unnormalized matrix
    height = abs(det) * t / den
    w = ((a * z + b) * czd.conjugate() + a * c.conjugate() * t * t) / den
    if not height > 0 or not math.isfinite(height):
        raise ConsistencyError(f"extension produced height {height!r}")
    return UpperHalfSpacePoint(w, height)


def distance_uhs(p: UpperHalfSpacePoint, q: UpperHalfSpacePoint) -> float:
    """Hyperbolic distance, via ``sinh(d/2) = chord / (2 sqrt(t_p t_q))``."""
    chord = math.hypot(abs(complex(p.z) - complex(q.z)), p.t - q.t)
    return 2.0 * math.asinh(chord / (2.0 * math.sqrt(p.t * q.t)))


def distance_hyperboloid(x, y) -> np.ndarray:
    """Distance between hyperboloid points (arrays, last axis of length 4)."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    diff = x - y
    chord2 = np.maximum(lorentz_inner(diff, diff), 0.0)
    return 2.0 * np.arcsinh(0.5 * np.sqrt(chord2))


def uhs_to_hyperboloid(p: UpperHalfSpacePoint) -> HyperboloidPoint:
    z, t = complex(p.z), float(p.t)
    r2 = abs(z) ** 2 + t * t
    return HyperboloidPoint((r2 + 1.0) / (2.0 * t), (r2 - 1.0) / (2.0 * t), z.real / t, z.imag / t)


def hyperboloid_to_uhs(x: HyperboloidPoint) -> UpperHalfSpacePoint:
    t = 1.0 / (x.x1 - x.x2)
    return UpperHalfSpacePoint(complex(x.x3, x.x4) * t, t)


def uhs_to_hyperboloid_array(z, t) -> np.ndarray:
    z = np.asarray(z, dtype=complex)
    t = np.asarray(t, dtype=float)
    r2 = np.abs(z) ** 2 + t * t
    return np.stack([(r2 + 1) / (2 * t), (r2 - 1) / (2 * t), z.real / t, z.imag / t], axis=-1)


def _hermitian(x: np.ndarray) -> np.ndarray:
    return np.array([[x[0] + x[1], x[2] + 1j * x[3]],
                     [x[2] - 1j * x[3], x[0] - x[1]]])


def _from_hermitian(h: np.ndarray) -> np.ndarray:
    return np.array([0.5 * (h[0, 0] + h[1, 1]).real, 0.5 * (h[0, 0] - h[1, 1]).real,
                     h[0, 1].real, h[0, 1].imag])


def moebius_to_lorentz(m: MoebiusMap) -> np.ndarray:
    """4x4 matrix of ``m`` acting linearly on the hyperboloid model."""
    A = normalize(m).matrix()
    cols = []
    for e in np.eye(4):
        cols.append(_from_hermitian(A @ _hermitian(e) @ A.conj().T))
    return np.column_stack(cols)


# ---------------------------------------------------------------------------
# geodesics

@dataclass(frozen=True)
class GeodesicLine:
    """Oriented geodesic from ``start`` to ``end`` on the sphere at infinity.

    ``point(s)`` is a unit-speed parametrization with ``s -> -inf`` at
    ``start``; it is the image of ``e^s j`` under :meth:`standardizer`.
    """

    start: BoundaryPoint
    end: BoundaryPoint

    def __post_init__(self):
        if _is_inf(self.start) and _is_inf(self.end):
            raise ValueError("endpoints must be distinct")
        if not _is_inf(self.start) and not _is_inf(self.end) and self.start == self.end:
            raise ValueError("endpoints must be distinct")

    def standardizer(self) -> MoebiusMap:
        """Map sending 0 to ``start`` and infinity to ``end``."""
        p, q = self.start, self.end
        if _is_inf(q):
            return MoebiusMap(1, p, 0, 1)
        if _is_inf(p):
            return normalize(MoebiusMap(q, 1, 1, 0))
        return normalize(MoebiusMap(q, p, 1, 1))

    def point(self, s: float) -> UpperHalfSpacePoint:
        return poincare_extension(self.standardizer(), UpperHalfSpacePoint(0j, math.exp(s)))

    def contains(self, other: "GeodesicLine", tol: float = 1e-9) -> bool:
        """Same unoriented line."""
        def close(u, w):
            if _is_inf(u) or _is_inf(w):
                return _is_inf(u) and _is_inf(w)
            return abs(u - w) <= tol * max(1.0, abs(u))
        return ((close(self.start, other.start) and close(self.end, other.end))
                or (close(self.start, other.end) and close(self.end, other.start)))


T_AXIS = GeodesicLine(0j, INFINITY)


def axis(m: MoebiusMap, tol: float | None = None) -> GeodesicLine:
    """Invariant geodesic of a loxodromic map, oriented in its direction of travel."""
    kind = classify(m, tol)
    if kind != "loxodromic":
        raise ClassificationError(f"no axis: map is {kind}")
    m = normalize(m)
    a, b, c, d = m.a, m.b, m.c, m.d
    if c == 0:
        # z -> (a/d) z + b/d; infinity attracts iff |a/d| > 1
        finite = b / (d - a)
        if abs(a / d) > 1:
            return GeodesicLine(finite, INFINITY)
        return GeodesicLine(INFINITY, finite)
    # fixed points solve c z^2 + (d - a) z - b = 0
    disc = cmath.sqrt((d - a) ** 2 + 4 * b * c)
    roots = [((a - d) + disc) / (2 * c), ((a - d) - disc) / (2 * c)]
    # multiplier at a fixed point z0 is 1/(c z0 + d)^2
    mult = [1 / (c * z0 + d) ** 2 for z0 in roots]
    if abs(mult[0]) < abs(mult[1]):
        return GeodesicLine(roots[1], roots[0])
    return GeodesicLine(roots[0], roots[1])


def dist_to_axis(p: UpperHalfSpacePoint, g: GeodesicLine) -> float:
    q = poincare_extension(g.standardizer().inverse(), p)
    return math.asinh(abs(q.z) / q.t)


def dist_to_axis_hyperboloid(x, g: GeodesicLine = T_AXIS) -> np.ndarray:
    """Vectorized distance from hyperboloid points to a geodesic."""
    x = np.asarray(x, dtype=float)
    if g is not T_AXIS:
        L = moebius_to_lorentz(g.standardizer().inverse())
        x = x @ L.T
    return np.arcsinh(np.hypot(x[..., 2], x[..., 3]))


def radial_gradient(x, g: GeodesicLine = T_AXIS) -> np.ndarray:
    """Unit gradient of the distance to ``g`` at hyperboloid points ``x``.

    Undefined on the geodesic itself; points there get ``nan``.
    """
    x = np.asarray(x, dtype=float)
    L = None
    if g is not T_AXIS:
        L = moebius_to_lorentz(g.standardizer().inverse())
        x = x @ L.T
    along = x.copy()
    along[..., 2:] = 0.0
    across = x.copy()
    across[..., :2] = 0.0
    sh = np.hypot(x[..., 2], x[..., 3])[..., None]
    ch = np.sqrt(1.0 + sh * sh)
    with np.errstate(divide="ignore", invalid="ignore"):
        grad = along * (sh / ch) + across * (ch / sh)
    if L is not None:
        grad = grad @ np.linalg.inv(L).T
    return grad
