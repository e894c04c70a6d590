"""Triangulated surfaces on the hyperboloid.

Faces are treated as geodesic triangles, whose area is the angle defect
``pi - (alpha + beta + gamma)``.  Angles come from the half-angle form of
the hyperbolic law of cosines,
``tan(alpha/2)^2 = sinh(s-b) sinh(s-c) / (sinh s sinh(s-a))``, which stays
accurate for small and skinny triangles where the plain cosine law cancels.

Quotient annuli store one fundamental domain.  The ``v = 0`` and ``v = l``
seam rows are separate vertices paired in ``identification`` and related by
the 4x4 Lorentz matrix ``deck``.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.integrate import trapezoid

from .config import DEFAULTS
from .helicoid import helicoid_point
from .isometry import (GeodesicLine, MoebiusMap, T_AXIS, dist_to_axis_hyperboloid,
                       lorentz_inner, moebius_to_lorentz, radial_gradient)
from .serialize import dumps


class MeshError(ValueError):
    pass


def reproject(x: np.ndarray) -> np.ndarray:
    """Radial projection ``x / sqrt(-<x,x>)`` back onto the hyperboloid."""
    n2 = -lorentz_inner(x, x)
    if np.any(n2 <= 0):
        raise MeshError("cannot reproject a non-timelike vector")
    return x / np.sqrt(n2)[..., None]


@dataclass
class TriMesh:
    vertices: np.ndarray
    faces: np.ndarray
    fixed: np.ndarray
    identification: Optional[np.ndarray] = None
    deck: Optional[np.ndarray] = field(default=None, repr=False)

    def __post_init__(self):
        self.vertices = np.asarray(self.vertices, dtype=float).reshape(-1, 4)
        self.faces = np.asarray(self.faces, dtype=np.int64).reshape(-1, 3)
        self.fixed = np.asarray(self.fixed, dtype=bool).reshape(-1)
        if self.identification is not None:
            self.identification = np.asarray(self.identification, dtype=np.int64).reshape(-1, 2)
        if self.deck is not None:
            self.deck = np.asarray(self.deck, dtype=float).reshape(4, 4)
        self.validate()

    def validate(self) -> None:
        nv = len(self.vertices)
        if len(self.fixed) != nv:
            raise MeshError(f"fixed has {len(self.fixed)} flags for {nv} vertices")
        if self.faces.size and (self.faces.min() < 0 or self.faces.max() >= nv):
            raise MeshError("face references a missing vertex")
        f = self.faces
        bad = (f[:, 0] == f[:, 1]) | (f[:, 1] == f[:, 2]) | (f[:, 0] == f[:, 2])
        if np.any(bad):
            raise MeshError(f"face {int(np.flatnonzero(bad)[0])} repeats a vertex")
        x = self.vertices
        off = np.abs(lorentz_inner(x, x) + 1.0)
        if np.any(off > DEFAULTS.hyperboloid) or np.any(x[:, 0] < 1.0 - DEFAULTS.hyperboloid):
            raise MeshError(f"vertex {int(np.argmax(off))} is off the hyperboloid")
        if self.identification is not None and self.deck is not None:
            i, j = self.identification.T
            err = np.abs(x[i] @ self.deck.T - x[j]).max(initial=0.0)
            if err > DEFAULTS.seam:
                raise MeshError(f"seam pairs disagree with the deck map by {err:.3e}")

    def copy(self) -> "TriMesh":
        return TriMesh(self.vertices.copy(), self.faces.copy(), self.fixed.copy(),
                       None if self.identification is None else self.identification.copy(),
                       None if self.deck is None else self.deck.copy())

    def transformed(self, L: np.ndarray) -> "TriMesh":
        """Image under a Lorentz matrix; the deck map is conjugated along."""
        deck = None if self.deck is None else L @ self.deck @ np.linalg.inv(L)
        return TriMesh(self.vertices @ np.asarray(L).T, self.faces.copy(), self.fixed.copy(),
                       None if self.identification is None else self.identification.copy(), deck)


# ---------------------------------------------------------------------------
# builders

def _grid_faces(m: int, n: int) -> np.ndarray:
    i, j = np.meshgrid(np.arange(m - 1), np.arange(n - 1), indexing="ij")
    p00 = (i * n + j).ravel()
    p01, p10, p11 = p00 + 1, p00 + n, p00 + n + 1
    return np.concatenate([np.stack([p00, p10, p11], 1), np.stack([p00, p11, p01], 1)])


def build_helicoid_annulus_mesh(l: float, theta: float, r: float, m: int, n: int) -> TriMesh:
    """Fundamental domain ``[-r, r] x [0, l]`` of the pitch ``theta / l`` annulus.

    ``m`` samples in ``u`` and ``n`` in ``v``.  The ``u = +-r`` rows are
    fixed; the first and last ``v`` columns are identified by the screw
    motion of complex length ``l + i theta``.
    """
    if m < 4 or n < 4:
        raise MeshError(f"need m, n >= 4, got {m}, {n}")
    if not (l > 0 and r > 0 and math.isfinite(theta)):
        raise MeshError(f"degenerate annulus parameters l={l!r}, theta={theta!r}, r={r!r}")
    a = theta / l
    u = np.linspace(-r, r, m)
    v = np.linspace(0.0, l, n)
    U, V = np.meshgrid(u, v, indexing="ij")
    x = helicoid_point(a, U, V).reshape(-1, 4)
    fixed = np.zeros((m, n), dtype=bool)
    fixed[0, :] = fixed[-1, :] = True
    rows = np.arange(m) * n
    ident = np.stack([rows, rows + n - 1], axis=1)
    deck = moebius_to_lorentz(MoebiusMap.from_complex_length(l, theta))
    return TriMesh(x, _grid_faces(m, n), fixed.ravel(), ident, deck)


def geodesic_disk_frame(tilt: float = 0.0) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Center and orthonormal in-plane directions of a geodesic disk at the base point.

    With ``tilt = 0`` the plane is orthogonal to the axis ``(cosh v, sinh v, 0, 0)``;
    ``tilt`` rotates the ``x3`` direction toward the axis.
    """
    o = np.array([1.0, 0.0, 0.0, 0.0])
    ea = np.array([0.0, math.sin(tilt), math.cos(tilt), 0.0])
    eb = np.array([0.0, 0.0, 0.0, 1.0])
    return o, ea, eb


def build_geodesic_disk_mesh(r: float, m: int, n: int, tilt: float = 0.0) -> TriMesh:
    """Polar triangulation of a totally geodesic disk of radius ``r``.

    ``m`` rings of equal radial spacing around a center vertex, ``n``
    vertices per ring; the outer ring is fixed.
    """
    if m < 4 or n < 4:
        raise MeshError(f"need m, n >= 4, got {m}, {n}")
    if not r > 0:
        raise MeshError(f"radius must be positive, got {r!r}")
    o, ea, eb = geodesic_disk_frame(tilt)
    rho = r * np.arange(1, m + 1) / m
    phi = 2.0 * math.pi * np.arange(n) / n
    R, P = np.meshgrid(rho, phi, indexing="ij")
    dirs = np.cos(P)[..., None] * ea + np.sin(P)[..., None] * eb
    ring = np.cosh(R)[..., None] * o + np.sinh(R)[..., None] * dirs
    x = np.vstack([o, ring.reshape(-1, 4)])

    faces = []
    k = np.arange(n)
    faces.append(np.stack([np.zeros(n, dtype=np.int64), 1 + k, 1 + (k + 1) % n], 1))
    for i in range(m - 1):
        a0, b0 = 1 + i * n, 1 + (i + 1) * n
        p, q = a0 + k, a0 + (k + 1) % n
        pp, qq = b0 + k, b0 + (k + 1) % n
        faces.append(np.stack([p, pp, qq], 1))
        faces.append(np.stack([p, qq, q], 1))
    fixed = np.zeros(len(x), dtype=bool)
    fixed[1 + (m - 1) * n:] = True
    return TriMesh(x, np.vstack(faces), fixed)


def build_meridian_disk_mesh(r: float, m: int, n: int) -> TriMesh:
    return build_geodesic_disk_mesh(r, m, n, tilt=0.0)


# ---------------------------------------------------------------------------
# area

def _side(x, y):
    d = x - y
    return 2.0 * np.arcsinh(0.5 * np.sqrt(np.maximum(lorentz_inner(d, d), 0.0)))


def triangle_areas(A, B, C, rel_tol: float = 1e-9) -> np.ndarray:
    """Areas of geodesic triangles with vertices ``A``, ``B``, ``C`` (arrays of points).

    Raises
    ------
    MeshError
        Naming the first face whose side lengths violate the triangle
        inequality beyond ``rel_tol``.
    """
    a, b, c = _side(B, C), _side(C, A), _side(A, B)
    s = 0.5 * (a + b + c)
    sa, sb, sc = s - a, s - b, s - c
    worst = np.minimum(np.minimum(sa, sb), sc)
    bad = worst < -rel_tol * np.maximum(s, 1e-300)
    if np.any(bad):
        k = int(np.flatnonzero(np.atleast_1d(bad))[0])
        raise MeshError(f"degenerate triangle at face {k}: triangle inequality violated")
    sa, sb, sc = np.maximum(sa, 0.0), np.maximum(sb, 0.0), np.maximum(sc, 0.0)
    sh, sha, shb, shc = np.sinh(s), np.sinh(sa), np.sinh(sb), np.sinh(sc)
    alpha = 2.0 * np.arctan2(np.sqrt(shb * shc), np.sqrt(sh * sha))
    beta = 2.0 * np.arctan2(np.sqrt(sha * shc), np.sqrt(sh * shb))
    gamma = 2.0 * np.arctan2(np.sqrt(sha * shb), np.sqrt(sh * shc))
    area = math.pi - (alpha + beta + gamma)
    # with all sides zero every arctan2 is 0 and the defect would read pi
    return np.where(s > 0, np.maximum(area, 0.0), 0.0)


def face_areas(mesh: TriMesh, vertices: np.ndarray | None = None) -> np.ndarray:
    x = mesh.vertices if vertices is None else vertices
    f = mesh.faces
    return triangle_areas(x[f[:, 0]], x[f[:, 1]], x[f[:, 2]])


def mesh_area(mesh: TriMesh) -> float:
    return float(face_areas(mesh).sum())


# ---------------------------------------------------------------------------
# minimization

def tangent_frames(x: np.ndarray) -> np.ndarray:
    """Lorentz-orthonormal tangent frames, shape ``(N, 3, 4)``.

    Gram-Schmidt on the projections of ``e2, e3, e4`` to the tangent space.
    """
    frames = np.empty(x.shape[:-1] + (3, 4))
    basis = []
    for k in (1, 2, 3):
        e = np.zeros(4)
        e[k] = 1.0
        w = e + lorentz_inner(e, x)[..., None] * x
        for q in basis:
            w = w - lorentz_inner(w, q)[..., None] * q
        w = w / np.sqrt(lorentz_inner(w, w))[..., None]
        basis.append(w)
    for k, w in enumerate(basis):
        frames[..., k, :] = w
    return frames


def area_gradient(mesh: TriMesh, h: float | None = None) -> np.ndarray:
    """Tangent gradient of :func:`mesh_area` at every vertex by central differences.

    Fixed vertices get zero.  Identified seam pairs get the average of the
    two gradients pulled back to the same vertex, so that moving the pair
    together with the deck map is a descent direction for the quotient area.
    """
    h = DEFAULTS.fd_step if h is None else h
    x = mesh.vertices
    f = mesh.faces
    frames = tangent_frames(x)
    grad = np.zeros_like(x)
    corners = [x[f[:, c]] for c in range(3)]
    for k in range(3):
        plus = reproject(x + h * frames[:, k])
        minus = reproject(x - h * frames[:, k])
        comp = np.zeros(len(x))
        for c in range(3):
            cp = list(corners)
            cm = list(corners)
            cp[c] = plus[f[:, c]]
            cm[c] = minus[f[:, c]]
            diff = (triangle_areas(*cp) - triangle_areas(*cm)) / (2.0 * h)
            np.add.at(comp, f[:, c], diff)
        grad += comp[:, None] * frames[:, k]
    if mesh.identification is not None:
        i, j = mesh.identification.T
        if mesh.deck is not None:
            back = grad[j] @ np.linalg.inv(mesh.deck).T
            avg = 0.5 * (grad[i] + back)
            grad[i] = avg
            grad[j] = avg @ mesh.deck.T
    grad[mesh.fixed] = 0.0
    return grad


def _gradient_norm(grad: np.ndarray, mesh: TriMesh) -> float:
    g = grad
    if mesh.identification is not None:
        keep = np.ones(len(g), dtype=bool)
        keep[mesh.identification[:, 1]] = False
        g = g[keep]
    return float(math.sqrt(max(float(lorentz_inner(g, g).sum()), 0.0)))


@dataclass
class MinimizeResult:
    mesh: TriMesh
    areas: list
    grad_norm: float
    steps: int
    converged: bool
    step_size: float


def _apply_step(mesh: TriMesh, grad: np.ndarray, step: float) -> np.ndarray:
    y = reproject(mesh.vertices - step * grad)
    y[mesh.fixed] = mesh.vertices[mesh.fixed]
    if mesh.identification is not None and mesh.deck is not None:
        i, j = mesh.identification.T
        y[j] = reproject(y[i] @ mesh.deck.T)
    return y


def minimize_area(mesh: TriMesh, max_steps: int = 200, step_size: float = 0.1,
                  tol: float = 1e-6, fd_step: float | None = None) -> MinimizeResult:
    """Projected gradient descent on :func:`mesh_area`.

    Each step moves free vertices against the finite-difference gradient and
    reprojects onto the hyperboloid.  A step that increases the area is
    retried at half the size; accepted steps let the size grow back by a
    factor of two, up to ``step_size``.  The input mesh is not modified.
    """
    work = mesh.copy()
    areas = [mesh_area(work)]
    step = step_size
    grad = area_gradient(work, fd_step)
    gnorm = _gradient_norm(grad, work)
    steps = 0
    while steps < max_steps and gnorm >= tol:
        for _ in range(60):
            trial = _apply_step(work, grad, step)
            a = float(face_areas(work, trial).sum())
            if a <= areas[-1]:
                break
            step *= 0.5
        else:
            break
        work.vertices = trial
        areas.append(a)
        steps += 1
        step = min(2.0 * step, step_size)
        grad = area_gradient(work, fd_step)
        gnorm = _gradient_norm(grad, work)
    return MinimizeResult(work, areas, gnorm, steps, gnorm < tol, step)


def perturb(mesh: TriMesh, amplitude: float, seed: int = 0) -> TriMesh:
    """Move free vertices by random tangent vectors of Lorentz length ``<= amplitude``."""
    rng = np.random.default_rng(seed)
    out = mesh.copy()
    frames = tangent_frames(out.vertices)
    coeff = rng.uniform(-1.0, 1.0, size=(len(out.vertices), 3)) * amplitude / math.sqrt(3.0)
    disp = np.einsum("nk,nkd->nd", coeff, frames)
    disp[out.fixed] = 0.0
    out.vertices = _apply_step(out, -disp, 1.0)
    return out


# ---------------------------------------------------------------------------
# level sets of the distance to an axis

def _face_plane_component(faces_xyz, q, g):
    """Length of the projection of ``g`` onto the face plane at ``q``."""
    A, B, C = faces_xyz
    basis = []
    for e in (B - A, C - A):
        w = e + lorentz_inner(e, q)[..., None] * q
        for b in basis:
            w = w - lorentz_inner(w, b)[..., None] * b
        w = w / np.sqrt(np.maximum(lorentz_inner(w, w), 1e-300))[..., None]
        basis.append(w)
    comp = sum(lorentz_inner(g, b) ** 2 for b in basis)
    return np.sqrt(comp)


def _cut(mesh: TriMesh, h: np.ndarray, level: float):
    """Faces crossing ``h = level``, rolled so the lone vertex comes first.

    Returns ``(sel, odd_inside, X0, X1, X2, P1, P2)`` where ``P1`` and ``P2``
    are the crossings on edges ``X0-X1`` and ``X0-X2``.
    """
    f = mesh.faces
    inside = h[f] <= level
    count = inside.sum(axis=1)
    sel = np.flatnonzero((count == 1) | (count == 2))
    ins = inside[sel]
    odd_inside = count[sel] == 1
    odd = np.where(odd_inside[:, None], ins, ~ins)
    k = np.argmax(odd, axis=1)
    order = (k[:, None] + np.arange(3)[None, :]) % 3
    idx = np.take_along_axis(f[sel], order, axis=1)
    X = [mesh.vertices[idx[:, c]] for c in range(3)]
    H = [h[idx[:, c]] for c in range(3)]
    P = []
    for c in (1, 2):
        tau = (level - H[0]) / (H[c] - H[0])
        P.append(reproject((1.0 - tau)[:, None] * X[0] + tau[:, None] * X[c]))
    return sel, odd_inside, X[0], X[1], X[2], P[0], P[1]


def clipped_area(mesh: TriMesh, s: float, axis: GeodesicLine = T_AXIS) -> float:
    """Area of the part of the mesh within distance ``s`` of ``axis``.

    Faces are split along the level set with crossings placed by linear
    interpolation of the vertex distances.
    """
    h = dist_to_axis_hyperboloid(mesh.vertices, axis)
    f = mesh.faces
    full = np.all(h[f] <= s, axis=1)
    total = float(face_areas(mesh)[full].sum())
    sel, odd_inside, X0, X1, X2, P1, P2 = _cut(mesh, h, s)
    if sel.size:
        one = triangle_areas(X0, P1, P2)
        quad = triangle_areas(X1, X2, P2) + triangle_areas(X1, P2, P1)
        total += float(np.where(odd_inside, one, quad).sum())
    return total


class TangencyError(MeshError):
    pass


def slice_length(mesh: TriMesh, level: float, axis: GeodesicLine = T_AXIS,
                 weighted: bool = True, floor: float | None = None,
                 h: np.ndarray | None = None) -> float:
    """Length of ``{dist to axis = level}`` on the mesh, optionally weighted by ``1/cos(alpha)``.

    ``cos(alpha)`` is the length of the component of the unit radial
    gradient tangent to the face, evaluated at the segment midpoint.
    """
    floor = DEFAULTS.cos_alpha_floor if floor is None else floor
    if h is None:
        h = dist_to_axis_hyperboloid(mesh.vertices, axis)
    sel, _, X0, X1, X2, P1, P2 = _cut(mesh, h, level)
    if sel.size == 0:
        return 0.0
    seg = _side(P1, P2)
    if not weighted:
        return float(seg.sum())
    mid = reproject(P1 + P2)
    g = radial_gradient(mid, axis)
    cos_alpha = _face_plane_component((X0, X1, X2), mid, g)
    if np.any(~(cos_alpha >= floor)):
        raise TangencyError(f"slice at distance {level!r} is tangent to the mesh "
                            f"(cos alpha = {float(np.nanmin(cos_alpha)):.3e})")
    return float((seg / cos_alpha).sum())


@dataclass(frozen=True)
class CoareaResult:
    direct: float
    sliced: float
    levels: tuple
    lengths: tuple

    @property
    def rel_diff(self) -> float:
        return abs(self.direct - self.sliced) / abs(self.direct)


def coarea_verify(mesh: TriMesh, axis: GeodesicLine, s: float, n_slices: int = 200) -> CoareaResult:
    """Area within distance ``s`` of ``axis`` two ways: clipped directly, and by slices.

    The sliced value integrates the ``1/cos(alpha)``-weighted level-set
    lengths over ``[0, s]`` with the trapezoidal rule.  The level ``0`` is
    sampled a hair above zero so that a mesh containing the axis contributes
    its one-sided limit.
    """
    if not s > 0:
        raise ValueError(f"s must be positive, got {s!r}")
    h = dist_to_axis_hyperboloid(mesh.vertices, axis)
    levels = np.linspace(0.0, s, n_slices + 1)
    probe = levels.copy()
    probe[0] = 1e-9 * s
    lengths = np.array([slice_length(mesh, float(t), axis, h=h) for t in probe])
    sliced = float(trapezoid(lengths, levels))
    return CoareaResult(clipped_area(mesh, s, axis), sliced, tuple(levels.tolist()),
                        tuple(lengths.tolist()))


def tilted_plane_clipped_area(s: float, tilt: float) -> float:
    """Reference area of the tilted geodesic plane within distance ``s`` of the axis.

    In polar coordinates ``(rho, phi)`` about the base point the distance to
    the axis satisfies ``sinh h = sinh rho * sqrt(cos^2 phi cos^2 tilt + sin^2 phi)``,
    so the region is ``rho <= rho_max(phi)`` and the area is
    ``int_0^{2 pi} (cosh rho_max(phi) - 1) dphi``.
    """
    from .numerics import adaptive_simpson

    sh = math.sinh(s)
    ct2 = math.cos(tilt) ** 2

    def integrand(phi):
        k = math.sqrt(math.cos(phi) ** 2 * ct2 + math.sin(phi) ** 2)
        return math.sqrt(1.0 + (sh / k) ** 2) - 1.0

    # symmetric under phi -> -phi and phi -> pi - phi
    return 4.0 * adaptive_simpson(integrand, 0.0, 0.5 * math.pi)


# ---------------------------------------------------------------------------
# file format

def mesh_to_json(mesh: TriMesh) -> str:
    """``{"vertices", "faces", "fixed", "identification"}`` with 17 significant digits.

    The deck matrix is not part of the format.
    """
    ident = None if mesh.identification is None else mesh.identification.tolist()
    return dumps({
        "vertices": mesh.vertices.tolist(),
        "faces": mesh.faces.tolist(),
        "fixed": [bool(b) for b in mesh.fixed],
        "identification": ident,
    })


def mesh_from_json(text: str, deck: np.ndarray | None = None) -> TriMesh:
    obj = json.loads(text)
    missing = {"vertices", "faces", "fixed"} - obj.keys()
    if missing:
        raise MeshError(f"mesh file lacks {sorted(missing)}")
    return TriMesh(np.array(obj["vertices"], dtype=float).reshape(-1, 4),
                   np.array(obj["faces"], dtype=np.int64).reshape(-1, 3),
                   np.array(obj["fixed"], dtype=bool),
                   obj.get("identification"), deck)


def write_mesh(mesh: TriMesh, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(mesh_to_json(mesh))
        fh.write("\n")


def read_mesh(path, deck: np.ndarray | None = None) -> TriMesh:
    with open(path, encoding="utf-8") as fh:
        return mesh_from_json(fh.read(), deck)
