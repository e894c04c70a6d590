"""Helicoids of pitch ``a`` in the hyperboloid model.

The helicoid is parametrized by signed distance ``u`` from the axis
``(cosh v, sinh v, 0, 0)`` and the translation parameter ``v``::

    x(u, v) = (cosh u cosh v, cosh u sinh v, sinh u cos(a v), sinh u sin(a v))

Its induced metric is ``du^2 + G(u) dv^2`` with
``G = cosh^2 u + a^2 sinh^2 u``.  The screw motion with complex length
``l + i theta`` maps the pitch ``theta / l`` helicoid to itself, shifting
``v`` by ``l``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .config import DEFAULTS
from .isometry import lorentz_inner
from .numerics import adaptive_simpson


def helicoid_point(a: float, u, v) -> np.ndarray:
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    ch, sh = np.cosh(u), np.sinh(u)
    return np.stack([ch * np.cosh(v), ch * np.sinh(v),
                     sh * np.cos(a * v), sh * np.sin(a * v)], axis=-1)


def metric_G(a: float, u):
    u = np.asarray(u, dtype=float)
    return np.cosh(u) ** 2 + a * a * np.sinh(u) ** 2


def first_fundamental_form(a: float, u: float) -> tuple[float, float, float]:
    return 1.0, 0.0, float(metric_G(a, u))


def helicoid_derivatives(a: float, u: float, v: float) -> dict[str, np.ndarray]:
    """Analytic first and second partial derivatives of :func:`helicoid_point`."""
    ch, sh = math.cosh(u), math.sinh(u)
    chv, shv = math.cosh(v), math.sinh(v)
    c, s = math.cos(a * v), math.sin(a * v)
    return {
        "x": np.array([ch * chv, ch * shv, sh * c, sh * s]),
        "xu": np.array([sh * chv, sh * shv, ch * c, ch * s]),
        "xv": np.array([ch * shv, ch * chv, -a * sh * s, a * sh * c]),
        "xuu": np.array([ch * chv, ch * shv, sh * c, sh * s]),
        "xuv": np.array([sh * shv, sh * chv, -a * ch * s, a * ch * c]),
        "xvv": np.array([ch * chv, ch * shv, -a * a * sh * c, -a * a * sh * s]),
    }


def helicoid_frame(a: float, u: float, v: float) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Tangents ``x_u``, ``x_v`` and the unit normal ``N``.

    ``N = (cosh u * (0, 0, -sin av, cos av) - a sinh u * (sinh v, cosh v, 0, 0)) / sqrt(G)``.
    The sign is chosen so that on the axis ``N`` is the rotation of ``x_u``
    by +90 degrees in the ``(x3, x4)`` plane.
    """
    d = helicoid_derivatives(a, u, v)
    ch, sh = math.cosh(u), math.sinh(u)
    n = (ch * np.array([0.0, 0.0, -math.sin(a * v), math.cos(a * v)])
         - a * sh * np.array([math.sinh(v), math.cosh(v), 0.0, 0.0]))
    norm2 = lorentz_inner(n, n)
    if not norm2 > 0:
        raise ArithmeticError(f"degenerate frame at (a, u, v)=({a}, {u}, {v})")
    return d["xu"], d["xv"], n / math.sqrt(norm2)


def second_fundamental_form(a: float, u: float, v: float) -> tuple[float, float, float]:
    d = helicoid_derivatives(a, u, v)
    _, _, N = helicoid_frame(a, u, v)
    return (float(lorentz_inner(d["xuu"], N)), float(lorentz_inner(d["xuv"], N)),
            float(lorentz_inner(d["xvv"], N)))


def mean_curvature(a: float, u: float, v: float) -> float:
    e, f, g = second_fundamental_form(a, u, v)
    E, F, G = first_fundamental_form(a, u)
    return (e * G - 2.0 * f * F + g * E) / (2.0 * (E * G - F * F))


def gauss_curvature(a: float, u):
    """``K = -(sqrt G)'' / sqrt G`` for the metric ``du^2 + G dv^2``."""
    u = np.asarray(u, dtype=float)
    G = metric_G(a, u)
    dG = (1.0 + a * a) * np.sinh(2.0 * u)
    ddG = 2.0 * (1.0 + a * a) * np.cosh(2.0 * u)
    return -(2.0 * G * ddG - dG * dG) / (4.0 * G * G)


def squared_second_form(a: float, u):
    """``|A|^2 = -2 (K + 1)``, which simplifies to ``2 a^2 / G^2``."""
    G = metric_G(a, u)
    return 2.0 * a * a / (G * G)


def ruling_residual(a: float, u: float, v: float, method: str = "analytic",
                    h: float = 1e-4) -> float:
    """Euclidean norm of ``x_uu - x`` along the ``u``-curve through ``(u, v)``.

    The hyperboloid geodesic equation for a unit-speed curve is ``x'' = x``,
    so a zero residual means the ``u``-curves are geodesics.
    """
    x = helicoid_point(a, u, v)
    if method == "analytic":
        xuu = helicoid_derivatives(a, u, v)["xuu"]
    elif method == "fd":
        xuu = (helicoid_point(a, u + h, v) - 2.0 * x + helicoid_point(a, u - h, v)) / (h * h)
    else:
        raise ValueError(f"unknown method {method!r}")
    return float(np.linalg.norm(xuu - x))


# ---------------------------------------------------------------------------
# quotient annulus

def annulus_area(l: float, theta: float, r: float, rel_tol: float | None = None) -> float:
    """``2 * int_0^r sqrt(l^2 cosh^2 u + theta^2 sinh^2 u) du``."""
    if not r > 0:
        raise ValueError(f"radius must be positive, got {r!r}")
    l2, t2 = l * l, theta * theta

    def integrand(u):
        return math.sqrt(l2 * math.cosh(u) ** 2 + t2 * math.sinh(u) ** 2)

    return 2.0 * adaptive_simpson(integrand, 0.0, r, rel_tol=rel_tol)


def longitude_length(l: float, theta: float, s: float) -> float:
    """Length of the two longitudes cut from the annulus at distance ``s``."""
    if s < 0:
        raise ValueError(f"distance must be nonnegative, got {s!r}")
    return 2.0 * math.hypot(l * math.cosh(s), theta * math.sinh(s))


# ---------------------------------------------------------------------------
# second variation

@dataclass(frozen=True)
class HelicoidPatch:
    a: float
    u_min: float
    u_max: float
    v_min: float
    v_max: float

    def __post_init__(self):
        if not self.u_min < self.u_max or not self.v_min < self.v_max:
            raise ValueError(f"empty patch {self}")

    @classmethod
    def symmetric(cls, a: float, u_max: float, periods: float = 1.0) -> "HelicoidPatch":
        """``u`` in ``[-u_max, u_max]``, ``v`` over ``periods`` twist periods ``2 pi / a``.

        For ``a = 0`` the twist period is infinite; a unit ``v`` range per
        period is used instead.
        """
        span = 2.0 * math.pi / a if a > 0 else 1.0
        return cls(a, -u_max, u_max, 0.0, periods * span)


@dataclass(frozen=True)
class JacobiEstimate:
    a: float
    patch: HelicoidPatch
    grid: tuple[int, int]
    lambda_min: float
    stable_sign: str
    iterations: int = field(default=0, compare=False)


class ConvergenceError(ArithmeticError):
    pass


def jacobi_operator(a: float, patch: HelicoidPatch, grid: tuple[int, int]):
    """Dirichlet discretization of ``-Delta - (|A|^2 - 2)`` on the patch.

    Returns ``(A, w)`` with ``A`` symmetric and ``w`` the diagonal area
    weights ``sqrt(G)``; the eigenproblem is ``A f = lambda diag(w) f``.
    ``grid = (m, n)`` counts interior nodes in ``u`` and ``v``.
    """
    m, n = grid
    if m < 8 or n < 8:
        raise ValueError(f"grid must be at least (8, 8), got {grid}")
    hu = (patch.u_max - patch.u_min) / (m + 1)
    hv = (patch.v_max - patch.v_min) / (n + 1)
    u = patch.u_min + hu * np.arange(1, m + 1)
    u_half = patch.u_min + hu * (np.arange(0, m + 1) + 0.5)
    sg = np.sqrt(metric_G(a, u))
    sg_half = np.sqrt(metric_G(a, u_half))
    potential = 2.0 - squared_second_form(a, u)

    # u-direction: -(d/du) sqrt(G) (d/du)
    main_u = (sg_half[:-1] + sg_half[1:]) / hu**2
    off_u = -sg_half[1:-1] / hu**2
    Au = sp.diags([off_u, main_u, off_u], [-1, 0, 1])
    # v-direction: -(1/sqrt(G)) d^2/dv^2
    Tv = sp.diags([-np.ones(n - 1), 2.0 * np.ones(n), -np.ones(n - 1)], [-1, 0, 1]) / hv**2
    A = (sp.kron(Au, sp.identity(n))
         + sp.kron(sp.diags(1.0 / sg), Tv)
         + sp.kron(sp.diags(sg * potential), sp.identity(n)))
    w = np.repeat(sg, n)
    return A.tocsc(), w


def jacobi_lambda_min(a: float, patch: HelicoidPatch, grid: tuple[int, int] = (32, 32),
                      tol: float | None = None, rel: float | None = None,
                      max_iter: int | None = None) -> JacobiEstimate:
    """Smallest Dirichlet eigenvalue of the stability operator by inverse iteration.

    The shift is a Gershgorin lower bound on the spectrum, so the eigenvalue
    nearest the shift is the smallest one.  Each step refreshes the shift
    toward the current Rayleigh quotient while staying below it, which keeps
    the iteration aimed at the bottom of the spectrum.
    """
    tol = DEFAULTS.jacobi_sign if tol is None else tol
    rel = DEFAULTS.jacobi_rel if rel is None else rel
    max_iter = DEFAULTS.jacobi_max_iter if max_iter is None else max_iter
    A, w = jacobi_operator(a, patch, grid)
    s = 1.0 / np.sqrt(w)
    B = (sp.diags(s) @ A @ sp.diags(s)).tocsc()

    diag = B.diagonal()
    radius = np.asarray(abs(B).sum(axis=1)).ravel() - np.abs(diag)
    shift = float(np.min(diag - radius)) - 1.0

    solve = spla.splu((B - shift * sp.identity(B.shape[0])).tocsc()).solve
    x = np.ones(B.shape[0]) / math.sqrt(B.shape[0])
    lam = float(x @ (B @ x))
    for it in range(1, max_iter + 1):
        y = solve(x)
        x = y / np.linalg.norm(y)
        new = float(x @ (B @ x))
        resid = np.linalg.norm(B @ x - new * x)
        if abs(new - lam) <= rel * max(1.0, abs(new)) and resid <= 1e-7 * max(1.0, abs(new)):
            lam = new
            break
        lam = new
        # move the shift up once the Rayleigh quotient has settled
        if it % 25 == 0 and new - shift > 1e-3 * max(1.0, abs(new)):
            shift = new - 0.5 * (new - shift)
            solve = spla.splu((B - shift * sp.identity(B.shape[0])).tocsc()).solve
    else:
        raise ConvergenceError(
            f"inverse iteration did not converge in {max_iter} steps (last lambda {lam!r})")

    if lam > tol:
        sign = "positive"
    elif lam < -tol:
        sign = "negative"
    else:
        sign = "inconclusive"
    return JacobiEstimate(a, patch, tuple(grid), lam, sign, iterations=it)


def default_patch_ladder(a: float) -> list[HelicoidPatch]:
    """Nested patches of growing size: ``u_max`` in 0.5..3, one to four twist periods."""
    ladder = []
    for u_max in (0.5, 1.0, 2.0, 3.0):
        for periods in (1.0, 2.0, 4.0):
            ladder.append(HelicoidPatch.symmetric(a, u_max, periods))
    return ladder


def patch_grid(patch: HelicoidPatch, per_unit_u: int, per_period: int) -> tuple[int, int]:
    """Interior node counts giving spacing ``1/per_unit_u`` in ``u`` and
    ``period/per_period`` in ``v``.

    Patches from :meth:`HelicoidPatch.symmetric` sized by whole multiples of
    these spacings share grid nodes, so the discrete Dirichlet problems nest
    and the smallest eigenvalue cannot increase along a nested ladder.
    """
    a = patch.a
    period = 2.0 * math.pi / a if a > 0 else 1.0
    m = int(round((patch.u_max - patch.u_min) * per_unit_u)) - 1
    n = int(round((patch.v_max - patch.v_min) / period * per_period)) - 1
    return max(m, 8), max(n, 8)


@dataclass(frozen=True)
class StabilitySweep:
    a: float
    estimates: tuple[JacobiEstimate, ...]
    refined: tuple[JacobiEstimate, ...]
    lambda_min: float
    sign: str
    regime: str


def stability_sweep(a: float, ladder: list[HelicoidPatch] | None = None,
                    resolution: tuple[int, int] = (16, 16), refine: int = 1,
                    tol: float | None = None) -> StabilitySweep:
    """Run :func:`jacobi_lambda_min` over a patch ladder.

    ``resolution`` is (nodes per unit ``u``, nodes per twist period).  The
    reported eigenvalue is the smallest over the ladder, ties going to the
    earlier patch.  Its sign counts only if that patch keeps the sign after
    each of ``refine`` resolution doublings; otherwise the sign is
    ``inconclusive``.  ``regime`` applies the certification policy: pitches
    strictly between the configured stable and unstable limits are never
    certified.
    """
    ladder = default_patch_ladder(a) if ladder is None else ladder
    per_u, per_v = resolution
    estimates = tuple(jacobi_lambda_min(a, p, patch_grid(p, per_u, per_v), tol=tol)
                      for p in ladder)
    best = min(range(len(estimates)), key=lambda i: (estimates[i].lambda_min, i))
    refined = []
    for k in range(1, refine + 1):
        grid = patch_grid(ladder[best], per_u * 2**k, per_v * 2**k)
        refined.append(jacobi_lambda_min(a, ladder[best], grid, tol=tol))
    signs = {estimates[best].stable_sign, *(r.stable_sign for r in refined)}
    sign = signs.pop() if len(signs) == 1 else "inconclusive"
    if a <= DEFAULTS.mori_stable_max:
        regime = "stable" if sign == "positive" else "inconclusive"
    elif a >= DEFAULTS.mori_unstable_min:
        regime = "unstable" if sign == "negative" else "inconclusive"
    else:
        regime = "inconclusive"
    return StabilitySweep(a, estimates, tuple(refined), estimates[best].lambda_min, sign, regime)
