"""Conformal metric family used to shrinkwrap surfaces around a geodesic.

Inside the ``sigma (1 - t)`` neighborhood of the core the hyperbolic length
element is scaled by ``w = 1 + 2 phi(s / (sigma (1 - t)))`` where ``s`` is the
distance to the core and ``phi`` is a smooth bump: 0 on ``[0, 1/4]``, rising on
``[1/4, 1/3]``, 1 on ``[1/3, 2/3]``, falling on ``[2/3, 3/4]`` and 0 beyond.

The transitions use the flat step ``m(x) / (m(x) + m(1 - x))`` with
``m(x) = exp(-1 / (k x))``; ``k`` is ``transition_sharpness``.  Any ``k > 0``
gives a C-infinity bump with the required profile, and the construction is
symmetric: ``phi(x) == phi(1 - x)``.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass

import numpy as np

from .config import DEFAULTS
from .numerics import BracketError, adaptive_simpson, bisect

RISE = (0.25, 1.0 / 3.0)
FALL = (2.0 / 3.0, 0.75)


@dataclass(frozen=True)
class ShrinkwrapParams:
    sigma: float
    t: float
    transition_sharpness: float = 1.0

    def __post_init__(self):
        if not self.sigma > 0:
            raise ValueError(f"sigma must be positive, got {self.sigma!r}")
        if not 0.0 <= self.t < 1.0:
            raise ValueError(f"t must lie in [0, 1), got {self.t!r}")
        if not self.transition_sharpness > 0:
            raise ValueError("transition_sharpness must be positive")

    @property
    def radius(self) -> float:
        """Support radius ``sigma (1 - t)``."""
        return self.sigma * (1.0 - self.t)


def _flat(x: float, k: float) -> float:
    return math.exp(-1.0 / (k * x)) if x > 0 else 0.0


def _dflat(x: float, k: float) -> float:
    return math.exp(-1.0 / (k * x)) / (k * x * x) if x > 0 else 0.0


def _step(x: float, k: float) -> float:
    if x <= 0:
        return 0.0
    if x >= 1:
        return 1.0
    p, q = _flat(x, k), _flat(1.0 - x, k)
    return p / (p + q)


def _dstep(x: float, k: float) -> float:
    if x <= 0 or x >= 1:
        return 0.0
    p, q = _flat(x, k), _flat(1.0 - x, k)
    dp, dq = _dflat(x, k), _dflat(1.0 - x, k)
    return (dp * q + p * dq) / (p + q) ** 2


def bump(x: float, sharpness: float = 1.0) -> float:
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"bump argument must lie in [0, 1], got {x!r}")
    width = RISE[1] - RISE[0]
    if x <= RISE[0] or x >= FALL[1]:
        return 0.0
    if x < RISE[1]:
        return _step((x - RISE[0]) / width, sharpness)
    if x <= FALL[0]:
        return 1.0
    return _step((FALL[1] - x) / width, sharpness)


def bump_derivative(x: float, sharpness: float = 1.0) -> float:
    width = RISE[1] - RISE[0]
    if RISE[0] < x < RISE[1]:
        return _dstep((x - RISE[0]) / width, sharpness) / width
    if FALL[0] < x < FALL[1]:
        return -_dstep((FALL[1] - x) / width, sharpness) / width
    return 0.0


def conformal_factor(s: float, params: ShrinkwrapParams) -> float:
    rho = params.radius
    if s >= rho:
        return 1.0
    return 1.0 + 2.0 * bump(s / rho, params.transition_sharpness)


def conformal_factor_derivative(s: float, params: ShrinkwrapParams) -> float:
    rho = params.radius
    if s >= rho:
        return 0.0
    return 2.0 * bump_derivative(s / rho, params.transition_sharpness) / rho


def area_domination_check(params: ShrinkwrapParams, s_grid) -> bool:
    """``w(s)^2 >= 1`` on every grid point: g_t areas dominate hyperbolic ones."""
    return all(conformal_factor(float(s), params) ** 2 >= 1.0 for s in s_grid)


def torus_area_derivative(s: float, params: ShrinkwrapParams) -> float:
    """``d/ds [w^2 sinh s cosh s]``, the radial derivative of g_t torus area per unit length."""
    w = conformal_factor(s, params)
    dw = conformal_factor_derivative(s, params)
    return 2.0 * w * dw * math.sinh(s) * math.cosh(s) + w * w * math.cosh(2.0 * s)


@dataclass(frozen=True)
class BarrierTorus:
    radius: float
    window: tuple[float, float]
    scan: tuple[tuple[float, float], ...]


def minimal_torus(params: ShrinkwrapParams, points: int | None = None,
                  xtol: float | None = None) -> BarrierTorus:
    """Smallest critical radius of g_t area of the tubes ``dN_s``.

    The tubes are equidistant tori around the core; under a conformal radial
    factor the one with vanishing mean curvature is a critical point of
    ``w(s)^2 sinh s cosh s``.  The derivative is scanned on ``points`` samples
    over ``(0, sigma (1 - t)]`` and the first sign change is refined by
    bisection.  The root must lie strictly inside ``(2/3, 3/4) sigma (1 - t)``.
    """
    points = DEFAULTS.scan_points if points is None else points
    xtol = DEFAULTS.bisect_abs if xtol is None else xtol
    rho = params.radius
    s = np.linspace(0.0, rho, points + 1)[1:]
    d = np.array([torus_area_derivative(x, params) for x in s])
    window = (2.0 / 3.0 * rho, 0.75 * rho)
    scan = tuple(zip(s.tolist(), d.tolist()))
    idx = np.flatnonzero((d[:-1] > 0) & (d[1:] <= 0))
    if idx.size == 0:
        raise BracketError(f"no barrier torus in window {window}; scanned profile attached",
                           scan)
    i = int(idx[0])
    root = bisect(lambda x: torus_area_derivative(x, params), float(s[i]), float(s[i + 1]),
                  xtol=xtol)
    if not window[0] < root < window[1]:
        raise BracketError(f"no barrier torus in window {window}: root at {root!r}", scan)
    return BarrierTorus(root, window, scan)


def minimal_torus_radius(params: ShrinkwrapParams, l: float | None = None) -> float:
    """Radius of the barrier torus.

    The core length ``l`` scales the torus area uniformly and so does not
    move the critical radius; it is accepted for interface symmetry.
    """
    if l is not None and not l > 0:
        raise ValueError(f"l must be positive, got {l!r}")
    return minimal_torus(params).radius


def disk_cross_section_area(params: ShrinkwrapParams, rel_tol: float | None = None) -> float:
    """g_t area of the geodesic disk of radius ``sigma (1 - t)`` orthogonal to the core."""
    rho = params.radius
    knots = [0.0, RISE[0] * rho, RISE[1] * rho, FALL[0] * rho, FALL[1] * rho, rho]
    total = 0.0
    for lo, hi in zip(knots[:-1], knots[1:]):
        total += adaptive_simpson(lambda s: conformal_factor(s, params) ** 2 * math.sinh(s),
                                  lo, hi, rel_tol=rel_tol)
    return 2.0 * math.pi * total


def disk_ratio_band(sigma: float) -> tuple[float, float]:
    """Two-sided bound for ``disk_cross_section_area / (1 - t)^2`` at fixed ``sigma``.

    From ``1 <= w <= 3`` and ``2 pi (cosh rho - 1)`` between ``pi rho^2`` and
    ``pi rho^2 cosh rho``, with ``rho <= sigma``.
    """
    return math.pi * sigma**2, 9.0 * math.pi * sigma**2 * math.cosh(sigma)


def profile_csv(params: ShrinkwrapParams, points: int = 256) -> str:
    """CSV dump of ``s, w(s), d/ds[w^2 sinh s cosh s]`` over ``[0, 1.25 sigma (1 - t)]``."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["s", "w", "dArea_ds"])
    for s in np.linspace(0.0, 1.25 * params.radius, points):
        s = float(s)
        writer.writerow([f"{s:.17g}", f"{conformal_factor(s, params):.17g}",
                         f"{torus_area_derivative(s, params):.17g}"])
    return buf.getvalue()
