"""Area comparison between the helicoidal annulus and the tube boundary.

The twisted annulus inside the maximal tube beats the boundary torus in
area once the pitch ``theta / l`` is large enough.  This module locates that
crossover and evaluates the two strict inequalities that drive the
minimal-surface argument, with ``c(theta) = min(theta, pi)``:

* growth:  ``2 (cosh r - cosh(r/2)) > cosh r``
* torus:   ``2 pi l sinh r < c(theta)``

Both reports carry signed margins so sweeps can be plotted directly.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, asdict

import numpy as np

from .config import DEFAULTS
from .helicoid import annulus_area
from .numerics import BracketError, bisect, bisect_predicate
from .tube import DomainError, boundary_torus_area, tube_radius

# cosh r > 2 cosh(r/2)  <=>  cosh(r/2) > (1 + sqrt 3)/2
GROWTH_THRESHOLD = 2.0 * math.acosh(0.5 * (1.0 + math.sqrt(3.0)))


def area_gap(l: float, theta: float) -> float:
    """Annulus area minus boundary torus area inside the maximal tube."""
    if not theta > 0:
        raise ValueError(f"twist must be positive, got {theta!r}")
    r = tube_radius(l)
    return annulus_area(l, theta, r) - boundary_torus_area(l)


@dataclass(frozen=True)
class Crossover:
    l: float
    theta_star: float
    pitch_star: float
    bracket: tuple[float, float]
    doublings: int


def crossover(l: float, tol: float | None = None) -> Crossover:
    """Zero ``theta*`` of ``theta -> area_gap(l, theta)`` by bracketed bisection.

    The gap is negative as ``theta -> 0`` and increases without bound, so the
    upper end of the bracket is doubled until the gap turns positive.
    """
    tol = DEFAULTS.bisect_abs if tol is None else tol
    r = tube_radius(l)
    torus = boundary_torus_area(l)
    lo = DEFAULTS.theta_floor
    if r == 0.0:
        raise BracketError(f"tube radius is zero at l={l!r}; no annulus to compare")

    def gap(theta):
        return annulus_area(l, theta, r) - torus

    if gap(lo) >= 0:
        raise BracketError(f"gap already nonnegative at theta={lo!r} (l={l!r})")
    hi, scans = 1.0, []
    for k in range(DEFAULTS.bracket_doublings + 1):
        g = gap(hi)
        scans.append((hi, g))
        if g > 0:
            break
        hi *= 2.0
    else:
        raise BracketError(f"no sign change for l={l!r}; scanned {scans[-5:]}")
    theta = bisect(gap, lo, hi, xtol=tol)
    return Crossover(l, theta, theta / l, (lo, hi), k)


def crossover_pitch(l: float, tol: float | None = None) -> float:
    return crossover(l, tol).pitch_star


def gap_curve(l: float, thetas) -> np.ndarray:
    """Rows ``(l, theta, annulus_area, torus_area, gap)`` for each ``theta``."""
    r = tube_radius(l)
    torus = boundary_torus_area(l)
    rows = []
    for theta in thetas:
        ann = annulus_area(l, float(theta), r)
        rows.append((l, float(theta), ann, torus, ann - torus))
    return np.array(rows)


@dataclass(frozen=True)
class ComparisonReport:
    l: float
    theta: float
    r_max: float
    annulus_area: float
    torus_area: float
    gap: float
    c_theta: float
    ineq_growth: bool
    ineq_torus: bool
    holds: bool
    growth_margin: float
    torus_margin: float

    def as_dict(self) -> dict:
        return asdict(self)


def main_inequalities(l: float, theta: float) -> ComparisonReport:
    r = tube_radius(l)
    c_theta = min(theta, math.pi)
    ch, sh = math.cosh(r), math.sinh(r)
    growth_margin = 2.0 * (ch - math.cosh(0.5 * r)) - ch
    torus_margin = c_theta - 2.0 * math.pi * l * sh
    ann = annulus_area(l, theta, r) if theta > 0 and r > 0 else 2.0 * l * sh
    torus = boundary_torus_area(l)
    growth, torus_ok = growth_margin > 0, torus_margin > 0
    return ComparisonReport(
        l=l, theta=theta, r_max=r, annulus_area=ann, torus_area=torus, gap=ann - torus,
        c_theta=c_theta, ineq_growth=growth, ineq_torus=torus_ok, holds=growth and torus_ok,
        growth_margin=growth_margin, torus_margin=torus_margin,
    )


def min_twist_for_theorem(l: float, tol: float = 1e-14) -> float:
    """Smallest twist for which both inequalities hold (as an infimum).

    Raises
    ------
    DomainError
        If the tube is too thin for the growth inequality, or if the torus
        inequality would need ``c(theta) > pi``.
    """
    r = tube_radius(l)
    if not r > GROWTH_THRESHOLD:
        raise DomainError(f"tube radius too small: r_max={r:.6g} <= {GROWTH_THRESHOLD:.6g}")
    if 2.0 * math.pi * l * math.sinh(r) >= math.pi:
        raise DomainError("inequality chain cannot hold: needs c(theta) > pi")
    return bisect_predicate(lambda th: main_inequalities(l, th).holds, 0.0, math.pi, xtol=tol)


def disk_obstruction(l: float, r: float) -> bool:
    """True when ``2 pi (cosh r - 1) > pi l sinh r cosh r``.

    The left side bounds the area of an intrinsic disk of radius ``r`` and
    the right side the area of a semi-torus, so a least area disk through
    the core is then impossible.
    """
    if not (l > 0 and r > 0):
        raise ValueError(f"l and r must be positive, got l={l!r}, r={r!r}")
    return 4.0 * math.pi * math.sinh(0.5 * r) ** 2 > math.pi * l * math.sinh(r) * math.cosh(r)


_COUNT_LIMIT = 2**63 - 1


def separation_count(n: int) -> int:
    """Number of ways ``n`` unlinked geodesics can be separated: ``2**n``.

    Computed as the binomial sum and checked against the power.  Counts that
    do not fit a signed 64-bit integer raise ``OverflowError`` so outputs
    stay portable.
    """
    if not isinstance(n, (int, np.integer)) or n < 0:
        raise ValueError(f"n must be a nonnegative integer, got {n!r}")
    n = int(n)
    total = sum(math.comb(n, k) for k in range(n + 1))
    if total != 2**n:
        raise ArithmeticError(f"binomial sum {total} != 2**{n}")
    if total > _COUNT_LIMIT:
        raise OverflowError(f"2**{n} exceeds 64-bit range")
    return total
