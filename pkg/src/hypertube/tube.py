"""Maximal embedded tubes around short closed geodesics.

For a closed geodesic of real length ``l`` below Meyerhoff's bound
``(sqrt(3)/(4 pi)) * log(sqrt(2) + 1)^2 ~ 0.107`` the tube radius satisfies::

    sinh^2 r_max = (sqrt(1 - 2 kappa) / kappa - 1) / 2,
    kappa(l)     = cosh(sqrt(4 pi l) / 3^(1/4)) - 1.

At the bound itself ``kappa = sqrt(2) - 1`` and the radius collapses to zero.
Areas and volumes use Fermi coordinates about the core, where the volume
element is ``sinh s cosh s ds dphi dt``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, asdict


class DomainError(ValueError):
    """A length lies outside the range where the tube formulas hold."""


def max_length_bound() -> float:
    return math.sqrt(3.0) / (4.0 * math.pi) * math.log(math.sqrt(2.0) + 1.0) ** 2


def _check_length(l: float) -> float:
    l = float(l)
    bound = max_length_bound()
    if not (l > 0 and math.isfinite(l)):
        raise DomainError(f"length must be positive, got {l!r}")
    if l > bound:
        raise DomainError(f"length exceeds Meyerhoff bound: l={l!r} > {bound:.6f} (~0.107)")
    return l


def meyerhoff_kappa(l: float) -> float:
    l = _check_length(l)
    x = math.sqrt(4.0 * math.pi * l) / 3.0 ** 0.25
    # cosh(x) - 1 without cancellation for small x
    return 2.0 * math.sinh(0.5 * x) ** 2


def tube_sinh2(l: float) -> float:
    """``sinh^2 r_max(l)``, clamped at zero on the bound."""
    k = meyerhoff_kappa(l)
    val = 0.5 * (math.sqrt(1.0 - 2.0 * k) / k - 1.0)
    return max(val, 0.0)


def tube_radius(l: float) -> float:
    return math.asinh(math.sqrt(tube_sinh2(l)))


def boundary_torus_area(l: float) -> float:
    r = tube_radius(l)
    return 2.0 * math.pi * l * math.sinh(r) * math.cosh(r)


def meridian_disk_area(r: float) -> float:
    if r < 0:
        raise DomainError(f"radius must be nonnegative, got {r!r}")
    return 4.0 * math.pi * math.sinh(0.5 * r) ** 2


def tube_volume(l: float) -> float:
    return math.pi * l * tube_sinh2(l)


@dataclass(frozen=True)
class TubeProfile:
    l: float
    kappa: float
    r_max: float
    boundary_area: float
    meridian_area: float
    volume: float

    def as_dict(self) -> dict:
        return asdict(self)


def tube_profile(l: float) -> TubeProfile:
    l = _check_length(l)
    return TubeProfile(
        l=l,
        kappa=meyerhoff_kappa(l),
        r_max=tube_radius(l),
        boundary_area=boundary_torus_area(l),
        meridian_area=meridian_disk_area(tube_radius(l)),
        volume=tube_volume(l),
    )


def tubes_disjoint(l1: float, l2: float) -> bool:
    """Whether Meyerhoff's disjointness theorem applies to the two geodesics.

    When both real lengths are within the bound, the maximal tubes about
    distinct short geodesics are guaranteed not to intersect.
    """
    bound = max_length_bound()
    return 0 < l1 <= bound and 0 < l2 <= bound
