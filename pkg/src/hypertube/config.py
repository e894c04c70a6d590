"""Default tolerances and numerical settings.

Every function that takes a tolerance keyword defaults to the matching
field of :data:`DEFAULTS`.  Replace the object (or pass keywords) to tune.
"""
from __future__ import annotations

from dataclasses import dataclass, asdict, replace


@dataclass(frozen=True)
class Tolerances:
    det: float = 1e-12                 # |ad - bc - 1| after normalization
    trace: float = 1e-12               # trace comparisons in classify()
    hyperboloid: float = 1e-10         # |<x,x> + 1|
    seam: float = 1e-9                 # identified seam vertices
    quad_rel: float = 1e-10            # adaptive Simpson relative tolerance
    quad_depth: int = 60
    bisect_abs: float = 1e-12
    bisect_max_iter: int = 200
    bracket_doublings: int = 200
    theta_floor: float = 1e-9          # lower end of the crossover bracket
    asymptotic: float = 1e-3           # tube asymptotics at l = 1e-6
    jacobi_sign: float = 1e-6          # band treated as inconclusive
    jacobi_max_iter: int = 20000
    jacobi_rel: float = 1e-12
    mori_stable_max: float = 1.0       # pitches certified stable at or below
    mori_unstable_min: float = 5.0     # pitches certified unstable at or above
    fd_step: float = 1e-5              # finite-difference step for mesh gradients
    cos_alpha_floor: float = 1e-6
    scan_points: int = 1024            # shrinkwrap derivative scan

    def as_dict(self) -> dict:
        return asdict(self)

    def updated(self, **changes) -> "Tolerances":
        return replace(self, **changes)


DEFAULTS = Tolerances()
