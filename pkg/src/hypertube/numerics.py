"""Small scalar numerical routines shared by the geometry modules."""
from __future__ import annotations

import math
from typing import Callable

from .config import DEFAULTS


class QuadratureError(ArithmeticError):
    """Adaptive quadrature failed to reach the requested tolerance."""


class BracketError(ValueError):
    """A root-finding bracket does not contain a sign change."""


def adaptive_simpson(f: Callable[[float], float], a: float, b: float,
                     rel_tol: float | None = None, max_depth: int | None = None,
                     abs_tol: float = 1e-300) -> float:
    """Integrate ``f`` over ``[a, b]`` by adaptive Simpson bisection.

    Each panel is accepted when the two half-panel estimates differ from the
    whole-panel estimate by at most ``15 * tol`` (the classical criterion),
    and the Richardson-corrected value is used.  The tolerance budget is
    split evenly between halves.

    Raises
    ------
    QuadratureError
        If a panel cannot be resolved within ``max_depth`` bisections or the
        integrand returns a non-finite value.
    """
    rel_tol = DEFAULTS.quad_rel if rel_tol is None else rel_tol
    max_depth = DEFAULTS.quad_depth if max_depth is None else max_depth
    if a == b:
        return 0.0
    sign = 1.0
    if b < a:
        a, b, sign = b, a, -1.0

    fa, fb = f(a), f(b)
    m = 0.5 * (a + b)
    fm = f(m)
    whole = (b - a) * (fa + 4.0 * fm + fb) / 6.0
    if not math.isfinite(whole):
        raise QuadratureError(f"non-finite integrand on [{a}, {b}]")
    # a crude first pass fixes the absolute target from the relative one
    coarse = abs(_simpson_composite(f, a, b, 64))
    tol = max(rel_tol * coarse, abs_tol)

    total = 0.0
    stack = [(a, b, fa, fm, fb, whole, tol, 0)]
    while stack:
        lo, hi, flo, fmid, fhi, s, eps, depth = stack.pop()
        mid = 0.5 * (lo + hi)
        lm, rm = 0.5 * (lo + mid), 0.5 * (mid + hi)
        flm, frm = f(lm), f(rm)
        left = (mid - lo) * (flo + 4.0 * flm + fmid) / 6.0
        right = (hi - mid) * (fmid + 4.0 * frm + fhi) / 6.0
        delta = left + right - s
        if not math.isfinite(delta):
            raise QuadratureError(f"non-finite integrand near x={mid!r}")
        if abs(delta) <= 15.0 * eps:
            total += left + right + delta / 15.0
            continue
        if depth >= max_depth:
            raise QuadratureError(
                f"no convergence on [{lo!r}, {hi!r}] after {depth} bisections "
                f"(panel error {abs(delta) / 15.0:.3e}, target {eps:.3e})")
        stack.append((mid, hi, fmid, frm, fhi, right, 0.5 * eps, depth + 1))
        stack.append((lo, mid, flo, flm, fmid, left, 0.5 * eps, depth + 1))
    return sign * total


def _simpson_composite(f, a, b, n):
    h = (b - a) / n
    s = f(a) + f(b)
    for i in range(1, n):
        s += (4.0 if i % 2 else 2.0) * f(a + i * h)
    return s * h / 3.0


def bisect(f: Callable[[float], float], lo: float, hi: float,
           xtol: float | None = None, max_iter: int | None = None) -> float:
    """Return a sign change of ``f`` in ``[lo, hi]`` to absolute width ``xtol``."""
    xtol = DEFAULTS.bisect_abs if xtol is None else xtol
    max_iter = DEFAULTS.bisect_max_iter if max_iter is None else max_iter
    flo, fhi = f(lo), f(hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if (flo > 0) == (fhi > 0):
        raise BracketError(
            f"no sign change: f({lo!r})={flo!r}, f({hi!r})={fhi!r}")
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        if hi - lo <= xtol or mid in (lo, hi):
            break
        fmid = f(mid)
        if fmid == 0.0:
            return mid
        if (fmid > 0) == (flo > 0):
            lo, flo = mid, fmid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def bisect_predicate(pred: Callable[[float], bool], lo: float, hi: float,
                     xtol: float | None = None,
                     max_iter: int | None = None) -> float:
    """Boundary of a monotone predicate, false at ``lo`` and true at ``hi``."""
    xtol = DEFAULTS.bisect_abs if xtol is None else xtol
    max_iter = DEFAULTS.bisect_max_iter if max_iter is None else max_iter
    if pred(lo) or not pred(hi):
        raise BracketError(f"predicate not false at {lo!r} and true at {hi!r}")
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        if hi - lo <= xtol or mid in (lo, hi):
            break
        if pred(mid):
            hi = mid
        else:
            lo = mid
    return hi
