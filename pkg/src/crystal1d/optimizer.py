"""Optimal translation of the interval (0, m) and its diagnostics.

For an admissible potential, the slope of the translated-interval energy
``s(a) = g(a + m) - g(a)`` is non-decreasing on ``[-m, 0]``, non-positive at
``-m`` and non-negative at ``0``. The optimal translations are exactly where
``s`` changes sign, so two bisections (last point with ``s < 0``, first point
with ``s > 0``) bracket the whole optimal plateau.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from .energy import EnergyBreakdown, free_energy
from .errors import MassNonpositive, NotAdmissible, WrongCase
from .potential import (
    POSITIVE_BOTH, ZERO_ON_LEFT, ZERO_ON_RIGHT, Potential, check_admissible, classify_zero_structure,
)
from .sets import IntervalUnion, interval

DEFAULT_TOL = 1e-9
SIGN_SLACK = 1e-12
BREAKPOINT_NUDGE = 1e-12


@dataclass(frozen=True)
class MinimizerResult:
    case_tag: str
    mass: float
    alpha_lo: float
    alpha_hi: float
    representative_alpha: float
    minimizer: IntervalUnion
    energy: EnergyBreakdown
    stationarity_residual: float
    origin_in_closure: bool

    @property
    def alpha(self) -> float:
        return self.representative_alpha

    @property
    def plateau_width(self) -> float:
        return self.alpha_hi - self.alpha_lo

    def to_dict(self) -> dict:
        iv = self.minimizer.intervals[0]
        return {
            "case": self.case_tag,
            "mass": self.mass,
            "alpha_lo": self.alpha_lo,
            "alpha_hi": self.alpha_hi,
            "alpha": self.representative_alpha,
            "interval": [iv.lo, iv.hi],
            "energy": self.energy.to_dict(),
            "residual": self.stationarity_residual,
            "origin_in_closure": self.origin_in_closure,
        }


def stationarity_residual(p: Potential, m: float, a: float) -> float:
    """|g(a + m) - g(a)|, zero at an interior stationary translation."""
    return abs(p.eval(a + m) - p.eval(a))


def bracket_alpha(p: Potential, m: float) -> Tuple[float, float]:
    """Search bracket for the optimal translation when g is positive on both sides.

    s(a) <= 0 for a <= -m and s(a) >= 0 for a >= 0, so some minimizer lies in
    [-m, 0].
    """
    if m <= 0:
        raise MassNonpositive(f"mass must be positive, got {m}")
    zs = classify_zero_structure(p, mass=m)
    if zs.tag != POSITIVE_BOTH:
        raise WrongCase(f"bracket_alpha needs a potential positive on both sides, got {zs.tag}")
    return (-m, 0.0)


def _slope(p: Potential, m: float, a: float, lo: float, hi: float) -> float:
    bps = p.breakpoints
    if bps and (a in bps or (a + m) in bps):
        # s stays monotone, so a one-sided query at a breakpoint is still valid
        nudged = a + BREAKPOINT_NUDGE
        a = nudged if nudged < hi else a - BREAKPOINT_NUDGE
    return p.eval(a + m) - p.eval(a)


def _bisect_last(pred, lo: float, hi: float, tol: float) -> float:
    """Boundary between the region where ``pred`` holds (left) and fails (right)."""
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if pred(mid):
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _check_inputs(p: Potential, m: float, window: Optional[float], check: bool):
    if not m > 0:
        raise MassNonpositive(f"mass must be positive, got {m}")
    if check:
        report = check_admissible(p, window=window or max(10.0, 4.0 * m), n_samples=4001)
        if not report.is_admissible:
            raise NotAdmissible(report)


def minimize_translation(p: Potential, m: float, tol: float = DEFAULT_TOL,
                         check: bool = True) -> MinimizerResult:
    """Best translate (alpha, alpha + m) of the interval (0, m)."""
    if not tol > 0:
        raise ValueError(f"tol must be positive, got {tol}")
    _check_inputs(p, m, None, check)
    zs = classify_zero_structure(p, mass=m)

    if zs.tag == ZERO_ON_RIGHT:
        lo = hi = rep = 0.0
    elif zs.tag == ZERO_ON_LEFT:
        lo = hi = rep = -m
    else:
        a0, a1 = bracket_alpha(p, m)

        def negative(a):
            return _slope(p, m, a, a0, a1) < -SIGN_SLACK

        def not_positive(a):
            return _slope(p, m, a, a0, a1) <= SIGN_SLACK

        lo = a0 if not negative(a0) else _bisect_last(negative, a0, a1, tol)
        hi = a1 if not_positive(a1) else _bisect_last(not_positive, a0, a1, tol)
        if hi < lo:
            lo = hi = 0.5 * (lo + hi)
        rep = 0.5 * (lo + hi)

    best = interval(rep, rep + m)
    return MinimizerResult(
        case_tag=zs.tag,
        mass=m,
        alpha_lo=lo,
        alpha_hi=hi,
        representative_alpha=rep,
        minimizer=best,
        energy=free_energy(p, best),
        stationarity_residual=stationarity_residual(p, m, rep),
        origin_in_closure=bool(rep <= 0.0 <= rep + m),
    )


def _strictly_coercive(p: Potential, window: float, n: int = 2001) -> bool:
    xs = np.linspace(0.0, window, n)
    right = p(xs)
    left = p(-xs)
    return bool(np.all(np.diff(right) > 0) and np.all(np.diff(left) > 0)
                and p.eval(window) > p.eval(window / 2) and p.eval(-window) > p.eval(-window / 2))


def verify_origin_membership(r: MinimizerResult, p: Potential, window: Optional[float] = None) -> bool:
    """Check where the origin sits relative to the returned minimizer.

    Strictly increasing, unbounded-looking potentials must put 0 strictly
    inside (alpha, alpha + m); otherwise only closure membership is required.
    """
    a, b = r.representative_alpha, r.representative_alpha + r.mass
    if r.case_tag == POSITIVE_BOTH and _strictly_coercive(p, window or 4.0 * max(1.0, r.mass)):
        return a < 0.0 < b
    return a <= 0.0 <= b
