"""Brute-force check that grid unions of several intervals never beat one interval.

Every union of at most ``k_max`` strictly separated intervals with endpoints
on the grid ``-window + i * grid_step`` and total length within
``mass_slack`` of the mass is scored. The optimum is compared against the
analytic translate from :mod:`crystal1d.optimizer`, and every multi-interval
candidate is also compared against its convexification ``(-|E-|, |E+|)``.
"""

from __future__ import annotations

import logging
import math
import os
from dataclasses import dataclass, field
from typing import Iterator, Optional

import numpy as np

from . import _kernel
from .energy import EnergyBreakdown, free_energy
from .errors import InputError, NoCandidates, NotAdmissible
from .optimizer import MinimizerResult, minimize_translation
from .potential import Potential, check_admissible
from .sets import IntervalUnion, canonicalize

log = logging.getLogger(__name__)

QUADRATURE_SLACK = 1e-6
THREADS_ENV = "CRYSTAL1D_THREADS"


@dataclass(frozen=True)
class OracleConfig:
    mass: float
    grid_step: float
    window: Optional[float] = None
    k_max: int = 3
    mass_slack: Optional[float] = None

    def __post_init__(self):
        if self.window is None:
            object.__setattr__(self, "window", 4.0 * max(1.0, self.mass))
        if self.mass_slack is None:
            object.__setattr__(self, "mass_slack", self.grid_step / 4.0)
        if not self.grid_step > 0:
            raise InputError(f"grid_step must be positive, got {self.grid_step}")
        if self.k_max < 1:
            raise InputError(f"k_max must be >= 1, got {self.k_max}")
        if self.k_max > 3:
            raise InputError("k_max above 3 is not supported by the exhaustive search")
        if not 0 < self.mass <= 2 * self.window:
            raise InputError(f"need 0 < mass <= 2*window, got mass={self.mass}, window={self.window}")
        if not 0 <= self.mass_slack < self.grid_step / 2:
            raise InputError("mass_slack must lie in [0, grid_step/2)")

    @property
    def half_steps(self) -> int:
        """Grid steps from -window to 0; the window is rounded up to a whole number of steps."""
        return int(math.ceil(self.window / self.grid_step - 1e-9))

    @property
    def n_grid(self) -> int:
        return 2 * self.half_steps

    @property
    def effective_window(self) -> float:
        return self.half_steps * self.grid_step

    @property
    def length_steps(self) -> int:
        steps = int(round(self.mass / self.grid_step))
        if steps < 1 or abs(steps * self.grid_step - self.mass) > self.mass_slack:
            raise NoCandidates(
                f"no grid length within {self.mass_slack} of mass {self.mass} at step {self.grid_step}")
        return steps

    def point(self, i: int) -> float:
        return (i - self.half_steps) * self.grid_step

    def to_dict(self) -> dict:
        return {"mass": self.mass, "grid_step": self.grid_step, "window": self.window,
                "effective_window": self.effective_window, "k_max": self.k_max,
                "mass_slack": self.mass_slack}


@dataclass(frozen=True)
class OracleReport:
    config: OracleConfig
    best_union: IntervalUnion
    best_energy: EnergyBreakdown
    analytic: MinimizerResult
    candidates_evaluated: int
    tolerance_bound: float
    dominance_checked: int
    dominance_violations: int
    dominance_min_margin: float
    boundary_touching: bool
    mass_mismatch: float = 0.0
    notes: tuple = field(default=())

    @property
    def best_is_single_interval(self) -> bool:
        return len(self.best_union) == 1

    @property
    def analytic_energy(self) -> float:
        return self.analytic.energy.total

    @property
    def gap(self) -> float:
        return self.best_energy.total - self.analytic_energy

    def verified(self, tol_energy: Optional[float] = None) -> bool:
        tol = self.tolerance_bound if tol_energy is None else tol_energy
        return self.best_is_single_interval and self.gap <= tol

    def to_dict(self) -> dict:
        return {
            "config": self.config.to_dict(),
            "candidates_evaluated": self.candidates_evaluated,
            "best_union": self.best_union.to_list(),
            "best_energy": self.best_energy.to_dict(),
            "best_is_single_interval": self.best_is_single_interval,
            "analytic_energy": self.analytic_energy,
            "analytic_alpha": self.analytic.representative_alpha,
            "gap": self.gap,
            "tolerance_bound": self.tolerance_bound,
            "dominance": {"checked": self.dominance_checked, "violations": self.dominance_violations,
                          "min_margin": self.dominance_min_margin if self.dominance_checked else None},
            "boundary_touching": self.boundary_touching,
            "verified": self.verified(),
        }


def _thread_count() -> int:
    raw = os.environ.get(THREADS_ENV)
    if raw:
        try:
            return max(1, int(raw))
        except ValueError:
            raise InputError(f"{THREADS_ENV} must be an integer, got {raw!r}") from None
    return os.cpu_count() or 1


def enumerate_candidates(cfg: OracleConfig) -> Iterator[IntervalUnion]:
    """Yield every admissible grid union, ``k`` ascending then endpoints lexicographic."""
    n, length = cfg.n_grid, cfg.length_steps

    def rec(start, k_left, remaining):
        # yields lists of (a, b) index pairs with total length ``remaining``
        if k_left == 1:
            for a in range(start, n - remaining + 1):
                yield [(a, a + remaining)]
            return
        for a in range(start, n + 1):
            for l in range(1, remaining - k_left + 2):
                b = a + l
                rest_min = (k_left - 1) + (remaining - l)
                if b + rest_min > n:
                    break
                for tail in rec(b + 1, k_left - 1, remaining - l):
                    yield [(a, b)] + tail

    for k in range(1, cfg.k_max + 1):
        if k > length:
            break
        for combo in rec(0, k, length):
            yield canonicalize([(cfg.point(a), cfg.point(b)) for a, b in combo])


def count_single_interval_candidates(cfg: OracleConfig) -> int:
    return cfg.n_grid - cfg.length_steps + 1


def tolerance_bound(p: Potential, cfg: OracleConfig, analytic: MinimizerResult) -> float:
    """Discretization bound on how far the grid optimum may sit above the analytic one.

    Snapping the analytic interval to the grid moves each endpoint by at most
    half a step, so the potential changes by at most ``g_near * grid_step``
    with ``g_near`` the larger of g one step outside either endpoint; the
    bound doubles that, adds the mass mismatch at the same rate, and the
    quadrature slack.
    """
    a, s = analytic.representative_alpha, cfg.grid_step
    g_near = max(p.eval(a - s), p.eval(a + cfg.mass + s))
    mismatch = abs(cfg.length_steps * s - cfg.mass)
    return g_near * 2.0 * s + g_near * mismatch + QUADRATURE_SLACK


def _antiderivative_table(p: Potential, cfg: OracleConfig) -> np.ndarray:
    return np.array([p.antiderivative(cfg.point(i)) for i in range(cfg.n_grid + 1)])


def oracle_minimize(p: Potential, cfg: OracleConfig, check: bool = True) -> OracleReport:
    if check:
        report = check_admissible(p, window=max(cfg.effective_window, 1.0), n_samples=4001)
        if not report.is_admissible:
            raise NotAdmissible(report)
    length = cfg.length_steps
    analytic = minimize_translation(p, cfg.mass, check=False)

    gt = _antiderivative_table(p, cfg)
    z = cfg.half_steps
    # energy of (-n, length - n) for each possible count n of negative steps
    conv = np.array([2.0 + gt[z + length - n] - gt[z - n] for n in range(length + 1)])
    _kernel.set_threads(_thread_count())
    best_e, best_idx, tallies, margins = _kernel.search(gt, cfg.n_grid, length, cfg.k_max, z, conv)
    n_cand, n_checked, n_bad, min_margin = _kernel.summarize(tallies, margins)
    found = _kernel.reduce_rows(best_e, best_idx)
    if found is None:
        raise NoCandidates("the grid admits no union of the requested mass")
    _, key = found
    k = key[0]
    ends = key[1:1 + 2 * k]
    pairs = [(cfg.point(ends[2 * j]), cfg.point(ends[2 * j + 1])) for j in range(k)]
    best = canonicalize(pairs)
    touching = ends[0] == 0 or ends[-1] == cfg.n_grid
    if touching:
        log.warning("best candidate touches the search window; widen it")
    return OracleReport(
        config=cfg,
        best_union=best,
        best_energy=free_energy(p, best),
        analytic=analytic,
        candidates_evaluated=n_cand,
        tolerance_bound=tolerance_bound(p, cfg, analytic),
        dominance_checked=n_checked,
        dominance_violations=n_bad,
        dominance_min_margin=min_margin,
        boundary_touching=bool(touching),
        mass_mismatch=abs(length * cfg.grid_step - cfg.mass),
    )


def verify_theorem(p: Potential, cfg: OracleConfig, tol_energy: Optional[float] = None) -> bool:
    """True iff the grid optimum is a single interval within ``tol_energy`` of the analytic one.

    ``tol_energy`` defaults to the computed discretization bound; a smaller
    value is accepted but logged, since it no longer covers grid error.
    """
    report = oracle_minimize(p, cfg)
    if tol_energy is not None and tol_energy < report.tolerance_bound:
        log.warning("tol_energy %.3g is below the discretization bound %.3g", tol_energy, report.tolerance_bound)
    return report.verified(tol_energy)
