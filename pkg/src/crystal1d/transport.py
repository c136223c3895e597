"""Monotone transport of the excess of E+ onto the hole of I* = (0, |E+|).

In one dimension the monotone map between two indicator densities of equal
mass is obtained by aligning cumulative measure. Between sets that are
finite interval unions it is a piecewise translation, so every segment is
``x -> x + shift`` on a source sub-interval.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Tuple

import numpy as np

from . import quadrature
from .energy import potential_energy
from .errors import NotNonnegative
from .potential import Potential
from .sets import Interval, IntervalUnion, canonicalize, interval, measure, split_signed

MASS_TOL = 1e-12
CONTRACTION_SLACK = 1e-12
REARRANGEMENT_SLACK = 1e-9
COMPOSITE_TOL = 1e-11


@dataclass(frozen=True)
class Segment:
    source: Interval
    shift: float

    @property
    def image(self) -> Interval:
        return self.source.shifted(self.shift)


@dataclass(frozen=True)
class TransportPlan:
    source: IntervalUnion
    target: IntervalUnion
    segments: Tuple[Segment, ...]

    def __call__(self, x):
        """Apply T to points of the source (vectorized)."""
        x = np.asarray(x, dtype=float)
        if not self.segments:
            return x.copy()
        starts = np.array([s.source.lo for s in self.segments])
        shifts = np.array([s.shift for s in self.segments])
        idx = np.clip(np.searchsorted(starts, x, side="right") - 1, 0, len(starts) - 1)
        return x + shifts[idx]

    def to_list(self) -> list:
        return [{"source": [s.source.lo, s.source.hi], "shift": s.shift} for s in self.segments]


def _cumulative(u: IntervalUnion):
    lens = np.array([iv.length for iv in u.intervals])
    return np.concatenate([[0.0], np.cumsum(lens)])


def _locate(u: IntervalUnion, cum: np.ndarray, t: float) -> float:
    """Point of ``u`` with cumulative measure ``t`` (the quantile map)."""
    i = int(np.clip(np.searchsorted(cum, t, side="right") - 1, 0, len(u.intervals) - 1))
    return u.intervals[i].lo + (t - cum[i])


def build_monotone_map(e_plus: IntervalUnion) -> TransportPlan:
    if not e_plus:
        raise ValueError("build_monotone_map needs a nonempty set")
    if e_plus.lo < 0.0:
        raise NotNonnegative(f"set extends below 0 (starts at {e_plus.lo})")
    i_star = interval(0.0, measure(e_plus))
    source = e_plus.difference(i_star)
    target = i_star.difference(e_plus)
    if abs(measure(source) - measure(target)) > MASS_TOL:
        raise AssertionError(f"unequal masses {measure(source)} vs {measure(target)}")
    if source and target and source.lo < target.hi:
        raise AssertionError("excess of E+ must lie to the right of the hole of I*")

    # merge the breakpoints of both cumulative-measure functions
    cs, ct = _cumulative(source), _cumulative(target)
    total = min(cs[-1], ct[-1])
    knots = np.unique(np.concatenate([cs, ct]))
    knots = knots[knots <= total]
    segments = []
    for t0, t1 in zip(knots[:-1], knots[1:]):
        if t1 - t0 <= 0.0:
            continue
        x0 = _locate(source, cs, t0)
        y0 = _locate(target, ct, t0)
        segments.append(Segment(Interval(float(x0), float(x0 + (t1 - t0))), float(y0 - x0)))
    return TransportPlan(source, target, tuple(segments))


def preimage(plan: TransportPlan, region: IntervalUnion) -> IntervalUnion:
    pieces = []
    for seg in plan.segments:
        back = region.shifted(-seg.shift).intersect(IntervalUnion((seg.source,)))
        pieces.extend(back.intervals)
    return canonicalize(pieces)


def _equal_measure_bins(u: IntervalUnion, n_bins: int):
    cum = _cumulative(u)
    cuts = np.linspace(0.0, cum[-1], n_bins + 1)
    bins = []
    for t0, t1 in zip(cuts[:-1], cuts[1:]):
        window = interval(_locate(u, cum, t0), _locate(u, cum, t1)) if t1 > t0 else IntervalUnion()
        bins.append(u.intersect(window) if window else IntervalUnion())
    return bins


def verify_pushforward(plan: TransportPlan, n_bins: int = 16) -> float:
    """Largest |measure(bin) - measure(preimage of bin)| over equal-measure target bins."""
    if not plan.segments:
        return 0.0
    worst = 0.0
    for b in _equal_measure_bins(plan.target, n_bins):
        worst = max(worst, abs(measure(b) - measure(preimage(plan, b))))
    return worst


def verify_contraction(plan: TransportPlan, n_samples: int = 1000) -> bool:
    """T(x) <= x at ``n_samples`` points spread uniformly (by measure) over the source."""
    if not plan.segments:
        return True
    cum = _cumulative(plan.source)
    ts = (np.arange(n_samples) + 0.5) / n_samples * cum[-1]
    xs = np.array([_locate(plan.source, cum, t) for t in ts])
    return bool(np.all(plan(xs) <= xs + CONTRACTION_SLACK))


def transported_potential(p: Potential, plan: TransportPlan, sign: float = 1.0) -> float:
    """Quadrature of x -> g(sign * T(x)) over the source, segment by segment."""
    total = 0.0
    for seg in plan.segments:
        shift = seg.shift

        def composite(x, shift=shift):
            return p(sign * (x + shift))

        cuts = [sign * c - shift for c in p.cut_points]
        total += quadrature.integrate(composite, seg.source.lo, seg.source.hi, tol=COMPOSITE_TOL, points=cuts)
    return total


def _reflected_integral(p: Potential, u: IntervalUnion) -> float:
    # integral of g(-x) over u equals integral of g over -u
    return potential_energy(p, u.reflected())


def transport_gap(p: Potential, e_plus: IntervalUnion, sign: float = 1.0) -> float:
    """Integral over the source of g(x) - g(T(x)); ``sign=-1`` works on reflected sets."""
    plan = build_monotone_map(e_plus)
    if not plan.segments:
        return 0.0
    direct = _reflected_integral(p, plan.source) if sign < 0 else potential_energy(p, plan.source)
    return direct - transported_potential(p, plan, sign)


class RearrangementCheck(NamedTuple):
    lhs: float
    rhs: float
    holds: bool
    lhs_neg: float
    rhs_neg: float


def rearrangement_check(p: Potential, u: IntervalUnion, slack: float = REARRANGEMENT_SLACK) -> RearrangementCheck:
    """Compare each signed half of ``u`` against the interval of equal measure at the origin.

    The first three fields are the positive side (lhs, rhs, conjunction of
    both sides); the mirrored side is reported as ``lhs_neg``/``rhs_neg``.
    """
    e_minus, e_plus = split_signed(u)
    lhs = potential_energy(p, e_plus)
    rhs = p.integrate(0.0, measure(e_plus))
    lhs_neg = potential_energy(p, e_minus)
    rhs_neg = p.integrate(-measure(e_minus), 0.0)
    ok = lhs >= rhs - slack and lhs_neg >= rhs_neg - slack
    return RearrangementCheck(lhs, rhs, bool(ok), lhs_neg, rhs_neg)


# ---------------------------------------------------------------------------
# Randomized campaigns
# ---------------------------------------------------------------------------

def random_union(rng: np.random.Generator, lo: float, hi: float, k_max: int = 4) -> IntervalUnion:
    """Canonical union of 1..k_max intervals with endpoints drawn uniformly in [lo, hi]."""
    while True:
        k = int(rng.integers(1, k_max + 1))
        ends = np.sort(rng.uniform(lo, hi, size=2 * k))
        u = canonicalize([(float(ends[2 * j]), float(ends[2 * j + 1])) for j in range(k)])
        if u:
            return u


@dataclass
class CampaignSummary:
    trials: int = 0
    rearrangement_failures: int = 0
    consistency_trials: int = 0
    max_consistency_error: float = 0.0
    transport_trials: int = 0
    max_pushforward_discrepancy: float = 0.0
    contraction_failures: int = 0
    max_mass_mismatch: float = 0.0
    max_identity_error: float = 0.0

    @property
    def passed(self) -> bool:
        return (self.rearrangement_failures == 0 and self.contraction_failures == 0
                and self.max_consistency_error <= 1e-8 and self.max_pushforward_discrepancy <= 1e-10
                and self.max_mass_mismatch <= MASS_TOL and self.max_identity_error <= 1e-8)

    def to_dict(self) -> dict:
        d = dict(self.__dict__)
        d["passed"] = self.passed
        return d


def plan_checks(p: Potential, e_plus: IntervalUnion, n_bins: int = 16, n_samples: int = 200):
    """(pushforward discrepancy, contraction ok, |source|-|target| mismatch, change-of-variables error)."""
    plan = build_monotone_map(e_plus)
    mismatch = abs(measure(plan.source) - measure(plan.target))
    identity = abs(transported_potential(p, plan) - potential_energy(p, plan.target)) if plan.segments else 0.0
    return verify_pushforward(plan, n_bins), verify_contraction(plan, n_samples), mismatch, identity


def run_campaign(p: Potential, trials: int = 1000, transport_trials: int = 200, seed: int = 0,
                 span: float = 4.0) -> CampaignSummary:
    """Rearrangement inequality on random unions, plus transport checks on a prefix of them."""
    rng = np.random.default_rng(seed)
    out = CampaignSummary()
    for t in range(trials):
        u = random_union(rng, -span, span)
        chk = rearrangement_check(p, u)
        out.trials += 1
        out.rearrangement_failures += not chk.holds
        if t >= transport_trials:
            continue
        e_minus, e_plus = split_signed(u)
        for side, sign in ((e_plus, 1.0), (e_minus.reflected(), -1.0)):
            if not side:
                continue
            gap = (chk.lhs - chk.rhs) if sign > 0 else (chk.lhs_neg - chk.rhs_neg)
            out.max_consistency_error = max(out.max_consistency_error, abs(gap - transport_gap(p, side, sign)))
        out.consistency_trials += 1
        pos = random_union(rng, 0.0, span)
        disc, contracts, mismatch, identity = plan_checks(p, pos)
        out.transport_trials += 1
        out.max_pushforward_discrepancy = max(out.max_pushforward_discrepancy, disc)
        out.contraction_failures += not contracts
        out.max_mass_mismatch = max(out.max_mass_mismatch, mismatch)
        out.max_identity_error = max(out.max_identity_error, identity)
    return out
