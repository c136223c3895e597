"""Finite unions of disjoint open intervals."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Tuple


@dataclass(frozen=True, order=True)
class Interval:
    lo: float
    hi: float

    def __post_init__(self):
        if not self.lo < self.hi:
            raise ValueError(f"degenerate interval ({self.lo}, {self.hi})")

    @property
    def length(self) -> float:
        return self.hi - self.lo

    def shifted(self, d: float) -> "Interval":
        return Interval(self.lo + d, self.hi + d)


@dataclass(frozen=True)
class IntervalUnion:
    """Sorted, strictly separated open intervals. Build with :func:`canonicalize`."""

    intervals: Tuple[Interval, ...] = ()

    def __post_init__(self):
        for a, b in zip(self.intervals[:-1], self.intervals[1:]):
            if not a.hi < b.lo:
                raise ValueError(f"intervals not strictly separated: {a}, {b}")

    def __iter__(self):
        return iter(self.intervals)

    def __len__(self):
        return len(self.intervals)

    def __bool__(self):
        return bool(self.intervals)

    @property
    def measure(self) -> float:
        return measure(self)

    @property
    def lo(self) -> float:
        return self.intervals[0].lo

    @property
    def hi(self) -> float:
        return self.intervals[-1].hi

    def intersect(self, other: "IntervalUnion") -> "IntervalUnion":
        out = []
        i = j = 0
        a, b = self.intervals, other.intervals
        while i < len(a) and j < len(b):
            lo = max(a[i].lo, b[j].lo)
            hi = min(a[i].hi, b[j].hi)
            if lo < hi:
                out.append((lo, hi))
            if a[i].hi < b[j].hi:
                i += 1
            else:
                j += 1
        return canonicalize(out)

    def difference(self, other: "IntervalUnion") -> "IntervalUnion":
        out = []
        for iv in self.intervals:
            cur = iv.lo
            for cut in other.intervals:
                if cut.hi <= cur or cut.lo >= iv.hi:
                    continue
                if cut.lo > cur:
                    out.append((cur, cut.lo))
                cur = max(cur, cut.hi)
            if cur < iv.hi:
                out.append((cur, iv.hi))
        return canonicalize(out)

    def shifted(self, d: float) -> "IntervalUnion":
        return IntervalUnion(tuple(iv.shifted(d) for iv in self.intervals))

    def reflected(self) -> "IntervalUnion":
        """Image under x -> -x."""
        return IntervalUnion(tuple(Interval(-iv.hi, -iv.lo) for iv in reversed(self.intervals)))

    def to_list(self) -> list:
        return [[iv.lo, iv.hi] for iv in self.intervals]


def _pair(raw) -> Tuple[float, float]:
    if isinstance(raw, Interval):
        return raw.lo, raw.hi
    lo, hi = raw
    return float(lo), float(hi)


def canonicalize(raw: Iterable) -> IntervalUnion:
    """Sort, drop zero-length pieces, and merge overlapping or touching intervals.

    Accepts :class:`Interval` objects or ``(lo, hi)`` pairs with ``lo <= hi``.
    """
    pairs = []
    for r in raw:
        lo, hi = _pair(r)
        if lo > hi:
            raise ValueError(f"interval with lo > hi: ({lo}, {hi})")
        if lo < hi:
            pairs.append((lo, hi))
    pairs.sort()
    merged = []
    for lo, hi in pairs:
        if merged and lo <= merged[-1][1]:
            merged[-1][1] = max(merged[-1][1], hi)
        else:
            merged.append([lo, hi])
    return IntervalUnion(tuple(Interval(lo, hi) for lo, hi in merged))


def measure(u: IntervalUnion) -> float:
    return math.fsum(iv.hi - iv.lo for iv in u.intervals)


def boundary_count(u: IntervalUnion) -> int:
    return 2 * len(u.intervals)


def split_signed(u: IntervalUnion) -> Tuple[IntervalUnion, IntervalUnion]:
    """Clip at the origin; returns ``(E_minus, E_plus)``."""
    neg, pos = [], []
    for iv in u.intervals:
        if iv.hi <= 0.0:
            neg.append(iv)
        elif iv.lo >= 0.0:
            pos.append(iv)
        else:
            neg.append(Interval(iv.lo, 0.0))
            pos.append(Interval(0.0, iv.hi))
    return IntervalUnion(tuple(neg)), IntervalUnion(tuple(pos))


def interval(lo: float, hi: float) -> IntervalUnion:
    return IntervalUnion((Interval(lo, hi),))
