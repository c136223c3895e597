"""Free energy of a candidate set: boundary count plus potential integral."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import EmptySet
from .potential import Potential
from .sets import IntervalUnion, boundary_count

INTERVAL_TOL = 1e-9


@dataclass(frozen=True)
class EnergyBreakdown:
    surface: int
    potential: float

    @property
    def total(self) -> float:
        return self.surface + self.potential

    def to_dict(self) -> dict:
        return {"surface": self.surface, "potential": self.potential, "total": self.total}


def potential_energy(p: Potential, u: IntervalUnion) -> float:
    """Integral of g over the union, one interval at a time."""
    return float(sum(p.integrate(iv.lo, iv.hi, tol=INTERVAL_TOL) for iv in u.intervals))


def free_energy(p: Potential, u: IntervalUnion) -> EnergyBreakdown:
    if not u:
        raise EmptySet("free energy of the empty set is not defined under a mass constraint")
    return EnergyBreakdown(boundary_count(u), potential_energy(p, u))


def interval_energy_profile(p: Potential, m: float, a: float) -> float:
    """h(a) = G(a + m) - G(a): potential energy of the translate (a, a + m)."""
    if m <= 0:
        raise ValueError(f"mass must be positive, got {m}")
    return p.integrate(a, a + m)
