import mpmath
import numpy as np
import pytest

from crystal1d.energy import EnergyBreakdown, free_energy, interval_energy_profile, potential_energy
from crystal1d.errors import EmptySet
from crystal1d.potential import family
from crystal1d.sets import IntervalUnion, canonicalize, interval, measure
from crystal1d.transport import random_union

from conftest import ALL_ADMISSIBLE, make

QUAD = family("power", p=2.0)
ABS = family("abs")
ZERO = family("zero")


def test_potential_energy_examples():
    # closed forms via sympy: 1/12 and 1/2 + 5/2
    assert potential_energy(QUAD, interval(-0.5, 0.5)) == pytest.approx(1 / 12, abs=1e-15)
    assert potential_energy(ZERO, interval(0, 5)) == 0.0
    assert potential_energy(ABS, canonicalize([(0, 1), (2, 3)])) == pytest.approx(3.0, abs=1e-15)


def test_free_energy_examples():
    e = free_energy(QUAD, interval(-0.5, 0.5))
    assert (e.surface, e.potential, e.total) == (2, pytest.approx(1 / 12), pytest.approx(2 + 1 / 12))
    e = free_energy(QUAD, canonicalize([(-1, -0.5), (0.5, 1)]))
    assert (e.surface, e.potential) == (4, pytest.approx(7 / 12, abs=1e-15))
    assert e.total == pytest.approx(4 + 7 / 12, abs=1e-15)
    for a in (-3.0, 0.0, 11.5):
        assert free_energy(ZERO, interval(a, a + 2)).to_dict() == {"surface": 2, "potential": 0.0, "total": 2.0}


def test_free_energy_rejects_empty():
    with pytest.raises(EmptySet):
        free_energy(ABS, IntervalUnion())


def test_profile_examples():
    assert interval_energy_profile(ABS, 1.0, -0.5) == pytest.approx(0.25, abs=1e-15)
    assert interval_energy_profile(ZERO, 2.0, 10.0) == 0.0
    assert interval_energy_profile(QUAD, 1.0, 0.0) == pytest.approx(1 / 3, abs=1e-15)


@pytest.mark.parametrize("name", sorted(ALL_ADMISSIBLE))
def test_potential_energy_against_mpmath(name, rng):
    p = make(name)
    for _ in range(5):
        u = random_union(rng, -3.0, 3.0)
        ref = 0.0
        for iv in u:
            pts = sorted({iv.lo, iv.hi, *[b for b in p.cut_points if iv.lo < b < iv.hi]})
            ref += sum(mpmath.quad(lambda t: float(p(np.array([float(t)]))[0]), [a, b])
                       for a, b in zip(pts[:-1], pts[1:]))
        assert potential_energy(p, u) == pytest.approx(float(ref), abs=1e-9)


def test_breakdown_invariants(admissible_potential, rng):
    _, p = admissible_potential
    for _ in range(50):
        u = random_union(rng, -4.0, 4.0)
        e = free_energy(p, u)
        assert e.total == e.surface + e.potential
        assert e.potential >= 0.0
        assert e.total >= 2.0
        # additivity over components
        parts = sum(potential_energy(p, IntervalUnion((iv,))) for iv in u)
        assert abs(parts - e.potential) <= 1e-12


def test_finite_difference_slope(admissible_potential, rng):
    _, p = admissible_potential
    eps = 1e-6
    for m in (0.5, 1.0, 2.0):
        for a in rng.uniform(-3, 3, size=30):
            if any(abs(a - b) < 1e-3 or abs(a + m - b) < 1e-3 for b in p.cut_points):
                continue
            fd = (interval_energy_profile(p, m, a + eps) - interval_energy_profile(p, m, a - eps)) / (2 * eps)
            assert abs(fd - (p.eval(a + m) - p.eval(a))) <= 1e-5


def test_profile_nonnegative(admissible_potential):
    _, p = admissible_potential
    for a in np.linspace(-5, 5, 41):
        assert interval_energy_profile(p, 1.5, a) >= 0.0


def test_slope_monotone_on_bracket(admissible_potential):
    _, p = admissible_potential
    for m in (0.25, 1.0, 3.0):
        a = np.linspace(-m, 0.0, 401)
        s = p(a + m) - p(a)
        assert np.all(np.diff(s) >= -1e-12)


def test_profile_rejects_bad_mass():
    with pytest.raises(ValueError):
        interval_energy_profile(ABS, 0.0, 1.0)
