import json
import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from crystal1d.errors import InputError
from crystal1d.potential import (
    BREAK_LEFT, BREAK_RIGHT, NEGATIVE_VALUE, NONZERO_AT_ORIGIN, POSITIVE_BOTH, ZERO_ON_LEFT, ZERO_ON_RIGHT,
    Affine, Constant, Exponential, Polynomial, Power, Tabulated, antiderivative, check_admissible,
    classify_zero_structure, eval as g_eval, family, from_callable, from_dict, from_pieces, load,
)

from conftest import ALL_ADMISSIBLE, make


# -- eval ------------------------------------------------------------------

def test_eval_examples():
    assert g_eval(family("abs"), -2.0) == 2.0
    assert g_eval(family("zero"), 7.0) == 0.0
    assert g_eval(from_pieces([(None, None, Polynomial([0, 0, 1]))]), 0.5) == 0.25


def test_breakpoint_value_belongs_to_right_piece():
    p = from_pieces([(None, 1.0, Constant(0.0)), (1.0, None, Constant(5.0))])
    assert g_eval(p, 1.0) == 5.0
    assert g_eval(p, np.nextafter(1.0, 0.0)) == 0.0


def test_vectorized_matches_scalar(admissible_potential):
    _, p = admissible_potential
    xs = np.linspace(-5, 5, 101)
    assert np.array_equal(p(xs), np.array([g_eval(p, x) for x in xs]))


# -- antiderivative --------------------------------------------------------

def test_antiderivative_examples():
    assert antiderivative(family("power", p=2.0), 1.0) == pytest.approx(1.0 / 3.0, abs=1e-15)
    assert antiderivative(family("abs"), -1.0) == pytest.approx(-0.5, abs=1e-15)
    assert antiderivative(family("zero"), 5.0) == 0.0


@pytest.mark.parametrize("name", sorted(ALL_ADMISSIBLE))
def test_antiderivative_against_mpmath(name, rng):
    p = make(name)
    for x in rng.uniform(-3, 3, size=10):
        pts = sorted({0.0, float(x), *[b for b in p.cut_points if min(0, x) < b < max(0, x)]})
        ref = sum(mpmath.quad(lambda t: g_eval(p, float(t)), [a, b]) for a, b in zip(pts[:-1], pts[1:]))
        if x < 0:
            ref = -ref
        assert antiderivative(p, float(x)) == pytest.approx(float(ref), abs=1e-10)


@pytest.mark.parametrize("name", sorted(ALL_ADMISSIBLE))
def test_exact_and_numeric_modes_agree(name, rng):
    exact = make(name)
    numeric = exact.with_mode("numeric")
    for x in rng.uniform(-6, 6, size=100):
        assert exact.antiderivative(x) == pytest.approx(numeric.antiderivative(x), abs=1e-8)


@pytest.mark.parametrize("name", sorted(ALL_ADMISSIBLE))
def test_antiderivative_nondecreasing(name):
    p = make(name)
    xs = np.linspace(-6, 6, 241)
    gs = [p.antiderivative(x) for x in xs]
    assert p.antiderivative(0.0) == 0.0
    assert all(b >= a - 1e-12 for a, b in zip(gs[:-1], gs[1:]))


def test_tabulated_primitive_matches_trapezoid():
    f = Tabulated([[0.0, 0.0], [1.0, 2.0], [3.0, 2.0]])
    p = from_pieces([(None, 0.0, Constant(0.0)), (0.0, None, f)])
    # area = triangle 1 + rectangle 4, then constant 2 beyond the table
    assert p.antiderivative(3.0) == pytest.approx(5.0)
    assert p.antiderivative(4.0) == pytest.approx(7.0)
    assert p.antiderivative(0.5) == pytest.approx(0.25)
    assert p.with_mode("numeric").antiderivative(2.2) == pytest.approx(p.antiderivative(2.2), abs=1e-10)


def test_custom_callable_uses_quadrature():
    p = from_callable(lambda x: np.abs(x) ** 1.5, name="p15")
    assert p.antiderivative(2.0) == pytest.approx(2.0 ** 2.5 / 2.5, abs=1e-9)
    assert check_admissible(p, window=4).is_admissible


# -- admissibility ---------------------------------------------------------

def test_admissible_examples():
    assert check_admissible(family("abs")).is_admissible


def test_identity_is_rejected_as_negative():
    p = from_pieces([(None, None, Affine(0.0, 1.0))])
    rep = check_admissible(p, window=2, n_samples=101)
    assert NEGATIVE_VALUE in rep.kinds()
    assert any(v.kind == NEGATIVE_VALUE and v.x < 0 for v in rep.violations)


def test_sin2_breaks_right_after_half_pi():
    rep = check_admissible(family("sin2"), window=4.0, n_samples=801)
    rights = [v.x for v in rep.violations if v.kind == BREAK_RIGHT]
    assert rights and all(math.pi / 2 < x < math.pi for x in rights)
    assert BREAK_LEFT in rep.kinds()


def test_nonzero_origin_is_checked_exactly():
    p = from_pieces([(None, 0.0, Constant(0.0)), (0.0, None, Constant(1e-20))])
    assert NONZERO_AT_ORIGIN in check_admissible(p).kinds()


def test_jump_down_at_breakpoint_is_caught():
    # jumps from 2 down to 1 at x=1: the left limit must be sampled
    p = from_pieces([(None, 0.0, Constant(0.0)), (0.0, 1.0, Constant(2.0)), (1.0, None, Constant(1.0))])
    rep = check_admissible(p, window=3, n_samples=7)
    assert BREAK_RIGHT in rep.kinds()


def test_report_invariant(admissible_potential):
    _, p = admissible_potential
    rep = check_admissible(p, window=5, n_samples=501)
    assert rep.is_admissible == (len(rep.violations) == 0)
    assert rep.samples_used >= 501


def test_bad_arguments():
    with pytest.raises(InputError):
        check_admissible(family("abs"), window=0.0)
    with pytest.raises(InputError):
        check_admissible(family("abs"), n_samples=2)


@pytest.mark.parametrize("name", sorted(ALL_ADMISSIBLE))
def test_sampled_monotonicity(name):
    p = make(name)
    xs = np.linspace(0, 8, 801)
    gr = p(xs)
    assert np.all(gr[:-1] <= gr[1:] + 1e-12)
    gl = p(-xs[::-1])
    assert np.all(gl[:-1] >= gl[1:] - 1e-12)


@pytest.mark.parametrize("name", sorted(ALL_ADMISSIBLE))
@given(t=st.floats(min_value=1e-6, max_value=50.0))
@settings(max_examples=40, deadline=None)
def test_sublevel_sets_have_no_gaps(name, t):
    p = make(name)
    xs = np.linspace(-6, 6, 601)
    below = p(xs) < t
    idx = np.flatnonzero(below)
    # {g < t} sampled is one contiguous block
    assert idx.size == 0 or np.all(below[idx[0]:idx[-1] + 1])


# -- zero structure --------------------------------------------------------

def test_zero_structure_examples():
    assert classify_zero_structure(family("zero")).tag == ZERO_ON_RIGHT
    zs = classify_zero_structure(family("one_sided"))
    assert (zs.tag, zs.witness_xr) == (ZERO_ON_LEFT, 1.0)
    zs = classify_zero_structure(family("abs"))
    assert (zs.tag, zs.witness_xr, zs.witness_xl) == (POSITIVE_BOTH, 1.0, -1.0)


def test_zero_structure_doubles_the_window():
    # positive only beyond x = 5 on the right, beyond -9 on the left
    p = from_pieces([(None, -9.0, Affine(-9.0, -1.0)), (-9.0, 5.0, Constant(0.0)), (5.0, None, Affine(-5.0, 1.0))])
    zs = classify_zero_structure(p)
    assert zs.tag == POSITIVE_BOTH
    assert zs.witness_xr == 8.0 and zs.witness_xl == -16.0


def test_zero_structure_respects_cap():
    p = from_pieces([(None, 0.0, Constant(0.0)), (0.0, 100.0, Constant(0.0)), (100.0, None, Affine(-100.0, 1.0))])
    assert classify_zero_structure(p, cap=50.0).tag == ZERO_ON_RIGHT
    assert classify_zero_structure(p, cap=1000.0).tag == ZERO_ON_LEFT


def test_left_zero_right_zero_tag():
    p = family("one_sided", side="left")
    assert classify_zero_structure(p).tag == ZERO_ON_RIGHT


# -- documents -------------------------------------------------------------

def test_pieces_round_trip(tmp_path, admissible_potential):
    name, p = admissible_potential
    doc = json.loads(json.dumps(p.to_dict()))
    q = from_dict(doc)
    xs = np.linspace(-7, 7, 57)
    assert np.max(np.abs(p(xs) - q(xs))) <= 1e-15
    path = tmp_path / f"{name}.json"
    path.write_text(json.dumps({"family": ALL_ADMISSIBLE[name][0], "params": ALL_ADMISSIBLE[name][1]}))
    assert np.max(np.abs(load(path)(xs) - p(xs))) <= 1e-15


def test_pieces_document_parses():
    doc = {"pieces": [
        {"domain": [None, 0], "kind": "affine", "coefficients": [0, -2]},
        {"domain": [0, 1], "kind": "polynomial", "coefficients": [0, 0, 1]},
        {"domain": [1, None], "kind": "exponential", "coefficients": [1, 1, 1 - math.e]},
    ]}
    p = from_dict(doc)
    assert g_eval(p, -1.0) == 2.0 and g_eval(p, 0.5) == 0.25
    assert g_eval(p, 2.0) == pytest.approx(math.e ** 2 + 1 - math.e)
    assert check_admissible(p).is_admissible


@pytest.mark.parametrize("doc", [
    {"pieces": [{"domain": [None, 0], "kind": "constant", "coefficients": [0]}]},
    {"pieces": [{"domain": [None, 0], "kind": "constant", "coefficients": [0]},
                {"domain": [1, None], "kind": "constant", "coefficients": [0]}]},
    {"pieces": [{"domain": [None, None], "kind": "wavelet", "coefficients": [0]}]},
    {"pieces": [{"domain": [None, None], "kind": "power", "coefficients": [1, -1]}]},
    {"family": "nope"},
    {"family": "abs", "params": {"bogus": 1}},
    {"nothing": 1},
])
def test_malformed_documents(doc):
    with pytest.raises(InputError):
        from_dict(doc)


def test_formula_primitives_differentiate_to_values():
    for f in (Power(2.0, 1.5), Exponential(1.0, -0.7, 3.0), Polynomial([1, 2, 3]), Constant(4.0)):
        for x in (-1.3, 0.4, 2.2):
            h = 1e-6
            fd = (f.primitive(x + h) - f.primitive(x - h)) / (2 * h)
            assert fd == pytest.approx(float(f(x)), abs=1e-6)
