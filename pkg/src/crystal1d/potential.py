"""Piecewise-elementary potentials g, their antiderivative G, and admissibility checks.

A potential is an ordered list of pieces covering the real line. Piece ``i``
owns the half-open range ``[lo_i, hi_i)`` (left-closed convention), so at a
breakpoint ``b`` the value is taken from the piece that starts at ``b``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from . import quadrature
from .errors import InputError

MONOTONE_SLACK = 1e-12
POSITIVE_THRESHOLD = 1e-12
ANTIDERIVATIVE_TOL = 1e-10

ZERO_ON_RIGHT = "ZeroOnRightHalfLine"
ZERO_ON_LEFT = "ZeroOnLeftPositiveOnRight"
POSITIVE_BOTH = "PositiveOnBothSides"

NEGATIVE_VALUE = "negative-value"
NONZERO_AT_ORIGIN = "nonzero-at-origin"
BREAK_RIGHT = "monotonicity-break-right"
BREAK_LEFT = "monotonicity-break-left"


# ---------------------------------------------------------------------------
# Elementary formulas
# ---------------------------------------------------------------------------

class Formula:
    """An elementary function of one variable with an optional closed-form primitive."""

    kind = "abstract"
    #: interior points where the formula itself kinks (quadrature cuts there)
    kinks: tuple = ()

    def __call__(self, x):
        raise NotImplementedError

    def primitive(self, x):
        """Some antiderivative of the formula, or ``None`` when unavailable."""
        return None

    @property
    def has_primitive(self):
        return type(self).primitive is not Formula.primitive

    def coefficients(self):
        raise NotImplementedError


class Constant(Formula):
    kind = "constant"

    def __init__(self, c):
        self.c = float(c)

    def __call__(self, x):
        return np.full_like(np.asarray(x, dtype=float), self.c)

    def primitive(self, x):
        return self.c * np.asarray(x, dtype=float)

    def coefficients(self):
        return [self.c]


class Polynomial(Formula):
    """``c0 + c1*x + ... + cn*x**n``"""

    kind = "polynomial"

    def __init__(self, coeffs):
        if len(coeffs) == 0:
            raise InputError("polynomial needs at least one coefficient")
        self.coeffs = [float(c) for c in coeffs]
        self._poly = np.polynomial.Polynomial(self.coeffs)
        self._prim = self._poly.integ()

    def __call__(self, x):
        return self._poly(np.asarray(x, dtype=float))

    def primitive(self, x):
        return self._prim(np.asarray(x, dtype=float))

    def coefficients(self):
        return list(self.coeffs)


class Affine(Polynomial):
    """``a + b*x``"""

    kind = "affine"

    def __init__(self, a, b):
        super().__init__([a, b])


class Power(Formula):
    """``c * |x|**p`` for ``p >= 0``."""

    kind = "power"
    kinks = (0.0,)

    def __init__(self, c, p):
        if p < 0:
            raise InputError(f"power exponent must be >= 0, got {p}")
        self.c = float(c)
        self.p = float(p)

    def __call__(self, x):
        return self.c * np.abs(np.asarray(x, dtype=float)) ** self.p

    def primitive(self, x):
        x = np.asarray(x, dtype=float)
        return self.c * np.sign(x) * np.abs(x) ** (self.p + 1.0) / (self.p + 1.0)

    def coefficients(self):
        return [self.c, self.p]


class Exponential(Formula):
    """``a * exp(b*x) + c``"""

    kind = "exponential"

    def __init__(self, a, b, c=0.0):
        self.a, self.b, self.c = float(a), float(b), float(c)

    def __call__(self, x):
        return self.a * np.exp(self.b * np.asarray(x, dtype=float)) + self.c

    def primitive(self, x):
        x = np.asarray(x, dtype=float)
        if self.b == 0.0:
            return (self.a + self.c) * x
        return self.a / self.b * np.exp(self.b * x) + self.c * x

    def coefficients(self):
        return [self.a, self.b, self.c]


class SineSquared(Formula):
    """``a * sin(b*x)**2``; not quasi-unimodal, kept as a rejection fixture."""

    kind = "sin2"

    def __init__(self, a, b=1.0):
        self.a, self.b = float(a), float(b)

    def __call__(self, x):
        return self.a * np.sin(self.b * np.asarray(x, dtype=float)) ** 2

    def primitive(self, x):
        x = np.asarray(x, dtype=float)
        if self.b == 0.0:
            return np.zeros_like(x)
        return self.a * (0.5 * x - np.sin(2.0 * self.b * x) / (4.0 * self.b))

    def coefficients(self):
        return [self.a, self.b]


class Tabulated(Formula):
    """Linear interpolation through ``(x_i, y_i)``, held constant outside the table."""

    kind = "tabulated"

    def __init__(self, points):
        pts = np.asarray(points, dtype=float)
        if pts.ndim != 2 or pts.shape[1] != 2 or len(pts) < 2:
            raise InputError("tabulated formula needs at least two [x, y] points")
        if np.any(np.diff(pts[:, 0]) <= 0):
            raise InputError("tabulated x values must be strictly increasing")
        self.xs = pts[:, 0].copy()
        self.ys = pts[:, 1].copy()
        self.kinks = tuple(self.xs)
        # cumulative trapezoid integral at the nodes
        self._cum = np.concatenate([[0.0], np.cumsum(0.5 * np.diff(self.xs) * (self.ys[1:] + self.ys[:-1]))])

    def __call__(self, x):
        return np.interp(np.asarray(x, dtype=float), self.xs, self.ys)

    def primitive(self, x):
        x = np.asarray(x, dtype=float)
        xs, ys = self.xs, self.ys
        xc = np.clip(x, xs[0], xs[-1])
        i = np.clip(np.searchsorted(xs, xc, side="right") - 1, 0, len(xs) - 2)
        dx = xc - xs[i]
        slope = (ys[i + 1] - ys[i]) / (xs[i + 1] - xs[i])
        inside = self._cum[i] + ys[i] * dx + 0.5 * slope * dx * dx
        below = np.minimum(x - xs[0], 0.0) * ys[0]
        above = np.maximum(x - xs[-1], 0.0) * ys[-1]
        return inside + below + above

    def coefficients(self):
        return [[float(a), float(b)] for a, b in zip(self.xs, self.ys)]


class Custom(Formula):
    """Wraps a vectorized Python callable; integrated numerically. API use only."""

    kind = "custom"

    def __init__(self, fn: Callable, name: str = "custom"):
        self.fn = fn
        self.name = name

    def __call__(self, x):
        return np.asarray(self.fn(np.asarray(x, dtype=float)), dtype=float) * np.ones_like(x, dtype=float)

    def coefficients(self):
        raise InputError(f"custom formula {self.name!r} cannot be serialized")


def make_formula(kind: str, coefficients) -> Formula:
    c = coefficients
    try:
        if kind == "constant":
            return Constant(*c)
        if kind == "affine":
            return Affine(*c)
        if kind == "polynomial":
            return Polynomial(c)
        if kind == "power":
            return Power(*c)
        if kind == "exponential":
            return Exponential(*c)
        if kind == "sin2":
            return SineSquared(*c)
        if kind == "tabulated":
            return Tabulated(c)
    except TypeError as exc:
        raise InputError(f"bad coefficients for {kind!r}: {c!r}") from exc
    raise InputError(f"unknown formula kind {kind!r}")


# ---------------------------------------------------------------------------
# Potential
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Piece:
    lo: float  # -inf allowed
    hi: float  # +inf allowed
    formula: Formula


class Potential:
    """Piecewise potential ``g`` on the real line.

    ``antiderivative_mode`` is ``"exact"`` (closed-form primitives wherever a
    piece has one) or ``"numeric"`` (adaptive quadrature everywhere).
    """

    def __init__(self, pieces: Sequence[Piece], antiderivative_mode: str = "exact", name: str = ""):
        if antiderivative_mode not in ("exact", "numeric"):
            raise InputError(f"antiderivative_mode must be 'exact' or 'numeric', got {antiderivative_mode!r}")
        pieces = list(pieces)
        if not pieces:
            raise InputError("potential needs at least one piece")
        if pieces[0].lo != -math.inf or pieces[-1].hi != math.inf:
            raise InputError("first and last pieces must be unbounded")
        for left, right in zip(pieces[:-1], pieces[1:]):
            if left.hi != right.lo:
                raise InputError(f"pieces must be contiguous: {left.hi} != {right.lo}")
        for pc in pieces:
            if not pc.lo < pc.hi:
                raise InputError(f"empty piece domain [{pc.lo}, {pc.hi})")
        self.pieces = tuple(pieces)
        self.breakpoints = tuple(pc.lo for pc in pieces[1:])
        self.antiderivative_mode = antiderivative_mode
        self.name = name
        self._bps = np.asarray(self.breakpoints, dtype=float)
        cuts = set(self.breakpoints) | {0.0}
        for pc in pieces:
            cuts.update(k for k in pc.formula.kinks if pc.lo < k < pc.hi)
        self.cut_points = tuple(sorted(cuts))

    # -- evaluation ---------------------------------------------------------

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        if len(self.pieces) == 1:
            return self.pieces[0].formula(x)
        idx = np.searchsorted(self._bps, x, side="right")
        out = np.empty(x.shape, dtype=float)
        for i, pc in enumerate(self.pieces):
            mask = idx == i
            if np.any(mask):
                out[mask] = pc.formula(x[mask])
        return out

    def eval(self, x: float) -> float:
        return float(self(np.asarray([x], dtype=float))[0])

    def piece_at(self, x: float) -> Piece:
        return self.pieces[int(np.searchsorted(self._bps, x, side="right"))]

    # -- integration --------------------------------------------------------

    def integrate(self, a: float, b: float, tol: float = ANTIDERIVATIVE_TOL) -> float:
        """Signed integral of g from ``a`` to ``b``."""
        if a == b:
            return 0.0
        if a > b:
            return -self.integrate(b, a, tol)
        total = 0.0
        for pc in self.pieces:
            lo, hi = max(a, pc.lo), min(b, pc.hi)
            if lo >= hi:
                continue
            f = pc.formula
            if self.antiderivative_mode == "exact" and f.has_primitive:
                total += float(f.primitive(hi) - f.primitive(lo))
            else:
                total += quadrature.integrate(f, lo, hi, tol=tol, points=self.cut_points)
        return total

    def antiderivative(self, x: float) -> float:
        """G(x) = integral of g from 0 to x, so G(0) = 0 and G' = g."""
        return self.integrate(0.0, x)

    def with_mode(self, mode: str) -> "Potential":
        return Potential(self.pieces, antiderivative_mode=mode, name=self.name)

    # -- serialization ------------------------------------------------------

    def to_dict(self) -> dict:
        def end(v):
            return None if math.isinf(v) else v

        return {
            "antiderivative_mode": self.antiderivative_mode,
            "pieces": [
                {"domain": [end(pc.lo), end(pc.hi)], "kind": pc.formula.kind,
                 "coefficients": pc.formula.coefficients()}
                for pc in self.pieces
            ],
        }

    def __repr__(self):
        label = self.name or "+".join(pc.formula.kind for pc in self.pieces)
        return f"Potential({label})"


def eval(p: Potential, x: float) -> float:  # noqa: A001 - mirrors the operation name
    return p.eval(x)


def antiderivative(p: Potential, x: float) -> float:
    return p.antiderivative(x)


def from_pieces(spec: Sequence[tuple], antiderivative_mode="exact", name="") -> Potential:
    """Build from ``(lo, hi, formula)`` triples; ``None`` bounds mean infinity."""
    pieces = []
    for lo, hi, formula in spec:
        pieces.append(Piece(-math.inf if lo is None else float(lo),
                            math.inf if hi is None else float(hi), formula))
    return Potential(pieces, antiderivative_mode=antiderivative_mode, name=name)


def from_callable(fn: Callable, name: str = "custom", breakpoints: Sequence[float] = ()) -> Potential:
    """Single-formula potential from a vectorized callable (numeric antiderivative)."""
    bps = sorted(breakpoints)
    edges = [None] + list(bps) + [None]
    f = Custom(fn, name)
    return from_pieces([(lo, hi, f) for lo, hi in zip(edges[:-1], edges[1:])], name=name)


# ---------------------------------------------------------------------------
# Builtin families
# ---------------------------------------------------------------------------

def _family_zero(**_):
    return from_pieces([(None, None, Constant(0.0))], name="zero")


def _family_abs(scale=1.0):
    return from_pieces([(None, None, Power(scale, 1.0))], name="abs")


def _family_power(p=2.0, scale=1.0):
    return from_pieces([(None, None, Power(scale, p))], name=f"power{p:g}")


def _family_piecewise_linear(left=2.0, right=1.0):
    return from_pieces([(None, 0.0, Affine(0.0, -left)), (0.0, None, Affine(0.0, right))],
                       name="piecewise_linear")


def _family_one_sided(scale=1.0, side="right"):
    if side == "right":
        spec = [(None, 0.0, Constant(0.0)), (0.0, None, Affine(0.0, scale))]
    elif side == "left":
        spec = [(None, 0.0, Affine(0.0, -scale)), (0.0, None, Constant(0.0))]
    else:
        raise InputError(f"side must be 'left' or 'right', got {side!r}")
    return from_pieces(spec, name=f"one_sided_{side}")


def _family_exp(rate=1.0):
    return from_pieces([(None, 0.0, Exponential(1.0, -rate, -1.0)),
                        (0.0, None, Exponential(1.0, rate, -1.0))], name="exp")


def _family_flat_valley(width=1.0):
    return from_pieces([(None, -width, Affine(-width, -1.0)),
                        (-width, width, Constant(0.0)),
                        (width, None, Affine(-width, 1.0))], name="flat_valley")


def _family_sin2(scale=1.0, freq=1.0):
    return from_pieces([(None, None, SineSquared(scale, freq))], name="sin2")


FAMILIES = {
    "zero": _family_zero,
    "abs": _family_abs,
    "power": _family_power,
    "piecewise_linear": _family_piecewise_linear,
    "one_sided": _family_one_sided,
    "exp": _family_exp,
    "flat_valley": _family_flat_valley,
    "sin2": _family_sin2,
}


def family(name: str, **params) -> Potential:
    try:
        builder = FAMILIES[name]
    except KeyError:
        raise InputError(f"unknown family {name!r}; choose from {sorted(FAMILIES)}") from None
    try:
        p = builder(**params)
    except TypeError as exc:
        raise InputError(f"bad parameters for family {name!r}: {params}") from exc
    p.family_spec = {"family": name, "params": dict(params)}
    return p


def from_dict(doc: dict) -> Potential:
    """Parse a potential document (pieces list or ``{family, params}``)."""
    if not isinstance(doc, dict):
        raise InputError("potential document must be an object")
    mode = doc.get("antiderivative_mode", "exact")
    if "family" in doc:
        p = family(doc["family"], **(doc.get("params") or {}))
        return p.with_mode(mode) if mode != p.antiderivative_mode else p
    if "pieces" not in doc:
        raise InputError("potential document needs 'pieces' or 'family'")
    spec = []
    for raw in doc["pieces"]:
        try:
            lo, hi = raw["domain"]
            spec.append((lo, hi, make_formula(raw["kind"], raw["coefficients"])))
        except (KeyError, ValueError) as exc:
            raise InputError(f"malformed piece {raw!r}") from exc
    return from_pieces(spec, antiderivative_mode=mode, name=doc.get("name", ""))


def load(path) -> Potential:
    import json

    try:
        with open(path) as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read potential file {path}: {exc}") from exc
    return from_dict(doc)


# ---------------------------------------------------------------------------
# Admissibility and zero structure
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Violation:
    x: float
    kind: str


@dataclass(frozen=True)
class AdmissibilityReport:
    violations: tuple = ()
    samples_used: int = 0

    @property
    def is_admissible(self) -> bool:
        return not self.violations

    def kinds(self) -> set:
        return {v.kind for v in self.violations}

    def to_dict(self) -> dict:
        return {"is_admissible": self.is_admissible, "samples_used": self.samples_used,
                "violations": [{"x": v.x, "kind": v.kind} for v in self.violations]}


def _sample_grid(p: Potential, lo: float, hi: float, n: int) -> np.ndarray:
    xs = np.linspace(lo, hi, n)
    extra = [0.0]
    for b in p.cut_points:
        if lo <= b <= hi:
            # the value at b belongs to the right piece, so also probe the left limit
            extra += [b, np.nextafter(b, -np.inf)]
    return np.unique(np.concatenate([xs, extra]))


def _runs(xs, flags, kind):
    """One violation per maximal run of consecutive flagged samples."""
    out = []
    prev = False
    for x, f in zip(xs, flags):
        if f and not prev:
            out.append(Violation(float(x), kind))
        prev = bool(f)
    return out


def check_admissible(p: Potential, window: float = 10.0, n_samples: int = 4001) -> AdmissibilityReport:
    """Necessary-condition sampler for convex sub-level sets.

    Samples g on ``[-window, window]`` (breakpoints always included) and
    flags g(0) != 0, negative values, strict decreases on [0, inf) and strict
    increases on (-inf, 0]. Passing does not prove admissibility; it only
    means no counterexample was seen at this density.
    """
    if window <= 0 or n_samples < 3:
        raise InputError("check_admissible needs window > 0 and n_samples >= 3")
    xs = _sample_grid(p, -window, window, n_samples)
    gs = p(xs)
    violations = []
    g0 = float(p.piece_at(0.0).formula(np.asarray(0.0)))
    if g0 != 0.0:
        violations.append(Violation(0.0, NONZERO_AT_ORIGIN))
    violations += _runs(xs, gs < 0.0, NEGATIVE_VALUE)

    right = xs >= 0.0
    xr, gr = xs[right], gs[right]
    violations += _runs(xr[1:], gr[1:] < gr[:-1] - MONOTONE_SLACK, BREAK_RIGHT)
    left = xs <= 0.0
    xl, gl = xs[left], gs[left]
    violations += _runs(xl[1:], gl[1:] > gl[:-1] + MONOTONE_SLACK, BREAK_LEFT)
    # non-finite values are never admissible
    violations += _runs(xs, ~np.isfinite(gs), NEGATIVE_VALUE)
    return AdmissibilityReport(tuple(violations), int(len(xs)))


@dataclass(frozen=True)
class ZeroStructure:
    tag: str
    witness_xr: Optional[float] = None
    witness_xl: Optional[float] = None
    scan_cap: float = field(default=0.0)

    def __post_init__(self):
        if self.tag == POSITIVE_BOTH and (self.witness_xr is None or self.witness_xl is None):
            raise ValueError("PositiveOnBothSides requires both witnesses")


def _scan_side(p: Potential, sign: float, window: float, cap: float) -> Optional[float]:
    w = window
    while True:
        x = sign * w
        if p.eval(x) > POSITIVE_THRESHOLD:
            return x
        if w >= cap:
            return None
        w = min(2.0 * w, cap)


def classify_zero_structure(p: Potential, window: float = 1.0, cap: Optional[float] = None,
                            mass: float = 1.0) -> ZeroStructure:
    """Decide which half-lines carry positive potential.

    Monotonicity means g(w) > 0 for some w > 0 iff g is positive at the far
    end of any scanned range, so only the doubling endpoints are probed. A
    side with no witness up to ``cap`` (default ``2**16 * max(1, mass)``) is
    reported as identically zero on the scanned range.
    """
    if cap is None:
        cap = 2.0 ** 16 * max(1.0, mass)
    window = min(window, cap)
    xr = _scan_side(p, 1.0, window, cap)
    if xr is None:
        return ZeroStructure(ZERO_ON_RIGHT, None, None, cap)
    xl = _scan_side(p, -1.0, window, cap)
    if xl is None:
        return ZeroStructure(ZERO_ON_LEFT, xr, None, cap)
    return ZeroStructure(POSITIVE_BOTH, xr, xl, cap)
