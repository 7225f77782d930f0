"""Birkhoff angle calculus: classification, gamma, gamma*, the cosine k,
angle comparison and the Pythagorean / isosceles comparison angles."""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .exceptions import DimensionError, ZeroVectorError
from .norms import as_vector, check_pair
from .profile import (
    DEFAULT_TOL,
    Method,
    Side,
    _auto_method,
    _require_nonzero,
    _side_from_derivatives,
    one_sided_derivatives,
    solve_side,
)

__all__ = [
    "AngleClass",
    "Verdict",
    "AngleReport",
    "Comparison",
    "SweepRow",
    "DEFAULT_TIE_TOL",
    "classify",
    "gamma",
    "gamma_star",
    "cosine_k",
    "angle_report",
    "compare_same_base",
    "compare_same_target",
    "pythagorean_angle",
    "isosceles_angle",
    "sweep_k",
]

DEFAULT_TIE_TOL = 1e-9
ARCCOS_SPILL = 1e-12


class AngleClass(enum.Enum):
    PROPER_ACUTE = "ProperAcute"
    ORTHOGONAL = "Orthogonal"
    PROPER_OBTUSE = "ProperObtuse"

    @property
    def sign(self) -> int:
        return {"ProperAcute": 1, "Orthogonal": 0, "ProperObtuse": -1}[self.value]

    @property
    def side(self) -> Side:
        return _CLASS_SIDE[self]


_CLASS_SIDE = {
    AngleClass.PROPER_ACUTE: Side.NEGATIVE,
    AngleClass.ORTHOGONAL: Side.EMPTY,
    AngleClass.PROPER_OBTUSE: Side.POSITIVE,
}
_SIDE_CLASS = {v: k for k, v in _CLASS_SIDE.items()}


class Verdict(enum.Enum):
    MORE_ACUTE = "MoreAcute"
    SAME = "Same"
    MORE_OBTUSE = "MoreObtuse"

    def flipped(self) -> "Verdict":
        return {
            Verdict.MORE_ACUTE: Verdict.MORE_OBTUSE,
            Verdict.MORE_OBTUSE: Verdict.MORE_ACUTE,
            Verdict.SAME: Verdict.SAME,
        }[self]


@dataclass(frozen=True)
class AngleReport:
    angle_class: AngleClass
    gamma: float
    gamma_star: float
    k: float
    gamma_hat: float
    method: Method
    norm_x: float
    norm_y: float

    def as_dict(self) -> dict:
        return {
            "class": self.angle_class.value,
            "gamma": self.gamma,
            "gamma_star": self.gamma_star,
            "k": self.k,
            "gamma_hat": self.gamma_hat,
            "method": self.method.value,
            "norm_x": self.norm_x,
            "norm_y": self.norm_y,
        }


@dataclass(frozen=True)
class Comparison:
    """Outcome of comparing two B-angles.

    ``mixed`` is set when the two angles fall in different classes; the
    verdict then follows ProperAcute > Orthogonal > ProperObtuse.
    """

    verdict: Verdict
    gamma_hat_first: float
    gamma_hat_second: float
    tie_tolerance: float
    class_first: AngleClass
    class_second: AngleClass
    mixed: bool = False

    def as_dict(self) -> dict:
        return {
            "verdict": self.verdict.value,
            "mixed": self.mixed,
            "class_first": self.class_first.value,
            "class_second": self.class_second.value,
            "gamma_hat_first": self.gamma_hat_first,
            "gamma_hat_second": self.gamma_hat_second,
            "tie_tolerance": self.tie_tolerance,
        }


@dataclass(frozen=True)
class SweepRow:
    theta: float
    k: float
    angle_class: AngleClass
    gamma_hat: float


def classify(spec, x, y, tol: float = DEFAULT_TOL) -> AngleClass:
    """Proper acute, orthogonal or proper obtuse B-angle from x to y.

    Zero vectors are orthogonal to everything (and everything to them).
    """
    x, y = check_pair(spec, x, y)
    nx, ny = spec(x), spec(y)
    if nx == 0 or ny == 0:
        return AngleClass.ORTHOGONAL
    side = _side_from_derivatives(one_sided_derivatives(spec, x, y), ny)
    return _SIDE_CLASS[side]


def _gamma_for(spec, x, y, cls: AngleClass, tol, method=None) -> float:
    return solve_side(spec, x, y, cls.side, tol=tol, method=method).gamma


def gamma(spec, x, y, tol: float = DEFAULT_TOL, method=None) -> float:
    """Width of the interval on which ``||x + lam*y|| < ||x||`` (0 if orthogonal)."""
    x, y = check_pair(spec, x, y)
    _require_nonzero(spec, x, y)
    return _gamma_for(spec, x, y, classify(spec, x, y), tol, method)


def gamma_star(spec, x, y, tol: float = DEFAULT_TOL, method=None) -> float:
    """``||y||/||x|| * gamma(x, y)``; invariant under positive rescaling of x and y."""
    x, y = check_pair(spec, x, y)
    nx, ny = _require_nonzero(spec, x, y)
    return ny / nx * gamma(spec, x, y, tol, method)


def angle_report(spec, x, y, tol: float = DEFAULT_TOL, method=None) -> AngleReport:
    """Class, gamma, gamma*, gamma on unit vectors and k for one pair.

    Total: a zero x or y yields an orthogonal report with all quantities 0.
    """
    x, y = check_pair(spec, x, y)
    nx, ny = spec(x), spec(y)
    used = _auto_method(spec) if method is None else Method(method)
    cls = classify(spec, x, y)
    if cls is AngleClass.ORTHOGONAL:
        return AngleReport(cls, 0.0, 0.0, 0.0, 0.0, used, nx, ny)
    g = _gamma_for(spec, x, y, cls, tol, method)
    # unit vectors have gamma <= 2; rounding in x/||x|| can push the bound up by an ulp
    g_hat = min(_gamma_for(spec, x / nx, y / ny, cls, tol, method), 2.0)
    return AngleReport(cls, g, ny / nx * g, cls.sign * g_hat / 2, g_hat, used, nx, ny)


def cosine_k(spec, x, y, tol: float = DEFAULT_TOL, method=None) -> float:
    """The cosine analog k(x, y) = +-gamma(x_hat, y_hat)/2, signed by the angle class."""
    x, y = check_pair(spec, x, y)
    _require_nonzero(spec, x, y)
    return angle_report(spec, x, y, tol, method).k


_RANK = {AngleClass.PROPER_ACUTE: 2, AngleClass.ORTHOGONAL: 1, AngleClass.PROPER_OBTUSE: 0}


def _compare(spec, pair1, pair2, tie_tol, tol) -> Comparison:
    r1 = angle_report(spec, *pair1, tol=tol)
    r2 = angle_report(spec, *pair2, tol=tol)
    c1, c2 = r1.angle_class, r2.angle_class
    g1, g2 = r1.gamma_hat, r2.gamma_hat
    if c1 is not c2:
        verdict = Verdict.MORE_ACUTE if _RANK[c1] > _RANK[c2] else Verdict.MORE_OBTUSE
        return Comparison(verdict, g1, g2, tie_tol, c1, c2, mixed=True)
    if abs(g1 - g2) <= tie_tol:
        verdict = Verdict.SAME
    else:
        verdict = Verdict.MORE_ACUTE if g1 > g2 else Verdict.MORE_OBTUSE
        if c1 is AngleClass.PROPER_OBTUSE:
            # a wider failure interval on the obtuse side is a more obtuse angle
            verdict = verdict.flipped()
    return Comparison(verdict, g1, g2, tie_tol, c1, c2)


def compare_same_base(spec, x, y1, y2, tie_tol: float = DEFAULT_TIE_TOL, tol: float = DEFAULT_TOL) -> Comparison:
    """Compare the B-angle from x to y1 with the one from x to y2."""
    for name, v in (("x", x), ("y1", y1), ("y2", y2)):
        _nonzero(spec, v, name)
    return _compare(spec, (x, y1), (x, y2), tie_tol, tol)


def compare_same_target(spec, x1, x2, y, tie_tol: float = DEFAULT_TIE_TOL, tol: float = DEFAULT_TOL) -> Comparison:
    """Compare the B-angle from x1 to y with the one from x2 to y."""
    for name, v in (("x1", x1), ("x2", x2), ("y", y)):
        _nonzero(spec, v, name)
    return _compare(spec, (x1, y), (x2, y), tie_tol, tol)


def _nonzero(spec, v, name):
    v = as_vector(v, name)
    spec.check_dim(len(v))
    if spec(v) == 0:
        raise ZeroVectorError(f"{name} must be nonzero")


def _arccos(arg: float) -> float:
    if abs(arg) > 1 + ARCCOS_SPILL:
        raise ValueError(f"arccos argument {arg!r} is outside [-1, 1]; is the spec a norm?")
    return math.acos(min(1.0, max(-1.0, arg)))


def pythagorean_angle(spec, x, y) -> float:
    """Angle between x and y from the Pythagorean orthogonality relation."""
    x, y = check_pair(spec, x, y)
    nx, ny = _require_nonzero(spec, x, y)
    return _arccos((nx**2 + ny**2 - spec(x - y) ** 2) / (2 * nx * ny))


def isosceles_angle(spec, x, y) -> float:
    """Angle between x and y from the isosceles orthogonality relation."""
    x, y = check_pair(spec, x, y)
    nx, ny = _require_nonzero(spec, x, y)
    return _arccos((spec(x + y) ** 2 - spec(x - y) ** 2) / (4 * nx * ny))


def sweep_k(spec, x, thetas, tol: float = DEFAULT_TOL) -> list[SweepRow]:
    """k(x, (cos t, sin t)) for every t in ``thetas``; planar x only."""
    x = as_vector(x, "x")
    if len(x) != 2:
        raise DimensionError(f"sweep needs a vector in R^2, got dimension {len(x)}")
    spec.check_dim(2)
    if spec(x) == 0:
        raise ZeroVectorError("x must be nonzero")
    thetas = np.asarray(thetas, dtype=float)
    if np.any(thetas <= -math.pi) or np.any(thetas > math.pi):
        raise ValueError("sweep angles must lie in (-pi, pi]")
    rows = []
    for t in thetas:
        r = angle_report(spec, x, np.array([math.cos(t), math.sin(t)]), tol=tol)
        rows.append(SweepRow(float(t), r.k, r.angle_class, r.gamma_hat))
    return rows
