"""The radial profile f(lam) = ||x + lam*y|| and its strict sublevel set.

For nonzero x and y the set ``{lam : f(lam) < ||x||}`` is either empty,
``(-gamma, 0)`` or ``(0, gamma)``, with ``gamma <= 2||x||/||y||``.  Which
case applies is read off the one-sided derivatives of the convex profile at
0; the far endpoint is then located exactly (piecewise-linear and quadratic
norms) or by bisection.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .exceptions import ConvergenceError, ZeroVectorError
from .norms import NormClass, check_pair

__all__ = [
    "Side",
    "Method",
    "SublevelInterval",
    "DerivativePair",
    "DEFAULT_TOL",
    "DERIV_EPS",
    "profile_eval",
    "one_sided_derivatives",
    "sublevel_side",
    "sublevel_interval",
    "sublevel_interval_pl_exact",
    "sublevel_interval_quadratic_exact",
    "sublevel_interval_bisection",
]

DEFAULT_TOL = 1e-10
# |d| <= DERIV_EPS * ||y|| counts as a zero derivative
DERIV_EPS = 1e-9
# relative tie band for "active" coordinates of a piecewise-linear norm
ACTIVE_RTOL = 1e-12
QUADRATIC_ZERO_RTOL = 1e-12
FD_STEPS = (1e-4, 1e-6, 1e-8)
MAX_BISECTION_ITER = 200
MAX_HALVINGS = 60
# rounding allowance when the sublevel set reaches the bracket end
BRACKET_RTOL = 1e-12


class Side(enum.Enum):
    EMPTY = "Empty"
    NEGATIVE = "NegativeSide"
    POSITIVE = "PositiveSide"


class Method(enum.Enum):
    EXACT_PL = "ExactPL"
    EXACT_QUADRATIC = "ExactQuadratic"
    BISECTION = "Bisection"


@dataclass(frozen=True)
class SublevelInterval:
    """The strict sublevel set S(x, y) in one of its three possible shapes.

    ``NEGATIVE`` means S = (-gamma, 0), ``POSITIVE`` means S = (0, gamma);
    ``gamma`` is 0.0 for ``EMPTY``.  ``endpoint_residual`` is
    ``|f(endpoint) - ||x|||`` at the far endpoint.
    """

    side: Side
    gamma: float
    method: Method
    endpoint_residual: float = 0.0

    def __post_init__(self):
        if self.side is Side.EMPTY:
            if self.gamma != 0:
                raise ValueError("an empty sublevel set has gamma == 0")
        elif not self.gamma > 0:
            raise ValueError(f"gamma must be strictly positive, got {self.gamma!r}")

    @property
    def is_empty(self) -> bool:
        return self.side is Side.EMPTY

    @property
    def bounds(self):
        """``(lo, hi)`` of the open interval, or ``None`` when empty."""
        if self.side is Side.NEGATIVE:
            return (-self.gamma, 0.0)
        if self.side is Side.POSITIVE:
            return (0.0, self.gamma)
        return None

    def __contains__(self, lam) -> bool:
        b = self.bounds
        return b is not None and b[0] < lam < b[1]


@dataclass(frozen=True)
class DerivativePair:
    """Left and right derivatives of the profile at 0.

    ``step`` is ``None`` for closed-form values, else the finite-difference
    step that produced them.
    """

    d_minus: float
    d_plus: float
    step: float | None = None

    @property
    def is_exact(self) -> bool:
        return self.step is None


def _profile(spec, x, y):
    return lambda lam: float(spec.rows((x + lam * y)[None, :])[0])


def profile_eval(spec, x, y, lam: float) -> float:
    """``||x + lam*y||`` under ``spec``."""
    x, y = check_pair(spec, x, y)
    lam = float(lam)
    if not math.isfinite(lam):
        raise ValueError(f"lambda must be finite, got {lam!r}")
    return _profile(spec, x, y)(lam)


def _require_nonzero(spec, x, y):
    nx, ny = spec(x), spec(y)
    if nx == 0:
        raise ZeroVectorError("x must be nonzero")
    if ny == 0:
        raise ZeroVectorError("y must be nonzero")
    return nx, ny


def _pl_derivatives(spec, x, y) -> DerivativePair:
    u = spec.pl_coordinates(x)
    v = spec.pl_coordinates(y)
    au = np.abs(u)
    m = au.max()
    if spec.pl_kind == "l1":
        zero = au <= ACTIVE_RTOL * m
        smooth = float(np.sum(np.sign(u[~zero]) * v[~zero]))
        kink = float(np.sum(np.abs(v[zero])))
        return DerivativePair(smooth - kink, smooth + kink)
    active = au >= m * (1 - ACTIVE_RTOL)
    slopes = np.sign(u[active]) * v[active]
    return DerivativePair(float(slopes.min()), float(slopes.max()))


def _fd_derivatives(spec, x, y, nx, ny) -> DerivativePair:
    f = _profile(spec, x, y)
    scale = nx / ny
    h = None
    for step in FD_STEPS:
        # quotients are monotone in h for convex f; the smallest step wins
        h = step * scale
        d_plus = (f(h) - nx) / h
        d_minus = (nx - f(-h)) / h
    return DerivativePair(d_minus, d_plus, step=FD_STEPS[-1])


def one_sided_derivatives(spec, x, y) -> DerivativePair:
    """One-sided derivatives of ``lam -> ||x + lam*y||`` at ``lam = 0``.

    Closed form for quadratic, piecewise-linear and (smooth) l_p norms;
    finite differences for anything else.
    """
    x, y = check_pair(spec, x, y)
    nx, ny = _require_nonzero(spec, x, y)
    cls = spec.norm_class
    if cls is NormClass.QUADRATIC:
        d = float(x @ spec.gram(len(x)) @ y) / nx
        return DerivativePair(d, d)
    if cls is NormClass.PIECEWISE_LINEAR:
        return _pl_derivatives(spec, x, y)
    g = spec.gradient(x)
    if g is not None:
        d = float(g @ y)
        return DerivativePair(d, d)
    return _fd_derivatives(spec, x, y, nx, ny)


def _side_from_derivatives(d: DerivativePair, ny: float) -> Side:
    eps = DERIV_EPS * ny
    if d.d_plus < -eps:
        return Side.POSITIVE
    if d.d_minus > eps:
        return Side.NEGATIVE
    return Side.EMPTY


def sublevel_side(spec, x, y) -> Side:
    """Which side of 0 the strict sublevel set lies on (EMPTY if none)."""
    x, y = check_pair(spec, x, y)
    _, ny = _require_nonzero(spec, x, y)
    return _side_from_derivatives(one_sided_derivatives(spec, x, y), ny)


# --------------------------------------------------------------------------
# far-endpoint solvers.  Each one returns gamma for the NEGATIVE side; the
# positive side is handled by flipping y, since f_{x,-y}(lam) = f_{x,y}(-lam).


def _pl_breakpoints(kind, u, v):
    nz = v != 0
    pts = [-u[nz] / v[nz]]
    if kind == "linf":
        i, j = np.triu_indices(len(u), k=1)
        for su in (-1.0, 1.0):
            den = v[i] + su * v[j]
            ok = den != 0
            pts.append(-(u[i][ok] + su * u[j][ok]) / den[ok])
    return np.concatenate(pts)


def _pl_affine_piece(kind, u, v, lam):
    """Coefficients (a, b) with f = a + b*lam on the linear piece containing ``lam``."""
    r = u + lam * v
    if kind == "l1":
        s = np.sign(r)
        return float(s @ u), float(s @ v)
    i = int(np.argmax(np.abs(r)))
    s = 1.0 if r[i] >= 0 else -1.0
    return s * u[i], s * v[i]


def _negative_gamma_pl(spec, x, y, nx, ny):
    kind = spec.pl_kind
    u = spec.pl_coordinates(x)
    v = spec.pl_coordinates(y)
    bound = 2 * nx / ny
    f = _profile(spec, x, y)

    bp = _pl_breakpoints(kind, u, v)
    bp = np.unique(bp[(bp < 0) & (bp > -bound)])[::-1]
    pts = [0.0, *bp.tolist(), -bound]
    j = len(pts) - 1
    for k in range(1, len(pts)):
        if f(pts[k]) >= nx:
            j = k
            break
    lo, hi = pts[j], pts[j - 1]
    a, b = _pl_affine_piece(kind, u, v, 0.5 * (lo + hi))
    lam = (nx - a) / b if b < 0 else lo
    lam = min(max(lam, lo), hi)
    return -lam


def _negative_gamma_quadratic(spec, x, y, nx, ny):
    g = spec.gram(len(x))
    return 2 * abs(float(x @ g @ y)) / float(y @ g @ y)


def _negative_gamma_bisection(spec, x, y, nx, ny, tol):
    f = _profile(spec, x, y)
    scale = nx / ny
    bound = 2 * scale

    # interior point: scan geometrically in from the bracket, then halve in from -tol
    inner = None
    candidates = [bound * 0.5**k for k in range(1, MAX_HALVINGS + 1)]
    candidates += [tol * scale * 0.5**k for k in range(MAX_HALVINGS + 1)]
    for c in candidates:
        if f(-c) < nx:
            inner = -c
            break
    if inner is None:
        raise ConvergenceError(
            "no point of the strict sublevel set is resolvable in floating point; "
            "the pair is numerically orthogonal"
        )

    outer = -bound
    f_outer = f(outer)
    if f_outer < nx:
        # f(-bound) >= ||x|| always, with equality when x - bound*y = -x up to rounding
        if f_outer >= nx * (1 - BRACKET_RTOL):
            return bound
        raise ConvergenceError(
            f"f(-2||x||/||y||) < ||x||: the spec violates the triangle inequality"
        )
    for _ in range(MAX_BISECTION_ITER):
        mid = 0.5 * (inner + outer)
        if mid == inner or mid == outer:
            break
        if f(mid) < nx:
            inner = mid
        else:
            outer = mid
    else:
        if inner - outer > tol * scale:
            raise ConvergenceError(f"bisection did not converge in {MAX_BISECTION_ITER} iterations")
    return -0.5 * (inner + outer)


_SOLVERS = {
    Method.EXACT_PL: lambda spec, x, y, nx, ny, tol: _negative_gamma_pl(spec, x, y, nx, ny),
    Method.EXACT_QUADRATIC: lambda spec, x, y, nx, ny, tol: _negative_gamma_quadratic(spec, x, y, nx, ny),
    Method.BISECTION: _negative_gamma_bisection,
}


def _auto_method(spec) -> Method:
    cls = spec.norm_class
    if cls is NormClass.PIECEWISE_LINEAR:
        return Method.EXACT_PL
    if cls is NormClass.QUADRATIC:
        return Method.EXACT_QUADRATIC
    return Method.BISECTION


def _solve_side(spec, x, y, side: Side, method: Method, tol: float, nx: float, ny: float) -> SublevelInterval:
    if side is Side.EMPTY:
        return SublevelInterval(Side.EMPTY, 0.0, method)
    yy = y if side is Side.NEGATIVE else -y
    gamma = _SOLVERS[method](spec, x, yy, nx, ny, tol)
    gamma = float(min(gamma, 2 * nx / ny))
    endpoint = -gamma if side is Side.NEGATIVE else gamma
    residual = float(abs(_profile(spec, x, y)(endpoint) - nx))
    return SublevelInterval(side, gamma, method, residual)


def _check_tol(tol):
    if not tol > 0:
        raise ValueError(f"tol must be positive, got {tol!r}")


def sublevel_interval(spec, x, y, tol: float = DEFAULT_TOL, method=None) -> SublevelInterval:
    """Compute S(x, y) = {lam : ||x + lam*y|| < ||x||}.

    ``method`` defaults to the exact solver for the norm class, falling back
    to bisection; pass a :class:`Method` (or its value string) to force one.
    ``tol`` is relative to the natural scale ``||x||/||y||`` of lam.
    """
    _check_tol(tol)
    x, y = check_pair(spec, x, y)
    nx, ny = _require_nonzero(spec, x, y)
    method = _auto_method(spec) if method is None else Method(method)
    if method is not Method.BISECTION and method is not _auto_method(spec):
        raise TypeError(f"{method.value} is not available for {spec!r}")
    side = _side_from_derivatives(one_sided_derivatives(spec, x, y), ny)
    return _solve_side(spec, x, y, side, method, tol, nx, ny)


def sublevel_interval_pl_exact(spec, x, y) -> SublevelInterval:
    """Exact S(x, y) for l1 / linf (optionally weighted) norms."""
    if spec.norm_class is not NormClass.PIECEWISE_LINEAR:
        raise TypeError(f"{spec!r} is not piecewise linear")
    return sublevel_interval(spec, x, y, method=Method.EXACT_PL)


def sublevel_interval_quadratic_exact(spec, x, y) -> SublevelInterval:
    """Closed form for inner-product norms: gamma = 2|<x,y>| / ||y||^2."""
    if spec.norm_class is not NormClass.QUADRATIC:
        raise TypeError(f"{spec!r} is not induced by an inner product")
    x, y = check_pair(spec, x, y)
    nx, ny = _require_nonzero(spec, x, y)
    ip = float(x @ spec.gram(len(x)) @ y)
    if abs(ip) <= QUADRATIC_ZERO_RTOL * nx * ny:
        side = Side.EMPTY
    else:
        side = Side.NEGATIVE if ip > 0 else Side.POSITIVE
    return _solve_side(spec, x, y, side, Method.EXACT_QUADRATIC, DEFAULT_TOL, nx, ny)


def sublevel_interval_bisection(spec, x, y, tol: float = DEFAULT_TOL) -> SublevelInterval:
    """S(x, y) by derivative classification plus bracket-and-bisect."""
    return sublevel_interval(spec, x, y, tol=tol, method=Method.BISECTION)


def solve_side(spec, x, y, side: Side, tol: float = DEFAULT_TOL, method=None) -> SublevelInterval:
    """Like :func:`sublevel_interval` but with the side supplied by the caller."""
    _check_tol(tol)
    x, y = check_pair(spec, x, y)
    nx, ny = _require_nonzero(spec, x, y)
    method = _auto_method(spec) if method is None else Method(method)
    return _solve_side(spec, x, y, side, method, tol, nx, ny)
