"""Brute-force checks of the profile solvers.

Everything here works by evaluating ``||x + lam*y||`` on dense uniform grids;
no derivatives, breakpoints or bisection are involved, so the results are an
independent reference for :mod:`birkhoff_angles.profile`.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .norms import check_pair
from .profile import Side, _require_nonzero

__all__ = [
    "ScanResult",
    "TheoremReport",
    "OracleEstimate",
    "grid_scan",
    "oracle_gamma",
    "verify_sublevel_theorem",
    "verify_local_global",
    "random_vector",
]

MIN_POINTS = 10_000


def _values(spec, x, y, lams: np.ndarray) -> np.ndarray:
    return spec.rows(x[None, :] + lams[:, None] * y[None, :])


@dataclass(frozen=True)
class ScanResult:
    """Strict-sublevel membership on the grid ``step * k``, ``|k| <= half``.

    The grid always contains 0 (at index ``half``) and both ends of the
    bracket ``(-2||x||/||y||, 2||x||/||y||)``.
    """

    lambdas_below: np.ndarray
    indices: np.ndarray
    grid_step: float
    bracket: tuple
    half: int
    norm_x: float
    norm_y: float

    @property
    def is_empty(self) -> bool:
        return self.indices.size == 0

    @property
    def side(self) -> Side:
        if self.is_empty:
            return Side.EMPTY
        return Side.NEGATIVE if self.lambdas_below[0] < 0 else Side.POSITIVE

    def is_contiguous(self) -> bool:
        return self.is_empty or bool(np.all(np.diff(self.indices) == 1))


def _grid(bound: float, num_points: int):
    half = max(num_points // 2, 1)
    step = bound / half
    lams = np.arange(-half, half + 1) * step
    lams[0], lams[-1] = -bound, bound
    return lams, step, half


def grid_scan(spec, x, y, num_points: int = MIN_POINTS) -> ScanResult:
    """Scan the strict sublevel set of ``lam -> ||x + lam*y||`` on a uniform grid."""
    if num_points < MIN_POINTS:
        raise ValueError(f"num_points must be at least {MIN_POINTS}, got {num_points}")
    x, y = check_pair(spec, x, y)
    nx, ny = _require_nonzero(spec, x, y)
    bound = 2 * nx / ny
    lams, step, half = _grid(bound, num_points)
    idx = np.flatnonzero(_values(spec, x, y, lams) < nx)
    return ScanResult(lams[idx], idx, step, (-bound, bound), half, nx, ny)


@dataclass(frozen=True)
class OracleEstimate:
    side: Side
    gamma: float
    resolution: float


def oracle_gamma(spec, x, y, num_points: int = MIN_POINTS, scan: ScanResult | None = None) -> OracleEstimate:
    """Estimate S(x, y) by a coarse scan followed by a zoomed rescan.

    The zoom rescans the single coarse cell that contains the far endpoint
    (or the two cells around 0 when the coarse scan finds nothing) with the
    same number of points, so the returned ``gamma`` is within
    ``resolution`` of the true value for any valid norm.  A ``scan`` of the
    same pair may be passed in to skip the coarse pass.
    """
    if scan is None:
        scan = grid_scan(spec, x, y, num_points)
    x, y = check_pair(spec, x, y)
    nx, step = scan.norm_x, scan.grid_step

    if scan.is_empty:
        fine = np.linspace(-step, step, num_points)
        below = fine[_values(spec, x, y, fine) < nx]
        if below.size == 0:
            return OracleEstimate(Side.EMPTY, 0.0, 0.0)
        if below[0] < 0:
            return _refine(spec, x, y, nx, -step, below.min(), num_points, Side.NEGATIVE)
        return _refine(spec, x, y, nx, below.max(), step, num_points, Side.POSITIVE)

    if scan.side is Side.NEGATIVE:
        inner = scan.lambdas_below.min()
        return _refine(spec, x, y, nx, inner - step, inner, num_points, Side.NEGATIVE)
    inner = scan.lambdas_below.max()
    return _refine(spec, x, y, nx, inner, inner + step, num_points, Side.POSITIVE)


def _refine(spec, x, y, nx, lo, hi, num_points, side) -> OracleEstimate:
    fine = np.linspace(lo, hi, num_points)
    inside = _values(spec, x, y, fine) < nx
    h = (hi - lo) / (num_points - 1)
    if side is Side.NEGATIVE:
        first = fine[np.argmax(inside)]
        return OracleEstimate(side, -(first - 0.5 * h), 0.5 * h)
    last = fine[len(fine) - 1 - np.argmax(inside[::-1])]
    return OracleEstimate(side, last + 0.5 * h, 0.5 * h)


@dataclass(frozen=True)
class TheoremReport:
    """Per-clause outcome of the sublevel-set structure check on a grid."""

    excludes_zero: bool
    positive_part_is_interval: bool
    negative_part_is_interval: bool
    bounded: bool
    touches_zero: bool
    endpoints_on_level: bool
    measured_inf: float | None
    measured_sup: float | None

    @property
    def clauses(self) -> dict:
        return {
            "excludes_zero": self.excludes_zero,
            "positive_part_is_interval": self.positive_part_is_interval,
            "negative_part_is_interval": self.negative_part_is_interval,
            "bounded": self.bounded,
            "touches_zero": self.touches_zero,
            "endpoints_on_level": self.endpoints_on_level,
        }

    @property
    def all_hold(self) -> bool:
        return all(self.clauses.values())


def verify_sublevel_theorem(spec, x, y, num_points: int = MIN_POINTS, scan: ScanResult | None = None) -> TheoremReport:
    """Check the structure of S(x, y) clause by clause on a grid scan.

    1. 0 is not in S.
    2. A positive member forces every grid point in (0, lam] in and every
       non-positive point out.
    3. The mirror statement for a negative member.
    4. S stays strictly inside the bracket ``|lam| < 2||x||/||y||``.
    5. A non-empty S has 0 as one of its endpoints (to grid resolution).
    6. The profile at the measured far endpoint is within ``step*||y||`` of
       ``||x||`` (the endpoint lies on the level set, up to Lipschitz slack).
    """
    if scan is None:
        scan = grid_scan(spec, x, y, num_points)
    x, y = check_pair(spec, x, y)
    idx = scan.indices
    zero = scan.half
    pos, neg = idx[idx > zero], idx[idx < zero]

    excludes_zero = zero not in idx
    positive_ok = pos.size == 0 or (neg.size == 0 and excludes_zero and np.array_equal(pos, np.arange(zero + 1, pos.max() + 1)))
    negative_ok = neg.size == 0 or (pos.size == 0 and excludes_zero and np.array_equal(neg, np.arange(neg.min(), zero)))
    # f(+-2||x||/||y||) >= ||x|| can hold with equality, so allow for rounding there
    ends = _values(spec, x, y, np.array(scan.bracket))
    bounded = bool(np.all(ends >= scan.norm_x * (1 - 1e-12)))

    if idx.size == 0:
        return TheoremReport(excludes_zero, positive_ok, negative_ok, bounded, True, True, None, None)

    lo, hi = float(scan.lambdas_below.min()), float(scan.lambdas_below.max())
    touches = idx.min() == zero + 1 or idx.max() == zero - 1
    far = lo if hi < 0 else hi
    # Lipschitz slack is attained with equality when gamma hits the bracket end
    slack = scan.grid_step * scan.norm_y * (1 + 1e-9) + 1e-12 * scan.norm_x
    on_level = float(_values(spec, x, y, np.array([far]))[0]) >= scan.norm_x - slack
    return TheoremReport(excludes_zero, positive_ok, negative_ok, bounded, bool(touches), bool(on_level), lo, hi)


def verify_local_global(spec, x, y, delta: float, num_points: int = MIN_POINTS, scan: ScanResult | None = None) -> bool:
    """Sampled check that the inequality on a window at 0 implies it on the half-line.

    For each side, if ``||x + lam*y|| >= ||x||`` holds at every sample of
    ``[0, delta)`` (resp. ``(-delta, 0]``), it must also hold at every grid
    point of ``[0, 2||x||/||y||]`` (resp. its mirror).  Outside that bracket
    the inequality holds for any norm, so the bracket covers the half-line.
    """
    if not delta > 0:
        raise ValueError(f"delta must be positive, got {delta!r}")
    if scan is None:
        scan = grid_scan(spec, x, y, num_points)
    x, y = check_pair(spec, x, y)
    nx = scan.norm_x
    window = np.linspace(0.0, delta, num_points, endpoint=False)
    for sign in (1.0, -1.0):
        if not np.any(sign * scan.lambdas_below > 0):
            continue  # global inequality holds on this side, nothing to refute
        if np.all(_values(spec, x, y, sign * window) >= nx):
            return False
    return True


def random_vector(rng: np.random.Generator, spec, n: int, low=-2.0, high=2.0, min_norm=1e-6) -> np.ndarray:
    """Uniform sample from ``[low, high]^n`` rejecting near-zero vectors."""
    while True:
        v = rng.uniform(low, high, n)
        if spec(v) >= min_norm:
            return v
