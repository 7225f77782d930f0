"""Seeded property suite over random vector pairs.

Each trial draws a dimension from {2, 3, 5}, two vectors uniform in
[-2, 2]^n and two nonzero scalars, then checks the structural facts about
S(x, y), the scaling laws for the angle class, gamma, gamma* and k, the
window criterion, agreement with the grid oracle and, for inner-product
norms, agreement of k with the usual cosine.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from .geometry import AngleClass, angle_report, classify
from .norms import CustomNorm, InnerProduct, Lp, NormClass, WeightedLp, format_norm_spec
from .oracle import grid_scan, oracle_gamma, random_vector, verify_local_global, verify_sublevel_theorem
from .profile import DEFAULT_TOL

log = logging.getLogger(__name__)

DIMENSIONS = (2, 3, 5)
SCAN_POINTS = 10_000
SCALING_RTOL = 1e-9
K_ATOL = 1e-9
COSINE_ATOL = 1e-8
ORACLE_ATOL = 1e-4

PROPERTIES = (
    "sublevel_theorem",
    "class_scaling",
    "local_global",
    "oracle_equivalence",
    "k_bound",
    "k_sign_rule",
    "gamma_scaling",
    "gamma_star_invariance",
    "inner_product_cosine",
)


def weighted_l2(n: int) -> WeightedLp:
    return WeightedLp(2, tuple(1.0 + 0.5 * i for i in range(n)))


def kms_inner_product(n: int, rho: float = 0.5) -> InnerProduct:
    """Inner product with Gram matrix ``rho**|i-j|`` (positive definite for |rho| < 1)."""
    i = np.arange(n)
    return InnerProduct(tuple(map(tuple, rho ** np.abs(i[:, None] - i[None, :]))))


def _petal_norm(a: np.ndarray) -> np.ndarray:
    r = np.sqrt(np.sum(a * a, axis=-1))
    phi = np.arctan2(a[..., 1], a[..., 0])
    return r * (1 + 0.6 * np.cos(6 * phi))


def nonconvex_double() -> CustomNorm:
    """Homogeneous, positive, but non-convex: violates the triangle inequality."""
    return CustomNorm(_petal_norm, name="petal")


# family label -> factory taking the dimension
DEFAULT_FAMILIES = {
    "l1": lambda n: Lp(1),
    "l2": lambda n: Lp(2),
    "lp:3": lambda n: Lp(3),
    "linf": lambda n: Lp("inf"),
    "weighted-l2": weighted_l2,
    "inner-product": kms_inner_product,
}


@dataclass
class PropertyTally:
    name: str
    passed: int = 0
    failed: int = 0
    not_applicable: int = 0
    failures: list = field(default_factory=list)

    def record(self, ok, detail: str = "") -> None:
        if ok is None:
            self.not_applicable += 1
        elif ok:
            self.passed += 1
        else:
            self.failed += 1
            if len(self.failures) < 5:
                self.failures.append(detail)


@dataclass
class SuiteReport:
    seed: int
    trials: int
    families: list
    tallies: dict

    @property
    def all_passed(self) -> bool:
        return all(t.failed == 0 for t in self.tallies.values())

    def as_dict(self) -> dict:
        return {
            "seed": self.seed,
            "trials": self.trials,
            "families": list(self.families),
            "all_passed": self.all_passed,
            "properties": {
                name: {
                    "passed": t.passed,
                    "failed": t.failed,
                    "not_applicable": t.not_applicable,
                    "failures": list(t.failures),
                }
                for name, t in self.tallies.items()
            },
        }


def _scalar(rng) -> float:
    return float(rng.choice([-1.0, 1.0]) * rng.uniform(0.1, 10.0))


def _close(a, b, rtol=0.0, atol=0.0) -> bool:
    return abs(a - b) <= atol + rtol * abs(b)


def run_trial(spec, n: int, rng: np.random.Generator, tallies: dict, label: str) -> None:
    """Draw one random case in R^n for ``spec`` and record every property outcome."""
    x = random_vector(rng, spec, n)
    y = random_vector(rng, spec, n)
    a, b = _scalar(rng), _scalar(rng)
    delta_frac = float(rng.uniform(1e-3, 1.0))
    case = f"{label} x={x.tolist()} y={y.tolist()} a={a} b={b}"

    def check(name, fn):
        try:
            ok = fn()
        except Exception as exc:  # a crash is a failed property, not a crashed suite
            tallies[name].record(False, f"{case}: {type(exc).__name__}: {exc}")
            return
        tallies[name].record(ok, case)

    nx, ny = spec(x), spec(y)
    try:
        scan = grid_scan(spec, x, y, SCAN_POINTS)
        oracle = oracle_gamma(spec, x, y, SCAN_POINTS, scan=scan)
    except Exception as exc:
        for name in PROPERTIES:
            tallies[name].record(False, f"{case}: oracle crashed: {type(exc).__name__}: {exc}")
        return
    check("sublevel_theorem", lambda: verify_sublevel_theorem(spec, x, y, SCAN_POINTS, scan=scan).all_hold)

    def class_scaling():
        c, c2 = classify(spec, x, y), classify(spec, a * x, b * y)
        if a * b > 0 or c is AngleClass.ORTHOGONAL:
            return c2 is c
        return c2.sign == -c.sign

    check("class_scaling", class_scaling)

    def local_global():
        window_ok = verify_local_global(spec, x, y, delta_frac * 2 * nx / ny, SCAN_POINTS, scan=scan)
        return window_ok and classify(spec, x, y).side is oracle.side

    check("local_global", local_global)

    try:
        rep = angle_report(spec, x, y, DEFAULT_TOL)
    except Exception as exc:
        for name in PROPERTIES[3:]:
            tallies[name].record(False, f"{case}: {type(exc).__name__}: {exc}")
        return

    check("oracle_equivalence", lambda: _close(rep.gamma, oracle.gamma, atol=ORACLE_ATOL))
    check("k_bound", lambda: abs(rep.k) <= 1.0)
    check("k_sign_rule", lambda: _close(angle_report(spec, a * x, b * y).k, np.sign(a * b) * rep.k, atol=K_ATOL))

    pa, pb = abs(a), abs(b)
    scaled = {}

    def scaled_report():
        if not scaled:
            scaled["rep"] = angle_report(spec, pa * x, pb * y)
        return scaled["rep"]

    def gamma_scaling():
        if rep.angle_class is AngleClass.ORTHOGONAL:
            return None
        return _close(scaled_report().gamma, pa / pb * rep.gamma, rtol=SCALING_RTOL)

    def gamma_star_invariance():
        if rep.angle_class is AngleClass.ORTHOGONAL:
            return None
        return _close(scaled_report().gamma_star, rep.gamma_star, rtol=SCALING_RTOL)

    check("gamma_scaling", gamma_scaling)
    check("gamma_star_invariance", gamma_star_invariance)

    def inner_product_cosine():
        if spec.norm_class is not NormClass.QUADRATIC:
            return None
        cos = float(x @ spec.gram(n) @ y) / (nx * ny)
        return _close(rep.k, cos, atol=COSINE_ATOL)

    check("inner_product_cosine", inner_product_cosine)


def run_suite(trials: int, seed: int = 0, families=None, include_bad_norm: bool = False) -> SuiteReport:
    """Run ``trials`` random cases for every norm family; deterministic in ``seed``.

    ``families`` maps a label to a factory ``n -> spec`` (default: l1, l2,
    l3, linf, a weighted l2 and a non-diagonal inner-product norm).
    ``include_bad_norm`` adds a non-convex test double, which must make the
    suite fail.
    """
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    families = dict(DEFAULT_FAMILIES if families is None else families)
    if include_bad_norm:
        families["bad-norm"] = lambda n: nonconvex_double()
    rng = np.random.default_rng(seed)
    tallies = {name: PropertyTally(name) for name in PROPERTIES}
    for label, factory in families.items():
        log.debug("running %d trials for %s", trials, label)
        for _ in range(trials):
            n = int(rng.choice(DIMENSIONS))
            spec = factory(n)
            run_trial(spec, spec.dim or n, rng, tallies, label)
    return SuiteReport(seed, trials, list(families), tallies)


def family_for_spec(spec) -> dict:
    """A single-family mapping for a user-supplied spec."""
    return {format_norm_spec(spec): lambda n: spec}
