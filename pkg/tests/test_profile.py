import math

import numpy as np
import pytest

from birkhoff_angles import (
    ConvergenceError,
    CustomNorm,
    InnerProduct,
    Lp,
    Method,
    Side,
    SublevelInterval,
    WeightedLp,
    ZeroVectorError,
    one_sided_derivatives,
    profile_eval,
    sublevel_interval,
    sublevel_interval_bisection,
    sublevel_interval_pl_exact,
    sublevel_interval_quadratic_exact,
)
from birkhoff_angles.oracle import random_vector
from birkhoff_angles.suite import kms_inner_product

LINF, L1, L2, L3 = Lp("inf"), Lp(1), Lp(2), Lp(3)

# Oracle reference (10^6-point scan plus zoomed rescan, resolution ~2e-12).
L3_GAMMA_ORACLE = 1.0


def test_profile_eval_examples():
    assert profile_eval(LINF, [1, 0], [0.5, 1], -1.0) == 1.0
    assert profile_eval(L2, [1, 0], [0, 1], 1.0) == pytest.approx(math.sqrt(2), rel=1e-15)
    for spec in (L1, L2, L3, LINF):
        assert profile_eval(spec, [0.3, -2], [1, 1], 0.0) == spec([0.3, -2])


def test_profile_eval_rejects_nonfinite():
    with pytest.raises(ValueError):
        profile_eval(L2, [1, 0], [0, 1], float("nan"))


@pytest.mark.parametrize("a", [0.1, 0.5, 0.9])
def test_derivatives_smooth_euclidean(a):
    d = one_sided_derivatives(L2, [1, 0], [a, math.sqrt(1 - a * a)])
    assert d.d_minus == pytest.approx(a, abs=1e-12)
    assert d.d_plus == pytest.approx(a, abs=1e-12)


def test_derivatives_linf_flat_at_zero():
    d = one_sided_derivatives(LINF, [1, 0], [0, 1])
    assert d.d_minus == 0.0 and d.d_plus == 0.0


@pytest.mark.parametrize("spec", [L1, L2, L3, LINF, Lp(1.5), kms_inner_product(3)], ids=str)
def test_derivatives_along_x(spec):
    x = np.array([0.4, -1.1, 0.7])
    d = one_sided_derivatives(spec, x, x)
    assert d.d_minus == pytest.approx(spec(x), rel=1e-6)
    assert d.d_plus == pytest.approx(spec(x), rel=1e-6)


def test_derivatives_l1_kink():
    # f(lam) = |1 + lam| + |lam| has slopes 0 and 2 at 0
    d = one_sided_derivatives(L1, [1, 0], [1, 1])
    assert (d.d_minus, d.d_plus) == (0.0, 2.0)
    assert d.is_exact


def test_custom_norm_uses_finite_differences():
    spec = CustomNorm(lambda a: np.sqrt(np.sum(a * a, axis=-1)), name="euclid")
    d = one_sided_derivatives(spec, [1, 0], [0.6, 0.8])
    assert not d.is_exact
    assert d.d_minus == pytest.approx(0.6, abs=1e-6)
    assert d.d_plus == pytest.approx(0.6, abs=1e-6)


@pytest.mark.parametrize("a", [0.1, 0.3, 0.5, 0.7, 0.9])
def test_linf_y_a1_gamma_one(a):
    for method in (Method.EXACT_PL, Method.BISECTION):
        s = sublevel_interval(LINF, [1, 0], [a, 1], method=method)
        assert s.side is Side.NEGATIVE
        assert s.gamma == pytest.approx(1.0, abs=1e-10 if method is Method.EXACT_PL else 1e-8)


@pytest.mark.parametrize("a, expected", [(0.1, 2.0), (0.25, 2.0), (0.5, 2.0), (0.6, 1 / 0.6), (0.8, 1.25), (1.0, 1.0)])
def test_linf_y_1a(a, expected):
    assert sublevel_interval_pl_exact(LINF, [1, 0], [1, a]).gamma == pytest.approx(expected, abs=1e-10)
    assert sublevel_interval_bisection(LINF, [1, 0], [1, a]).gamma == pytest.approx(expected, abs=1e-8)


def test_linf_scaled_pair():
    assert sublevel_interval(LINF, [1, 0], [1, 1]).gamma == pytest.approx(1.0, abs=1e-12)
    assert sublevel_interval(LINF, [1, 0], [2, 2]).gamma == pytest.approx(0.5, abs=1e-12)


def test_l1_unit_level_gamma_two():
    t = math.pi / 8
    s = sublevel_interval(L1, [1, 0], [math.cos(t), math.sin(t)])
    y_hat = np.array([math.cos(t), math.sin(t)]) / L1([math.cos(t), math.sin(t)])
    s_hat = sublevel_interval(L1, [1, 0], y_hat)
    assert s.side is Side.NEGATIVE
    assert s_hat.gamma == pytest.approx(2.0, abs=1e-12)


@pytest.mark.parametrize("a", [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9])
def test_euclidean_gamma_2a(a):
    y = [a, math.sqrt(1 - a * a)]
    assert sublevel_interval_quadratic_exact(L2, [1, 0], y).gamma == pytest.approx(2 * a, abs=1e-10)
    assert sublevel_interval_bisection(L2, [1, 0], y).gamma == pytest.approx(2 * a, abs=1e-8)


def test_quadratic_examples():
    eye = InnerProduct(((1.0, 0.0), (0.0, 1.0)))
    assert sublevel_interval_quadratic_exact(eye, [1, 0], [0.7, math.sqrt(0.51)]).gamma == pytest.approx(1.4, abs=1e-12)
    assert sublevel_interval_quadratic_exact(eye, [1, 0], [0, 1]).is_empty
    s = sublevel_interval_quadratic_exact(eye, [1, 0], [-0.5, math.sqrt(0.75)])
    assert s.side is Side.POSITIVE
    assert s.gamma == pytest.approx(1.0, abs=1e-12)


def test_euclidean_orthogonal_is_empty():
    s = sublevel_interval(L2, [1, 0], [0, 1])
    assert s.is_empty and s.gamma == 0.0 and s.bounds is None


def test_l3_matches_oracle():
    s = sublevel_interval(L3, [1, 0], [1, 1])
    assert s.side is Side.NEGATIVE
    assert s.gamma == pytest.approx(L3_GAMMA_ORACLE, abs=1e-9)


def test_y_equal_x_gives_two():
    for spec in (L1, L2, L3, LINF):
        x = np.array([0.3, -1.2])
        assert sublevel_interval(spec, x, x).gamma == pytest.approx(2.0, abs=1e-9)
        s = sublevel_interval(spec, x, -x)
        assert s.side is Side.POSITIVE and s.gamma == pytest.approx(2.0, abs=1e-9)


def test_zero_vectors_rejected():
    with pytest.raises(ZeroVectorError):
        sublevel_interval(L2, [0, 0], [1, 0])
    with pytest.raises(ZeroVectorError):
        sublevel_interval(L2, [1, 0], [0, 0])


def test_wrong_exact_method_rejected():
    with pytest.raises(TypeError):
        sublevel_interval_pl_exact(L2, [1, 0], [1, 1])
    with pytest.raises(TypeError):
        sublevel_interval_quadratic_exact(L1, [1, 0], [1, 1])
    with pytest.raises(TypeError):
        sublevel_interval(L3, [1, 0], [1, 1], method="ExactPL")


def test_interval_type_invariants():
    with pytest.raises(ValueError):
        SublevelInterval(Side.NEGATIVE, 0.0, Method.BISECTION)
    with pytest.raises(ValueError):
        SublevelInterval(Side.EMPTY, 1.0, Method.BISECTION)
    s = SublevelInterval(Side.NEGATIVE, 1.5, Method.BISECTION)
    assert -1.0 in s and 0.0 not in s and 0.5 not in s


def test_non_convex_spec_raises_convergence_error():
    from birkhoff_angles.suite import nonconvex_double

    with pytest.raises(ConvergenceError):
        sublevel_interval(nonconvex_double(), [1, 0], [math.cos(0.05), math.sin(0.05)], method="Bisection")


@pytest.mark.parametrize(
    "spec",
    [L1, LINF, WeightedLp(1, (1.0, 2.0, 0.5)), WeightedLp("inf", (1.0, 2.0, 0.5))],
    ids=str,
)
def test_pl_exact_agrees_with_bisection(spec):
    rng = np.random.default_rng(3)
    tol = 1e-10
    for _ in range(500):
        x, y = random_vector(rng, spec, 3), random_vector(rng, spec, 3)
        exact = sublevel_interval(spec, x, y, method=Method.EXACT_PL)
        num = sublevel_interval(spec, x, y, tol=tol, method=Method.BISECTION)
        assert exact.side is num.side
        assert abs(exact.gamma - num.gamma) <= 10 * tol * spec(x) / spec(y)


@pytest.mark.parametrize("spec", [L2, kms_inner_product(3), WeightedLp(2, (1.0, 1.5, 2.0))], ids=str)
def test_quadratic_exact_agrees_with_bisection(spec):
    rng = np.random.default_rng(4)
    tol = 1e-10
    for _ in range(500):
        x, y = random_vector(rng, spec, 3), random_vector(rng, spec, 3)
        exact = sublevel_interval(spec, x, y, method=Method.EXACT_QUADRATIC)
        num = sublevel_interval(spec, x, y, tol=tol, method=Method.BISECTION)
        assert exact.side is num.side
        assert abs(exact.gamma - num.gamma) <= 10 * tol * spec(x) / spec(y)


@pytest.mark.parametrize("spec", [L1, L2, L3, LINF, Lp(1.3), Lp(7)], ids=str)
def test_bound_and_endpoint_residual(spec):
    rng = np.random.default_rng(5)
    for _ in range(300):
        x, y = random_vector(rng, spec, 3), random_vector(rng, spec, 3)
        s = sublevel_interval(spec, x, y)
        nx, ny = spec(x), spec(y)
        assert s.gamma <= 2 * nx / ny
        if not s.is_empty:
            assert s.endpoint_residual <= 1e-8 * nx
            mid = 0.5 * (s.bounds[0] + s.bounds[1])
            assert profile_eval(spec, x, y, mid) < nx
