import numpy as np
import pytest

from birkhoff_angles import Lp, Side, ZeroVectorError, sublevel_interval
from birkhoff_angles.oracle import (
    grid_scan,
    oracle_gamma,
    random_vector,
    verify_local_global,
    verify_sublevel_theorem,
)
from birkhoff_angles.suite import DEFAULT_FAMILIES, nonconvex_double

LINF, L2, L3 = Lp("inf"), Lp(2), Lp(3)


def test_scan_linf_diagonal():
    s = grid_scan(LINF, [1, 0], [1, 1], 1_000_000)
    assert s.side is Side.NEGATIVE
    assert s.is_contiguous()
    assert abs(s.lambdas_below.min() + 1) <= s.grid_step * (1 + 1e-9)
    assert s.lambdas_below.max() < 0


def test_scan_euclidean_orthogonal_is_empty():
    s = grid_scan(L2, [1, 0], [0, 1])
    assert s.is_empty and s.side is Side.EMPTY


def test_scan_l3_endpoint():
    s = grid_scan(L3, [1, 0], [1, 1], 1_000_000)
    assert abs(s.lambdas_below.min() + 1) <= s.grid_step * (1 + 1e-9)


def test_scan_rejects_coarse_grid_and_zero():
    with pytest.raises(ValueError):
        grid_scan(L2, [1, 0], [1, 1], 100)
    with pytest.raises(ZeroVectorError):
        grid_scan(L2, [0, 0], [1, 1])
    with pytest.raises(ZeroVectorError):
        verify_sublevel_theorem(L2, [0, 0], [1, 1])


def test_oracle_gamma_examples():
    est = oracle_gamma(L3, [1, 0], [1, 1], 1_000_000)
    assert est.side is Side.NEGATIVE
    assert abs(est.gamma - 1.0) <= est.resolution + 1e-12
    est = oracle_gamma(L2, [1, 0], [-0.5, 0.75**0.5], 1_000_000)
    assert est.side is Side.POSITIVE and abs(est.gamma - 1.0) <= 1e-10
    assert oracle_gamma(L2, [1, 0], [0, 1]).side is Side.EMPTY


def test_oracle_finds_sets_thinner_than_the_coarse_grid():
    # gamma = 2e-6 is far below the 10^4-point grid step of 4e-4
    y = np.array([1e-6, 1.0])
    est = oracle_gamma(L2, [1, 0], y)
    assert est.side is Side.NEGATIVE
    assert abs(est.gamma - sublevel_interval(L2, [1, 0], y).gamma) <= est.resolution


@pytest.mark.parametrize("label", list(DEFAULT_FAMILIES))
def test_theorem_holds_on_random_cases(label):
    rng = np.random.default_rng(31)
    for _ in range(80):
        n = int(rng.choice([2, 3, 5]))
        spec = DEFAULT_FAMILIES[label](n)
        x, y = random_vector(rng, spec, n), random_vector(rng, spec, n)
        rep = verify_sublevel_theorem(spec, x, y)
        assert rep.all_hold, rep.clauses


def test_theorem_report_measures_interval():
    rep = verify_sublevel_theorem(LINF, [1, 0], [1, 1], 100_000)
    assert rep.all_hold
    assert rep.measured_inf == pytest.approx(-1.0, abs=1e-4)
    assert rep.measured_sup < 0


def test_non_convex_double_breaks_contiguity():
    # the petal curve dips on both sides of x=(1,0) along y=(0,1)
    rep = verify_sublevel_theorem(nonconvex_double(), [1, 0], [0, 1])
    assert not rep.all_hold
    assert not rep.positive_part_is_interval
    assert not rep.negative_part_is_interval


def test_local_global_examples():
    assert verify_local_global(LINF, [1, 0], [1, 1], 0.01)
    assert verify_local_global(L2, [1, 0], [0, 1], 2.0)
    assert verify_local_global(L3, [1, 0], [1, 1], 4.0)
    with pytest.raises(ValueError):
        verify_local_global(L2, [1, 0], [1, 1], 0.0)


def test_local_global_random():
    rng = np.random.default_rng(32)
    for label, factory in DEFAULT_FAMILIES.items():
        for _ in range(80):
            spec = factory(3)
            x, y = random_vector(rng, spec, 3), random_vector(rng, spec, 3)
            delta = rng.uniform(1e-3, 1.0) * 2 * spec(x) / spec(y)
            assert verify_local_global(spec, x, y, delta), label


def test_random_vector_rejects_tiny():
    rng = np.random.default_rng(0)
    v = random_vector(rng, L2, 3, low=-1e-7, high=1e-7, min_norm=1e-7)
    assert L2(v) >= 1e-7
