import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from frechet_sets.errors import EmptyDomainError, FrechetSetsError
from frechet_sets.frechet import (
    frechet_mean,
    in_restricted_voronoi_cell,
    in_voronoi_cell,
    medoid,
    peter_paul_constant,
)
from frechet_sets.measures import DiscreteMeasure, dirac, empirical_measure, from_atoms, uniform
from frechet_sets.metric import circle_grid, discrete, from_matrix, interval_grid, random_metric, star
from frechet_sets.sets import PointSet

from oracles import argmin_brute

# X = {-1, 0, 1} on the real line, indices 0, 1, 2
LINE3 = from_matrix([[0, 1, 2], [1, 0, 1], [2, 1, 0]], labels=[-1, 0, 1])


def test_interval_median_is_whole_interval():
    sp = interval_grid(10)
    mu = from_atoms(sp, {0: 0.5, 10: 0.5})
    res = frechet_mean(mu, None, 1)
    assert res.argmin.to_list() == list(range(11))
    assert res.min_value == pytest.approx(0.5)


def test_antipodal_circle_p2():
    sp = circle_grid(8)
    mu = from_atoms(sp, {0: 0.5, 4: 0.5})
    assert frechet_mean(mu, None, 2).argmin.to_list() == [2, 6]


def test_star_every_point_is_a_mean():
    sp = star(4, 2)
    res = frechet_mean(uniform(sp, range(1, 5)), None, 2)
    assert res.argmin.to_list() == [0, 1, 2, 3, 4]
    assert res.min_value == pytest.approx(0.75)


def test_empty_candidate_raises():
    sp = discrete(3)
    with pytest.raises(EmptyDomainError):
        frechet_mean(uniform(sp), PointSet(sp, ()), 2)


def test_candidate_restriction():
    sp = interval_grid(10)
    mu = from_atoms(sp, {0: 0.5, 10: 0.5})
    res = frechet_mean(mu, PointSet(sp, (0, 10)), 2)
    assert res.argmin.to_list() == [0, 10]
    assert res.values[0] == res.values[10] == 0.5


def test_medoid_vs_mean_on_line():
    mu = from_atoms(LINE3, {0: 0.5, 2: 0.5})
    assert medoid(mu, 2).argmin.to_list() == [0, 2]
    assert frechet_mean(mu, None, 2).argmin.to_list() == [1]


@pytest.mark.parametrize("p", [1, 2, 3.5])
def test_medoid_of_dirac(p):
    sp = circle_grid(8)
    assert medoid(dirac(sp, 5), p).argmin.to_list() == [5]


def test_medoid_of_empirical():
    mu = empirical_measure(discrete(2), [0, 0, 1])
    res = medoid(mu, 1)
    assert res.argmin.to_list() == [0]
    assert res.values.tolist() == pytest.approx([1 / 3, 2 / 3])


def test_peter_paul_values():
    assert peter_paul_constant(1, 1) == pytest.approx(2.0)
    assert peter_paul_constant(3, 2) == pytest.approx(4.0)
    a, b = np.meshgrid(np.linspace(0, 5, 101), np.linspace(0, 5, 101))
    assert np.all((a + b) ** 2 <= 4 * a**2 + 4 * b**2 + 1e-12)


def test_peter_paul_rejects_bad_epsilon():
    with pytest.raises(FrechetSetsError):
        peter_paul_constant(0, 2)


def test_peter_paul_random_sweep():
    rng = np.random.default_rng(0)
    n = 100_000
    a = rng.exponential(size=n) * rng.choice([1e-3, 1, 1e3], size=n)
    b = rng.exponential(size=n) * rng.choice([1e-3, 1, 1e3], size=n)
    eps = 10 ** rng.uniform(-4, 2, size=n)
    p = rng.uniform(1, 6, size=n)
    c = np.array([peter_paul_constant(e, q) for e, q in zip(eps, p)])
    assert np.all(c > 1)
    lhs = (a + b) ** p
    rhs = (1 + eps) * a**p + c * b**p
    assert np.all(lhs <= rhs * (1 + 1e-12))


def test_voronoi_dirac_and_uniform():
    sp = discrete(3)
    for x in range(3):
        assert in_voronoi_cell(dirac(sp, x), x, 2)
        assert in_restricted_voronoi_cell(dirac(sp, x), x, 2)
        assert in_voronoi_cell(uniform(sp), x, 1.5)


def test_restricted_cell_not_convex():
    mu1 = from_atoms(LINE3, {0: 0.5, 1: 0.5})
    mu2 = from_atoms(LINE3, {0: 0.5, 2: 0.5})
    mid = mu1.mix(mu2, 0.5)
    assert mid.weights.tolist() == [0.5, 0.25, 0.25]
    for p in (1.5, 2, 3):
        assert in_restricted_voronoi_cell(mu1, 0, p)
        assert in_restricted_voronoi_cell(mu2, 0, p)
        assert not in_restricted_voronoi_cell(mid, 0, p)


def test_unrestricted_cell_is_convex_on_the_same_measures():
    # mu2 is not in the unrestricted cell of -1, so no contradiction with convexity
    mu1 = from_atoms(LINE3, {0: 0.5, 1: 0.5})
    mu2 = from_atoms(LINE3, {0: 0.5, 2: 0.5})
    assert in_voronoi_cell(mu1, 0, 2)
    assert not in_voronoi_cell(mu2, 0, 2)


def test_restricted_cell_not_closed():
    for n in (1, 2, 3, 10, 1000, 10**6):
        mu_n = DiscreteMeasure(LINE3, [0.5 * (1 - 1 / n), 1 / n, 0.5 * (1 - 1 / n)])
        assert in_restricted_voronoi_cell(mu_n, 1, 2)
    limit = from_atoms(LINE3, {0: 0.5, 2: 0.5})
    assert not in_restricted_voronoi_cell(limit, 1, 2)
    assert in_restricted_voronoi_cell(limit, 0, 2)
    assert in_restricted_voronoi_cell(limit, 2, 2)


@settings(max_examples=200, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), p=st.sampled_from([1.0, 2.0, 3.5]))
def test_medoid_value_dominates_mean(seed, p):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(2, 10))
    sp = random_metric(n, rng)
    w = rng.dirichlet(np.ones(n)) * (rng.random(n) < 0.6)
    if w.sum() == 0:
        w[0] = 1
    mu = DiscreteMeasure(sp, w / w.sum())
    assert medoid(mu, p).min_value >= frechet_mean(mu, None, p).min_value


@settings(max_examples=300, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), p=st.sampled_from([1.0, 2.0, 3.5]))
def test_solver_matches_brute_force(seed, p):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(2, 10))
    sp = random_metric(n, rng)
    w = rng.dirichlet(np.ones(n)) * (rng.random(n) < 0.7)
    if w.sum() == 0:
        w[-1] = 1
    w = w / w.sum()
    mu = DiscreteMeasure(sp, w)
    cand = [i for i in range(n) if rng.random() < 0.7] or [0]
    res = frechet_mean(mu, PointSet(sp, tuple(cand)), p)
    expected, lo = argmin_brute(sp.dist.tolist(), mu.weights.tolist(), cand, p)
    assert res.argmin.to_list() == expected
    assert res.min_value == pytest.approx(lo, rel=1e-12)
    assert res.argmin <= res.candidate_set


def test_continuity_along_weight_sequence():
    """For mu_k -> mu with the candidate set fixed, argmin(mu_k) ends up inside argmin(mu)."""
    sp = circle_grid(8)
    mu = from_atoms(sp, {0: 0.5, 4: 0.5})
    limit = frechet_mean(mu, None, 2).argmin
    for k in range(10, 2000, 37):
        mu_k = DiscreteMeasure(sp, [0.5 + 1 / k, 0, 0, 0, 0.5 - 1 / k, 0, 0, 0])
        assert frechet_mean(mu_k, None, 2).argmin <= limit
    mu = from_atoms(LINE3, {0: 0.5, 2: 0.5})
    limit = frechet_mean(mu, None, 1).argmin
    for k in range(3, 500):
        mu_k = DiscreteMeasure(LINE3, [0.5 - 1 / k, 0, 0.5 + 1 / k])
        assert frechet_mean(mu_k, None, 1).argmin <= limit


def test_voronoi_convexity_random():
    rng = np.random.default_rng(42)
    violations = 0
    for _ in range(500):
        n = int(rng.integers(2, 7))
        sp = random_metric(n, rng)
        x = int(rng.integers(n))
        found = []
        while len(found) < 2:
            mu = DiscreteMeasure(sp, rng.dirichlet(np.ones(n) * 0.5))
            if in_voronoi_cell(mu, x, 2):
                found.append(mu)
        a = rng.random()
        violations += not in_voronoi_cell(found[0].mix(found[1], a), x, 2)
    assert violations == 0
