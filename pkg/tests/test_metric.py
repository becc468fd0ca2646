from __future__ import annotations

import math

import numpy as np
import pytest

from munsc import CenterSet, ContractError, Dataset, far_r, nearest_center, risk, truncated_risk


def linear_scan_nearest(data, x, centers):
    best_c, best_d = None, math.inf
    for c in sorted(centers):
        d = data.dist(x, c)
        if d < best_d:
            best_c, best_d = c, d
    return best_c, best_d


class TestDataset:
    def test_coords_basic(self):
        ds = Dataset.from_coords([[0.0, 0.0], [3.0, 4.0]])
        assert ds.n == 2 and ds.mode == "euclidean" and ds.dim == 2
        assert ds.dist(0, 1) == pytest.approx(5.0)

    def test_rejects_nonfinite(self):
        with pytest.raises(ContractError):
            Dataset.from_coords([[0.0], [math.nan]])
        with pytest.raises(ContractError):
            Dataset.from_matrix([[0.0, math.inf], [math.inf, 0.0]])

    def test_matrix_validation(self):
        good = [[0.0, 1.0], [1.0, 0.0]]
        assert Dataset.from_matrix(good).mode == "matrix"
        with pytest.raises(ContractError):
            Dataset.from_matrix([[0.0, 1.0], [2.0, 0.0]])  # asymmetric
        with pytest.raises(ContractError):
            Dataset.from_matrix([[1.0, 1.0], [1.0, 0.0]])  # nonzero diagonal
        with pytest.raises(ContractError):
            Dataset.from_matrix([[0.0, -1.0], [-1.0, 0.0]])  # negative

    def test_matrix_triangle_violation(self):
        bad = [[0.0, 1.0, 5.0], [1.0, 0.0, 1.0], [5.0, 1.0, 0.0]]
        with pytest.raises(ContractError):
            Dataset.from_matrix(bad)

    def test_matrix_triangle_sampled_for_large_n(self):
        rng = np.random.default_rng(3)
        pts = rng.normal(size=(250, 2))
        ds = Dataset.from_coords(pts)
        ids = np.arange(250)
        Dataset.from_matrix(ds.pairwise(ids, ids))  # valid metric passes sampling

    def test_immutable_arrays(self):
        ds = Dataset.from_coords([[0.0], [1.0]])
        with pytest.raises(ValueError):
            ds.coords[0, 0] = 5.0

    def test_id_range_checked(self):
        ds = Dataset.from_coords([[0.0], [1.0]])
        with pytest.raises(ContractError):
            ds.dist(0, 2)


class TestNearestCenter:
    def test_member_of_center_set(self, line_dataset):
        assert nearest_center(2, CenterSet.of([2, 3]), line_dataset) == (2, 0.0)

    def test_symmetric_tie_breaks_to_smaller_id(self):
        ds = Dataset.from_coords([[0.0], [1.0], [2.0]])
        assert nearest_center(1, CenterSet.of([0, 2]), ds) == (0, 1.0)

    def test_matches_linear_scan(self):
        rng = np.random.default_rng(17)
        ds = Dataset.from_coords(rng.normal(size=(20, 3)))
        centers = CenterSet.of([4, 11, 17])
        for x in range(20):
            assert nearest_center(x, centers, ds) == linear_scan_nearest(ds, x, centers.ids)

    def test_empty_center_set_rejected(self, line_dataset):
        with pytest.raises(ContractError):
            nearest_center(0, CenterSet(()), line_dataset)

    def test_deterministic(self, line_dataset):
        t = CenterSet.of([0, 2])
        first = nearest_center(1, t, line_dataset)
        assert all(nearest_center(1, t, line_dataset) == first for _ in range(5))


class TestRisk:
    def test_all_points_are_centers(self, line_dataset):
        t = CenterSet.of([0, 1, 2, 3])
        assert risk([0, 1, 2, 3], t, line_dataset) == 0.0

    def test_line_single_center(self):
        ds = Dataset.from_coords([[0.0], [1.0], [2.0]])
        assert risk([0, 1, 2], CenterSet.of([0]), ds) == 3.0

    def test_empty_points(self, line_dataset):
        assert risk([], CenterSet.of([0]), line_dataset) == 0.0

    def test_matches_double_loop(self):
        rng = np.random.default_rng(5)
        ds = Dataset.from_coords(rng.normal(size=(10, 2)))
        t = CenterSet.of([2, 7])
        expected = sum(min(ds.dist(p, c) for c in t) for p in range(10))
        assert risk(range(10), t, ds) == pytest.approx(expected)

    def test_monotone_in_points(self, pool_dataset):
        rng = np.random.default_rng(1)
        t = CenterSet.of([0, 50])
        s = set(int(i) for i in rng.choice(300, 80, replace=False))
        sub = set(list(s)[:40])
        assert risk(sub, t, pool_dataset) <= risk(s, t, pool_dataset)

    def test_antitone_in_centers(self, pool_dataset):
        small = CenterSet.of([0, 50])
        big = CenterSet.of([0, 50, 120])
        pts = range(300)
        assert risk(pts, big, pool_dataset) <= risk(pts, small, pool_dataset)


class TestFarSets:
    def test_r_zero(self, line_dataset):
        assert far_r([0, 1, 2, 3], CenterSet.of([0]), 0, line_dataset) == set()

    def test_two_largest(self, line_dataset):
        assert far_r([0, 1, 2, 3], CenterSet.of([0]), 2, line_dataset) == {2, 3}

    def test_trivial_far_set_returns_everything(self, line_dataset):
        s = {0, 1, 3}
        assert far_r(s, CenterSet.of([0]), len(s) + 3, line_dataset) == s

    def test_nested_in_r(self, pool_dataset):
        t = CenterSet.of([10, 200])
        pts = list(range(0, 300, 3))
        prev: set[int] = set()
        for r in range(0, len(pts) + 2):
            cur = far_r(pts, t, r, pool_dataset)
            assert prev <= cur
            prev = cur

    def test_distance_tie_prefers_smaller_id(self):
        ds = Dataset.from_coords([[0.0], [5.0], [-5.0], [5.0]])
        # ids 1, 2, 3 all at distance 5 from center 0
        assert far_r([0, 1, 2, 3], CenterSet.of([0]), 2, ds) == {1, 2}

    def test_negative_r_rejected(self, line_dataset):
        with pytest.raises(ContractError):
            far_r([0, 1], CenterSet.of([0]), -1, line_dataset)


class TestTruncatedRisk:
    def test_r_zero_equals_risk(self, pool_dataset):
        t = CenterSet.of([3, 33])
        pts = range(100)
        assert truncated_risk(pts, t, 0, pool_dataset) == risk(pts, t, pool_dataset)

    def test_line_example(self, line_dataset):
        assert truncated_risk([0, 1, 2, 3], CenterSet.of([0]), 2, line_dataset) == 1.0

    def test_r_at_least_size_gives_zero(self, line_dataset):
        assert truncated_risk([0, 1, 2], CenterSet.of([0]), 3, line_dataset) == 0.0
        assert truncated_risk([0, 1, 2], CenterSet.of([0]), 7, line_dataset) == 0.0

    def test_matches_sort_then_sum(self):
        rng = np.random.default_rng(11)
        ds = Dataset.from_coords(rng.normal(0, 5, size=(30, 2)))
        t = CenterSet.of([1, 14, 28])
        pts = sorted(range(30))
        mins = [min(ds.dist(p, c) for c in t) for p in pts]
        ranked = sorted(zip(pts, mins), key=lambda pair: (-pair[1], pair[0]))
        dropped = {p for p, _ in ranked[:7]}
        expected = float(np.sum(np.asarray([m for p, m in zip(pts, mins) if p not in dropped])))
        assert truncated_risk(pts, t, 7, ds) == expected

    def test_non_increasing_in_r(self, pool_dataset):
        t = CenterSet.of([7])
        pts = range(60)
        vals = [truncated_risk(pts, t, r, pool_dataset) for r in range(0, 65, 5)]
        assert all(a >= b for a, b in zip(vals, vals[1:]))


def test_center_set_normalization():
    cs = CenterSet.of([5, 1, 5, 3])
    assert cs.ids == (1, 3, 5)
    assert len(cs) == 3 and 3 in cs and 2 not in cs
    with pytest.raises(ContractError):
        CenterSet((3, 1))
