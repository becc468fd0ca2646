from __future__ import annotations

import itertools

import numpy as np
import pytest

from munsc import (
    BudgetExceededError,
    CenterSet,
    ContractError,
    Dataset,
    get_solver,
    risk,
    solve_exhaustive,
    solve_local_search,
)
from munsc.solvers import EXHAUSTIVE_BUDGET


def reversed_enumeration_opt(data: Dataset, ids, k):
    """Independent oracle: enumerate subsets in reversed lexicographic order,
    keeping non-strict improvements so the last optimum seen is the
    lexicographically smallest."""
    ids = sorted(ids)
    best, best_risk = None, float("inf")
    for combo in reversed(list(itertools.combinations(ids, k))):
        r = risk(ids, CenterSet.of(combo), data)
        if r <= best_risk:
            best, best_risk = combo, r
    return CenterSet.of(best), best_risk


class TestExhaustive:
    def test_k_at_least_size_returns_input(self, line_dataset):
        out = solve_exhaustive([2, 0, 3], 5, line_dataset)
        assert out.ids == (0, 2, 3)
        assert risk([0, 2, 3], out, line_dataset) == 0.0

    def test_two_pair_line(self):
        ds = Dataset.from_coords([[0.0], [1.0], [10.0], [11.0]])
        out = solve_exhaustive(range(4), 2, ds)
        assert risk(range(4), out, ds) == 2.0
        assert out.ids == (0, 2)  # lexicographically smallest optimum

    def test_matches_reversed_enumeration(self):
        rng = np.random.default_rng(23)
        ds = Dataset.from_coords(rng.normal(0, 4, size=(8, 2)))
        out = solve_exhaustive(range(8), 2, ds)
        oracle, oracle_risk = reversed_enumeration_opt(ds, range(8), 2)
        assert out.ids == oracle.ids
        assert risk(range(8), out, ds) == pytest.approx(oracle_risk)

    def test_k_one(self):
        rng = np.random.default_rng(7)
        ds = Dataset.from_coords(rng.normal(size=(12, 2)))
        out = solve_exhaustive(range(12), 1, ds)
        sums = [risk(range(12), CenterSet.of([c]), ds) for c in range(12)]
        assert out.ids == (int(np.argmin(sums)),)

    def test_budget_guard(self):
        rng = np.random.default_rng(1)
        ds = Dataset.from_coords(rng.normal(size=(300, 2)))
        with pytest.raises(BudgetExceededError):
            solve_exhaustive(range(300), 3, ds)  # C(300,3) > budget
        assert EXHAUSTIVE_BUDGET == 1_000_000

    def test_subset_input(self, pool_dataset):
        subset = [5, 40, 77, 120, 200, 250]
        out = solve_exhaustive(subset, 2, pool_dataset)
        assert set(out.ids) <= set(subset)


class TestLocalSearch:
    def test_k_at_least_size(self, line_dataset):
        out = solve_local_search(range(4), 9, line_dataset)
        assert out.ids == (0, 1, 2, 3)

    @pytest.mark.parametrize("seed,k", [(0, 2), (1, 2), (2, 3), (3, 3), (4, 2)])
    def test_within_beta_of_exhaustive(self, seed, k):
        rng = np.random.default_rng(seed)
        n = int(rng.integers(8, 16))
        ds = Dataset.from_coords(rng.normal(0, 10, size=(n, 2)))
        ls = risk(range(n), solve_local_search(range(n), k, ds), ds)
        opt = risk(range(n), solve_exhaustive(range(n), k, ds), ds)
        assert ls <= 5.0 * opt + 1e-12

    def test_deterministic(self, pool_dataset):
        a = solve_local_search(range(150), 4, pool_dataset, max_iters=30, seed=1)
        b = solve_local_search(range(150), 4, pool_dataset, max_iters=30, seed=99)
        assert a.ids == b.ids  # seed does not influence the deterministic search

    def test_risk_non_increasing_across_iterations(self, pool_dataset):
        risks = [
            risk(range(200), solve_local_search(range(200), 5, pool_dataset, max_iters=i), pool_dataset)
            for i in range(1, 8)
        ]
        assert all(a >= b - 1e-9 for a, b in zip(risks, risks[1:]))

    def test_chunked_path_matches_matrix_path(self, pool_dataset, monkeypatch):
        import munsc.solvers as solvers_mod

        full = solve_local_search(range(120), 3, pool_dataset)
        monkeypatch.setattr(solvers_mod, "_MATRIX_LIMIT", 10)
        chunked = solve_local_search(range(120), 3, pool_dataset)
        assert full.ids == chunked.ids

    def test_returns_subset_of_input(self, pool_dataset):
        subset = list(range(0, 300, 7))
        out = solve_local_search(subset, 4, pool_dataset)
        assert set(out.ids) <= set(subset)
        assert len(out) <= 4


class TestRegistry:
    def test_get_solver(self):
        ex = get_solver("exhaustive")
        ls = get_solver("local-search", max_iters=10)
        assert ex.beta == 1.0 and ex.name == "exhaustive"
        assert ls.beta == 5.0 and ls.name == "local-search"
        with pytest.raises(ContractError):
            get_solver("lp-rounding")

    def test_solver_objects_solve(self, line_dataset):
        out = get_solver("exhaustive").solve(range(4), 2, line_dataset)
        assert risk(range(4), out, line_dataset) <= 5.0
