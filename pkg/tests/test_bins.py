from __future__ import annotations

import numpy as np
import pytest

from munsc import (
    CenterSet,
    ContractError,
    InfeasibleBinDivisionError,
    PremiseError,
    build_division,
    check_well_represented,
    division_properties,
    risk,
    tail_risk_bound_holds,
)


class TestBuildDivision:
    def test_trivial_when_w_smaller_than_z(self, pool_dataset):
        div = build_division(range(3), CenterSet.of([100]), 5, pool_dataset)
        assert div.trivial
        assert div.bins == ((0, 1, 2),)
        assert all(division_properties(div, pool_dataset).values())

    def test_nine_points_z_two(self, pool_dataset):
        div = build_division(range(9), CenterSet.of([100, 200]), 2, pool_dataset)
        assert not div.trivial
        assert div.sizes() == (2, 3, 4)
        assert all(division_properties(div, pool_dataset).values())

    def test_descending_distance_allocation(self, pool_dataset):
        t = CenterSet.of([0])
        div = build_division(range(1, 30), t, 4, pool_dataset)
        flat = [i for b in div.bins for i in b]
        dists = [pool_dataset.dist(i, 0) for i in flat]
        assert all(a >= b - 1e-12 for a, b in zip(dists, dists[1:]))

    def test_infeasible_diagonal_raises(self, pool_dataset):
        # odd z with |W| = (5z+1)/2 admits no integer layout
        for w_size, z in [(3, 1), (8, 3), (13, 5), (18, 7)]:
            with pytest.raises(InfeasibleBinDivisionError):
                build_division(range(w_size), CenterSet.of([100]), z, pool_dataset)

    def test_near_diagonal_feasible(self, pool_dataset):
        for w_size, z in [(4, 1), (2, 1), (7, 3), (9, 3), (12, 5), (14, 5), (100, 7)]:
            div = build_division(range(w_size), CenterSet.of([100]), z, pool_dataset)
            assert all(division_properties(div, pool_dataset).values()), (w_size, z)

    def test_randomized_properties(self, pool_dataset):
        rng = np.random.default_rng(42)
        done = 0
        while done < 200:
            w_size = int(rng.integers(1, 301))
            z = int(rng.integers(1, 51))
            w = rng.choice(300, size=w_size, replace=False)
            t = CenterSet.of(rng.choice(300, size=int(rng.integers(1, 6)), replace=False))
            try:
                div = build_division(w, t, z, pool_dataset)
            except InfeasibleBinDivisionError:
                assert z % 2 == 1 and w_size == (5 * z + 1) // 2
                continue
            props = division_properties(div, pool_dataset)
            assert all(props.values()), (w_size, z, props)
            assert div.members == set(int(i) for i in w)
            done += 1

    def test_contract_errors(self, pool_dataset):
        with pytest.raises(ContractError):
            build_division([], CenterSet.of([0]), 2, pool_dataset)
        with pytest.raises(ContractError):
            build_division(range(5), CenterSet(()), 2, pool_dataset)
        with pytest.raises(ContractError):
            build_division(range(5), CenterSet.of([0]), 0, pool_dataset)


class TestWellRepresented:
    def test_inside_interval(self):
        w = range(100)
        a = range(10)  # r = 0.1 -> interval [0.05, 0.15]
        b = list(range(8, 28))  # |B| = 20, |B n A| = 2 -> 0.1
        assert check_well_represented(b, a, w)

    def test_empty_intersection_fails(self):
        w = range(100)
        a = range(10)
        b = range(40, 60)
        assert not check_well_represented(b, a, w)

    def test_exact_upper_boundary_is_inside(self):
        # r = 0.2, |B| = 10, intersection 3 -> ratio 0.3 == 3r/2 exactly
        w = range(100)
        a = range(20)
        b = list(range(3)) + list(range(50, 57))
        assert check_well_represented(b, a, w)
        b_over = list(range(4)) + list(range(50, 56))  # ratio 0.4 > 0.3
        assert not check_well_represented(b_over, a, w)

    def test_contract_errors(self):
        with pytest.raises(ContractError):
            check_well_represented([], range(5), range(10))
        with pytest.raises(ContractError):
            check_well_represented([11], range(5), range(10))


class TestTailRiskBound:
    def _division(self, pool_dataset):
        return build_division(range(60), CenterSet.of([200, 250]), 5, pool_dataset)

    def test_empty_a_holds(self, pool_dataset):
        div = self._division(pool_dataset)
        assert tail_risk_bound_holds(div, [], 0.3, pool_dataset)

    def test_a_inside_first_bin_holds(self, pool_dataset):
        div = self._division(pool_dataset)
        first = list(div.bins[0])[:2]
        r = max(len(first) / min(len(b) for b in div.bins), 0.5)
        if r < 1.0:
            assert tail_risk_bound_holds(div, first, r, pool_dataset)

    def test_premise_violation_raises(self, pool_dataset):
        div = self._division(pool_dataset)
        last = div.bins[-1]
        with pytest.raises(PremiseError):
            tail_risk_bound_holds(div, list(last), 0.1, pool_dataset)

    def test_randomized_instances_always_hold(self, pool_dataset):
        rng = np.random.default_rng(8)
        done = 0
        while done < 100:
            w_size = int(rng.integers(10, 200))
            z = int(rng.integers(1, 20))
            w = rng.choice(300, size=w_size, replace=False)
            t = CenterSet.of(rng.choice(300, size=int(rng.integers(1, 5)), replace=False))
            try:
                div = build_division(w, t, z, pool_dataset)
            except InfeasibleBinDivisionError:
                continue
            r = float(rng.uniform(0.05, 0.9))
            a: list[int] = []
            for b in div.bins:
                cap = int(r * len(b))
                take = int(rng.integers(0, cap + 1))
                if take:
                    a.extend(int(i) for i in rng.choice(sorted(b), size=take, replace=False))
            assert tail_risk_bound_holds(div, a, r, pool_dataset)
            done += 1

    def test_bound_inequality_is_what_we_evaluate(self, pool_dataset):
        div = self._division(pool_dataset)
        a = [i for b in div.bins for i in list(b)[:1]]  # one point per bin
        r = max(1.5 / min(len(b) for b in div.bins), 0.4)
        if r < 1.0:
            lhs = risk(set(a) - set(div.bins[0]), div.reference, pool_dataset)
            rhs = 1.5 * r * risk(div.members, div.reference, pool_dataset)
            assert tail_risk_bound_holds(div, a, r, pool_dataset) == (lhs <= rhs * (1 + 1e-9) + 1e-12)
