"""Tests for the brute-force oracles."""

import math
import time
from itertools import permutations

import pytest

from stopord.core.oracle import brute_force_order, brute_force_partition, merge_oracle_results
from stopord.core.stopping import evaluate_order
from stopord.layers.solvers import shard
from stopord.types.context import SolveContext
from stopord.types.dist import UniformDist, point_mass, three_point, two_point
from stopord.types.errors import DeadlineExceeded, InstanceShapeError, PreconditionError, SizeLimitError
from tests.factories import intro_pair, random_common_endpoints, random_finite, tightness_pair


def reduction_pair(target: int = 6) -> list:
    """Variables for integers 2 and 3."""
    b2 = target * target
    return [three_point(0, (b2 - a) / (b2 + 1), 1, (a - 1) / a**2, (a - 1) / a) for a in (2, 3)]


class TestBruteForceOrder:
    """Test cases for the permutation oracle."""

    def test_intro_pair(self):
        """Bernoulli first is twice as good as the constant first."""
        res = brute_force_order(intro_pair())
        assert res.best_value == pytest.approx(0.19)
        assert res.best_orderings == ((0, 1),)
        assert res.worst_value == pytest.approx(0.1)
        assert res.worst_ordering == (1, 0)
        assert res.best_value / res.worst_value == pytest.approx(1.9)

    def test_tightness_pair(self):
        """The fair coin first is the better order."""
        res = brute_force_order(tightness_pair())
        assert res.best_value == pytest.approx(0.975)
        assert res.best_ordering == (1, 0)
        assert res.worst_value == pytest.approx(0.95)

    def test_single_variable(self):
        """One variable, one order, worth its mean."""
        d = two_point(0.2, 1.4, 0.3)
        res = brute_force_order([d])
        assert res.best_orderings == ((0,),)
        assert res.evaluated_count == 1
        assert res.best_value == pytest.approx(d.mean())

    def test_ties_are_listed(self):
        """Identical variables make every order co-optimal."""
        d = two_point(0, 1, 0.5)
        res = brute_force_order([d, d, d])
        assert res.evaluated_count == 6
        assert res.best_orderings == tuple(sorted(permutations(range(3))))

    def test_tie_tol_from_context(self):
        """The tie tolerance defaults to the current context's."""
        dists = [two_point(0, 1, 0.5), two_point(0, 1.0 + 1e-7, 0.5)]
        with SolveContext.with_(tie_tol=1e-3):
            assert len(brute_force_order(dists).best_orderings) == 2
        assert len(brute_force_order(dists, tie_tol=0.0).best_orderings) == 1

    def test_values_match_direct_evaluation(self, rng):
        """Suffix sharing gives the same bits as evaluating each order."""
        dists = random_finite(rng, 5)
        res = brute_force_order(dists, tie_tol=0.0)
        best = max(evaluate_order(dists, o).value for o in permutations(range(5)))
        worst = min(evaluate_order(dists, o).value for o in permutations(range(5)))
        assert res.best_value == best
        assert res.worst_value == worst
        assert res.evaluated_count == math.factorial(5)
        for order in res.best_orderings:
            assert evaluate_order(dists, order).value == best

    def test_uniform_variables(self):
        """Uniform variables are searched as well."""
        res = brute_force_order([UniformDist(lo=0, hi=0.5), UniformDist(lo=0, hi=1)])
        assert res.best_ordering == (1, 0)

    def test_size_limit(self):
        """More than ten variables is too many."""
        with pytest.raises(SizeLimitError, match="at most 10"):
            brute_force_order([point_mass(1.0)] * 11)

    def test_empty(self):
        """At least one variable is needed."""
        with pytest.raises(PreconditionError):
            brute_force_order([])

    def test_expired_deadline(self):
        """An elapsed deadline stops a long walk."""
        dists = [two_point(0, 1 + i / 10, 0.5) for i in range(8)]
        with SolveContext.with_(deadline=time.monotonic() - 1):
            with pytest.raises(DeadlineExceeded):
                brute_force_order(dists)


class TestSharding:
    """Test cases for restricted walks and merging."""

    def test_lasts_restriction(self):
        """Only orders ending in the given indices are walked."""
        dists = [two_point(0, 1, 0.5), two_point(0, 2, 0.25), point_mass(0.3)]
        res = brute_force_order(dists, lasts=[2])
        assert res.evaluated_count == 2
        assert all(o[-1] == 2 for o in res.best_orderings)

    def test_invalid_lasts(self):
        """Restrictions must name existing indices."""
        with pytest.raises(PreconditionError, match="restriction"):
            brute_force_order(intro_pair(), lasts=[5])

    @pytest.mark.parametrize("groups", [[[0], [1], [2], [3]], [[0, 2], [1, 3]], [[3], [0, 1, 2]]])
    def test_merge_equals_full_run(self, rng, groups):
        """Merging disjoint shards reproduces the full search."""
        dists = random_finite(rng, 4)
        full = brute_force_order(dists, tie_tol=1e-9)
        parts = [brute_force_order(dists, tie_tol=1e-9, lasts=g) for g in groups]
        merged = merge_oracle_results(dists, parts, tie_tol=1e-9)
        assert merged == full

    def test_deterministic_across_runs_and_shards(self, rng):
        """Repeated and sharded runs give identical results."""
        for _ in range(20):
            dists = random_finite(rng, int(rng.integers(1, 7)))
            first = brute_force_order(dists, tie_tol=1e-9)
            assert brute_force_order(dists, tie_tol=1e-9) == first
            for workers in (2, 3):
                groups = shard(range(len(dists)), workers)
                parts = [brute_force_order(dists, tie_tol=1e-9, lasts=g) for g in groups]
                assert merge_oracle_results(dists, parts, tie_tol=1e-9) == first

    def test_merge_nothing(self):
        """At least one part is needed."""
        with pytest.raises(PreconditionError):
            merge_oracle_results(intro_pair(), [])


class TestBruteForcePartition:
    """Test cases for the ordered-partition oracle."""

    def test_reduction_instance(self):
        """Integers 2, 3 with target 6 put both variables in T."""
        res = brute_force_partition(reduction_pair())
        assert res.s_indices == ()
        assert set(res.t_indices) == {0, 1}
        assert res.value == pytest.approx(35 / 37)

    def test_single_variable(self):
        """One variable goes to T and is worth its mean."""
        d = three_point(0, 0.5, 1, 0.25, 0.25)
        res = brute_force_partition([d])
        assert res.s_indices == ()
        assert res.t_indices == (0,)
        assert res.value == pytest.approx(d.mean())

    def test_matches_permutation_oracle(self, rng):
        """Some ordered partition is an optimal order."""
        for _ in range(100):
            dists = random_common_endpoints(rng, int(rng.integers(1, 6)))
            assert brute_force_partition(dists).value == pytest.approx(brute_force_order(dists).best_value, abs=1e-12)

    def test_order_realizes_value(self, rng):
        """The reported order has the reported value."""
        dists = random_common_endpoints(rng, 5)
        res = brute_force_partition(dists)
        assert evaluate_order(dists, res.order).value == pytest.approx(res.value, abs=1e-12)
        assert sorted(res.s_indices + res.t_indices) == list(range(5))

    def test_shape_violation(self):
        """Supports other than {0, m, 1} are refused."""
        with pytest.raises(InstanceShapeError):
            brute_force_partition([two_point(0, 2, 0.5)])

    def test_size_limit(self):
        """More than twenty variables is too many."""
        with pytest.raises(SizeLimitError, match="at most 20"):
            brute_force_partition([two_point(0, 1, 0.5)] * 21)
