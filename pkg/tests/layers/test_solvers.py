"""Tests for the solver modules."""

import time

import pytest

from stopord.core import fptas, oracle
from stopord.core.two_point import TwoPointInstance
from stopord.layers import BruteForce, Evaluate, Fptas, NestedUniform, Prophet, TwoPointSolve, build_solver
from stopord.layers.solvers import shard
from stopord.types.dist import UniformDist, three_point, two_point
from stopord.types.errors import DeadlineExceeded, InstanceShapeError, PreconditionError, SizeLimitError
from tests.factories import random_common_endpoints, random_finite, random_general_left, tightness_pair


class TestShard:
    """Test cases for round-robin sharding."""

    def test_round_robin(self):
        """Indices are dealt in turn."""
        assert shard(range(5), 2) == [[0, 2, 4], [1, 3]]

    def test_more_workers_than_items(self):
        """Empty groups are not created."""
        assert shard(range(2), 8) == [[0], [1]]

    def test_invalid_workers(self):
        """At least one worker."""
        with pytest.raises(PreconditionError, match="workers"):
            shard(range(3), 0)


class TestEvaluate:
    """Test cases for the evaluation module."""

    @pytest.mark.asyncio
    async def test_tightness_pair(self):
        """Coin first: 0.975, and the excesses add up to it."""
        res, profile = await Evaluate()(tightness_pair(), [1, 0])
        assert res.value == pytest.approx(0.975)
        assert sum(profile.excesses) == pytest.approx(res.value)


class TestBruteForce:
    """Test cases for the sharded permutation search."""

    @pytest.mark.asyncio
    @pytest.mark.parametrize("workers", [2, 3, 7])
    async def test_independent_of_workers(self, rng, workers):
        """Any shard count gives the single-run answer."""
        for _ in range(10):
            dists = random_finite(rng, 5)
            expected = oracle.brute_force_order(dists)
            found = await BruteForce(workers=workers)(dists)
            assert found.best_value == expected.best_value
            assert found.best_orderings == expected.best_orderings
            assert found.evaluated_count == expected.evaluated_count == 120
            assert found.worst_value == expected.worst_value

    @pytest.mark.asyncio
    async def test_size_limit(self):
        """More than ten variables is refused before any shard starts."""
        with pytest.raises(SizeLimitError, match="at most 10"):
            await BruteForce(workers=2)([two_point(0, 1, 0.5)] * 11)

    @pytest.mark.asyncio
    async def test_empty(self):
        """At least one variable."""
        with pytest.raises(PreconditionError):
            await BruteForce()([])

    @pytest.mark.asyncio
    async def test_deadline(self, rng):
        """An elapsed deadline stops the shards."""
        with pytest.raises(DeadlineExceeded):
            await BruteForce(workers=2).with_(deadline=time.monotonic() - 1)(random_finite(rng, 8))

    @pytest.mark.asyncio
    async def test_spans(self, span_exporter):
        """The module and each shard are traced."""
        await BruteForce(workers=2)(tightness_pair())
        names = [s.name for s in span_exporter.get_finished_spans()]
        assert "stopord.BruteForce" in names
        assert names.count("stopord.OracleShard") == 2
        assert names.count("stopord.brute_force_order") == 2


class TestFptas:
    """Test cases for the approximation scheme module."""

    @pytest.mark.asyncio
    @pytest.mark.parametrize("workers", [1, 2, 4])
    async def test_general_left_independent_of_workers(self, rng, workers):
        """Sharded pinned runs pick the same candidate as one run."""
        for _ in range(5):
            dists = [three_point(0.2, 0.6, 1.0, 0.3, 0.3), *random_general_left(rng, 4)]
            expected = fptas.solve_general_left(dists, 0.2)
            found = await Fptas(workers=workers)(dists, 0.2)
            assert found.ordering == expected.ordering
            assert found.value == expected.value
            assert found.pinned == expected.pinned

    @pytest.mark.asyncio
    async def test_common_endpoints_routed(self, rng):
        """All-zero left endpoints go to the common-endpoint search."""
        dists = random_common_endpoints(rng, 5)
        found = await Fptas(workers=3)(dists, 0.1)
        expected = fptas.solve_common_endpoints(dists, 0.1)
        assert found.ordering == expected.ordering
        assert found.pinned is None

    @pytest.mark.asyncio
    async def test_uniform_rejected(self):
        """Uniform variables are not three-point."""
        with pytest.raises(InstanceShapeError):
            await Fptas()([UniformDist(lo=0, hi=1)], 0.1)

    @pytest.mark.asyncio
    async def test_bad_shape_rejected(self):
        """Atoms above 1 are refused before sharding."""
        with pytest.raises(InstanceShapeError):
            await Fptas(workers=2)([two_point(0.2, 2.0, 0.5), two_point(0.1, 1.0, 0.5)], 0.1)

    @pytest.mark.asyncio
    @pytest.mark.parametrize("eps", [0.0, 1.0, -0.5])
    async def test_invalid_epsilon(self, eps):
        """epsilon must lie in (0, 1)."""
        with pytest.raises(PreconditionError, match="epsilon"):
            await Fptas()([two_point(0, 1, 0.5)], eps)


class TestSingleCallModules:
    """Test cases for the thin wrappers."""

    @pytest.mark.asyncio
    async def test_two_point(self):
        """The O(n^2) solver through a module."""
        res = await TwoPointSolve()(TwoPointInstance.from_dists(tightness_pair()))
        assert res.order == (1, 0)

    @pytest.mark.asyncio
    async def test_nested_uniform(self):
        """Widest first."""
        res = await NestedUniform()([UniformDist(lo=0.25, hi=0.75), UniformDist(lo=0, hi=1)])
        assert res.order == (1, 0)
        assert res.value == pytest.approx(0.625)

    @pytest.mark.asyncio
    async def test_prophet(self):
        """Report with certificate."""
        report = await Prophet()(TwoPointInstance.from_dists(tightness_pair()))
        assert report.ratio == pytest.approx(1.175 / 0.975)
        assert report.certificate is not None


class TestBuildSolver:
    """Test cases for the method registry."""

    @pytest.mark.parametrize(
        ("method", "cls"),
        [("brute", BruteForce), ("two-point", TwoPointSolve), ("fptas", Fptas), ("nested-uniform", NestedUniform)],
    )
    def test_known_methods(self, method, cls):
        """Each name maps to its module."""
        assert isinstance(build_solver(method), cls)

    def test_workers_passed_through(self):
        """Sharded solvers receive their worker count."""
        assert build_solver("brute", workers=4).workers == 4

    def test_unknown(self):
        """Unknown names list the choices."""
        with pytest.raises(PreconditionError, match="unknown method 'greedy'"):
            build_solver("greedy")
