import itertools

import numpy as np
import pytest

from genrank.errors import PreconditionViolated, SamplingFailure, SizeMismatch
from genrank.matalg import OrbitType, canonical_model, generated_algebra
from genrank.strata import (
    density_threshold,
    enumerate_orbit_types,
    max_nontrivial_stratum_dim,
    maximizers,
    normalizer_dim_numeric,
    sample_model_tuple,
    stratum_dim,
    su_basis,
    tangent_rank_dim,
)


def brute_orbit_types(d):
    """Every ordered list of (size, mult) pairs with sum size*mult = d, modulo order."""
    shapes = [(a, m) for a in range(1, d + 1) for m in range(1, d + 1) if a * m <= d]
    found = set()
    for length in range(1, d + 1):
        for seq in itertools.product(shapes, repeat=length):
            if sum(a * m for a, m in seq) == d:
                found.add(tuple(sorted(seq, reverse=True)))
    return found


# counts produced by brute_orbit_types for d = 1..5
ORBIT_TYPE_COUNTS = {1: 1, 2: 3, 3: 5, 4: 11, 5: 17}


class TestEnumeration:
    def test_d1(self):
        assert enumerate_orbit_types(1) == [OrbitType(((1, 1),))]

    def test_d2(self):
        assert set(enumerate_orbit_types(2)) == {
            OrbitType(((2, 1),)), OrbitType(((1, 1), (1, 1))), OrbitType(((1, 2),))}

    def test_d3(self):
        expected = {"[(3,1)]", "[(1,3)]", "[(1,1),(1,1),(1,1)]", "[(2,1),(1,1)]", "[(1,2),(1,1)]"}
        assert {str(o) for o in enumerate_orbit_types(3)} == expected

    @pytest.mark.parametrize("d", [1, 2, 3, 4, 5])
    def test_matches_brute_force(self, d):
        assert {o.pairs for o in enumerate_orbit_types(d)} == brute_orbit_types(d)
        assert len(enumerate_orbit_types(d)) == ORBIT_TYPE_COUNTS[d]

    @pytest.mark.parametrize("d", [1, 2, 3, 4, 5, 6])
    def test_sizes_and_order(self, d):
        types = enumerate_orbit_types(d)
        assert all(o.size == d for o in types)
        assert types == sorted(types)
        assert len(set(types)) == len(types)
        assert enumerate_orbit_types(d) == types

    def test_rejects_zero(self):
        with pytest.raises(PreconditionViolated):
            enumerate_orbit_types(0)


class TestStratumDim:
    @pytest.mark.parametrize("d", [2, 3, 4, 5])
    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_corner_case(self, d, n):
        info = stratum_dim(OrbitType(((d - 1, 1), (1, 1))), d, n)
        assert info.dim_N == (d - 1) ** 2
        assert info.dim_stratum == (n + 1) * d * d - 2 * n * (d - 1)

    @pytest.mark.parametrize("d", [1, 2, 3, 4])
    @pytest.mark.parametrize("n", [0, 1, 2])
    def test_trivial_type_is_open(self, d, n):
        info = stratum_dim(OrbitType.trivial(d), d, n)
        assert info.is_trivial_type
        assert info.dim_stratum == (n + 1) * d * d

    def test_two_points(self):
        info = stratum_dim(OrbitType(((1, 1), (1, 1))), 2, 1)
        assert (info.dim_N, info.dim_F, info.dim_stratum) == (1, 4, 6)

    def test_size_mismatch(self):
        with pytest.raises(SizeMismatch):
            stratum_dim(OrbitType(((2, 1),)), 3, 1)

    @pytest.mark.parametrize("d", [1, 2, 3, 4, 5, 6])
    @pytest.mark.parametrize("n", [0, 1, 2, 3])
    def test_invariants(self, d, n):
        for ot in enumerate_orbit_types(d):
            s = stratum_dim(ot, d, n)
            assert s.dim_F == (n + 1) * ot.sum_d2
            assert s.dim_K == ot.sum_m2 - 1 >= 0
            assert s.dim_N >= ot.sum_d2 - 1
            assert s.dim_stratum == s.dim_F + d * d - 1 - s.dim_N
            # two decompositions: (F/N) + PU_d/K versus F + PU_d - N
            assert s.dim_stratum == (s.dim_F - (s.dim_N - s.dim_K)) + (d * d - 1) - s.dim_K
            if not ot.is_trivial() and n >= 1:
                assert s.dim_stratum <= (n + 1) * d * d - 2 * n * (d - 1)


class TestMaxStratum:
    @pytest.mark.parametrize("d,n,dim,witness", [
        (2, 1, 6, "[(1,1),(1,1)]"),
        (3, 1, 14, "[(2,1),(1,1)]"),
        (2, 2, 8, "[(1,1),(1,1)]"),
    ])
    def test_examples(self, d, n, dim, witness):
        top, ot = max_nontrivial_stratum_dim(d, n)
        assert (top, str(ot)) == (dim, witness)

    @pytest.mark.parametrize("d", range(2, 7))
    @pytest.mark.parametrize("n", range(1, 5))
    def test_unique_maximizer(self, d, n):
        assert maximizers(d, n) == [OrbitType(((d - 1, 1), (1, 1)))]

    def test_rejects_n0(self):
        with pytest.raises(PreconditionViolated):
            max_nontrivial_stratum_dim(3, 0)


class TestDensityThreshold:
    def test_values(self):
        assert density_threshold(2, 1) == 2
        assert density_threshold(3, 2) == 8

    @pytest.mark.parametrize("d,n", [(2, 0), (1, 1)])
    def test_rejects(self, d, n):
        with pytest.raises(PreconditionViolated):
            density_threshold(d, n)

    @pytest.mark.parametrize("d", range(2, 7))
    @pytest.mark.parametrize("n", range(1, 5))
    def test_codimension(self, d, n):
        top, _ = max_nontrivial_stratum_dim(d, n)
        assert (n + 1) * d * d - top == density_threshold(d, n)


class TestNormalizer:
    def test_su_basis(self):
        for d in (2, 3, 4):
            xs = su_basis(d)
            assert xs.shape[0] == d * d - 1
            assert all(np.allclose(x, -x.conj().T) and abs(np.trace(x)) < 1e-14 for x in xs)
            flat = np.array([np.concatenate([x.real.ravel(), x.imag.ravel()]) for x in xs])
            assert np.linalg.matrix_rank(flat) == d * d - 1

    @pytest.mark.parametrize("d", [2, 3, 4, 5])
    def test_full_algebra(self, d):
        assert normalizer_dim_numeric(OrbitType.trivial(d), d) == d * d - 1

    @pytest.mark.parametrize("d", [2, 3, 4, 5])
    def test_corner(self, d):
        assert normalizer_dim_numeric(OrbitType(((d - 1, 1), (1, 1))), d) == (d - 1) ** 2

    def test_scalars_in_m2(self):
        assert normalizer_dim_numeric(OrbitType(((1, 2),)), 2) == 3

    @pytest.mark.parametrize("d", [1, 2, 3, 4, 5])
    def test_formula(self, d):
        for ot in enumerate_orbit_types(d):
            assert normalizer_dim_numeric(ot, d) == stratum_dim(ot, d, 1).dim_N


class TestTangentRank:
    def test_open_stratum(self):
        assert tangent_rank_dim(OrbitType.trivial(3), 3, 1, samples=2) == 18

    def test_two_points(self):
        assert tangent_rank_dim(OrbitType(((1, 1), (1, 1))), 2, 1) == 6

    def test_scalars(self):
        assert tangent_rank_dim(OrbitType(((1, 2),)), 2, 1) == 2

    @pytest.mark.parametrize("d", [2, 3])
    @pytest.mark.parametrize("n", [1, 2])
    def test_matches_formula(self, d, n):
        for ot in enumerate_orbit_types(d):
            assert tangent_rank_dim(ot, d, n, samples=3, seed=7) == stratum_dim(ot, d, n).dim_stratum

    def test_seed_reproducible(self):
        ot = OrbitType(((2, 1), (1, 1)))
        assert tangent_rank_dim(ot, 3, 1, 3, seed=5) == tangent_rank_dim(ot, 3, 1, 3, seed=5)

    def test_single_element_cannot_reach_noncommutative_model(self, rng):
        with pytest.raises(SamplingFailure):
            sample_model_tuple(OrbitType(((2, 1),)), 2, 0, rng, retries=4)


def test_sampled_points_lie_in_F(rng):
    for ot in enumerate_orbit_types(4):
        t = sample_model_tuple(ot, 4, 1, rng)
        model = canonical_model(ot, 4)
        assert all(model.contains(a) for a in t.entries)
        assert generated_algebra(t).dim == model.dim
