import numpy as np
import pytest

import discgeom as dg
from discgeom.calculus import basis_function

from conftest import path_graph, random_connected_graph


class TestGraphSpace:
    def test_rejects_nonpositive_measure(self):
        with pytest.raises(ValueError, match="positive"):
            dg.GraphSpace(np.array([1.0, 0.0]), np.zeros((2, 2)))

    def test_rejects_asymmetric_weights(self):
        w = np.array([[0.0, 1.0], [2.0, 0.0]])
        with pytest.raises(ValueError, match="symmetric"):
            dg.GraphSpace(np.ones(2), w)

    def test_symmetrizes_within_tolerance(self):
        w = np.array([[0.0, 1.0], [1.0 + 5e-13, 0.0]])
        g = dg.GraphSpace(np.ones(2), w)
        assert g.weights[0, 1] == g.weights[1, 0]

    def test_rejects_negative_weight(self):
        w = np.array([[0.0, -1.0], [-1.0, 0.0]])
        with pytest.raises(ValueError, match="non-negative"):
            dg.GraphSpace(np.ones(2), w)

    def test_rejects_nonzero_diagonal(self):
        w = np.array([[1.0, 0.0], [0.0, 0.0]])
        with pytest.raises(ValueError, match="diagonal"):
            dg.GraphSpace(np.ones(2), w)

    def test_degree_recomputable(self, rng):
        g = random_connected_graph(rng, 7)
        assert np.allclose(g.degree, g.weights.sum(axis=1))

    def test_connectivity(self):
        assert path_graph(4).is_connected
        w = np.zeros((4, 4))
        w[0, 1] = w[1, 0] = 1.0
        w[2, 3] = w[3, 2] = 1.0
        assert not dg.GraphSpace(np.ones(4), w).is_connected

    def test_immutable_arrays(self, p3):
        with pytest.raises(ValueError):
            p3.weights[0, 1] = 5.0


class TestDifferential:
    def test_constant_vanishes(self, p3):
        assert np.all(dg.differential(p3, np.ones(3)) == 0.0)

    def test_two_point(self, k2):
        u = dg.differential(k2, np.array([0.0, 1.0]))
        assert u[0, 1] == 1.0 and u[1, 0] == -1.0

    def test_hand_expansion_n3(self, p3):
        u = dg.differential(p3, np.array([1.0, 4.0, 9.0]))
        assert (u[0, 1], u[0, 2], u[1, 2]) == (3.0, 8.0, 5.0)
        assert np.all(u == -u.T)
        assert np.all(np.diag(u) == 0.0)

    def test_dimension_mismatch(self, p3):
        with pytest.raises(ValueError):
            dg.differential(p3, np.ones(4))


class TestPointwiseProduct:
    def test_unity(self, rng):
        f = rng.standard_normal(5)
        assert np.all(dg.pointwise_product(f, np.ones(5)) == f)

    def test_idempotent_basis(self):
        for i in range(3):
            for j in range(3):
                prod = dg.pointwise_product(basis_function(3, i), basis_function(3, j))
                expected = basis_function(3, i) if i == j else np.zeros(3)
                assert np.all(prod == expected)

    def test_values(self):
        assert np.all(dg.pointwise_product([1.0, 2.0], [3.0, 4.0]) == [3.0, 8.0])

    def test_mismatch(self):
        with pytest.raises(ValueError):
            dg.pointwise_product(np.ones(2), np.ones(3))


class TestModuleAction:
    def test_identity_action(self, rng):
        u = rng.standard_normal((4, 4))
        np.fill_diagonal(u, 0.0)
        one = np.ones(4)
        assert np.all(dg.module_action(one, u, one) == u)

    def test_left_action_zeroes_other_rows(self, rng):
        u = rng.standard_normal((4, 4))
        np.fill_diagonal(u, 0.0)
        acted = dg.module_action(basis_function(4, 2), u, np.ones(4))
        assert np.all(acted[2] == u[2])
        acted[2] = 0.0
        assert np.all(acted == 0.0)

    def test_leibniz_rule(self, rng):
        for n in range(2, 7):
            g = random_connected_graph(rng, n)
            f = rng.standard_normal(n)
            h = rng.standard_normal(n)
            one = np.ones(n)
            lhs = dg.differential(g, dg.pointwise_product(f, h))
            rhs = dg.module_action(one, dg.differential(g, f), h) \
                + dg.module_action(f, dg.differential(g, h), one)
            assert np.max(np.abs(lhs - rhs)) <= 1e-12 * max(1.0, np.max(np.abs(lhs)))


class TestIntegralAndInner:
    def test_integral_of_unity_is_volume(self, rng):
        g = random_connected_graph(rng, 6)
        assert dg.integral(g, np.ones(6)) == pytest.approx(g.volume, abs=1e-14)

    def test_integral_value(self):
        g = dg.GraphSpace(np.array([1.0, 2.0]), np.zeros((2, 2)))
        assert dg.integral(g, np.array([3.0, 4.0])) == 11.0

    def test_integral_of_basis(self, rng):
        g = random_connected_graph(rng, 5)
        for i in range(5):
            assert dg.integral(g, basis_function(5, i)) == g.mu[i]

    def test_evaluation_identity(self, rng):
        g = random_connected_graph(rng, 6)
        f = rng.standard_normal(6)
        for i in range(6):
            probe = basis_function(6, i) / g.mu[i]
            assert dg.inner_a(g, probe, f) == pytest.approx(f[i], abs=1e-12)

    def test_inner_a_positive_definite(self, rng):
        g = random_connected_graph(rng, 6)
        f = rng.standard_normal(6)
        assert dg.inner_a(g, f, f) > 0
        assert dg.inner_a(g, np.zeros(6), np.zeros(6)) == 0.0

    def test_inner_a_value(self):
        g = dg.GraphSpace(np.array([2.0, 3.0]), np.zeros((2, 2)))
        assert dg.inner_a(g, np.array([1.0, 1.0]), np.array([1.0, -1.0])) == -1.0


class TestInnerForm:
    def test_degree_identity(self, rng):
        g = random_connected_graph(rng, 6)
        one = np.ones(6)
        for i in range(6):
            e_i = basis_function(6, i)
            u = dg.module_action(e_i, dg.differential(g, e_i), one)
            assert dg.inner_form(g, u, u) == pytest.approx(g.degree[i], rel=1e-12)

    def test_single_entry(self):
        w = np.array([[0.0, 5.0], [5.0, 0.0]])
        g = dg.GraphSpace(np.ones(2), w)
        u = np.array([[0.0, 1.0], [0.0, 0.0]])
        assert dg.inner_form(g, u, u) == 5.0

    def test_bimodule_adjoint_identity(self, rng):
        g = random_connected_graph(rng, 5)
        f = rng.standard_normal(5)
        h = rng.standard_normal(5)
        u = rng.standard_normal((5, 5))
        v = rng.standard_normal((5, 5))
        np.fill_diagonal(u, 0.0)
        np.fill_diagonal(v, 0.0)
        lhs = dg.inner_form(g, dg.module_action(f, u, h), v)
        rhs = dg.inner_form(g, u, dg.module_action(f, v, h))
        assert lhs == pytest.approx(rhs, abs=1e-12 * max(1.0, abs(lhs)))


class TestDirichletEnergy:
    def test_basis_table(self, rng):
        # E(e_i, e_i) = deg(i) and E(e_i, e_j) = -w_ij off the diagonal.
        g = random_connected_graph(rng, 6)
        for i in range(6):
            for j in range(6):
                e = dg.dirichlet_energy(g, basis_function(6, i), basis_function(6, j))
                expected = g.degree[i] if i == j else -g.weights[i, j]
                assert e == pytest.approx(expected, abs=1e-12)

    def test_constant_annihilated(self, rng):
        g = random_connected_graph(rng, 6)
        assert dg.dirichlet_energy(g, np.ones(6), rng.standard_normal(6)) == 0.0

    def test_path_value(self, p3):
        assert dg.dirichlet_energy(p3, np.array([0.0, 1.0, 2.0]), np.array([0.0, 1.0, 2.0])) == 2.0

    def test_symmetric_and_nonnegative(self, rng):
        g = random_connected_graph(rng, 7)
        f = rng.standard_normal(7)
        h = rng.standard_normal(7)
        assert dg.dirichlet_energy(g, f, h) == dg.dirichlet_energy(g, h, f)
        assert dg.dirichlet_energy(g, f, f) >= 0.0

    def test_zero_iff_constant_when_connected(self, rng):
        g = random_connected_graph(rng, 6)
        f = rng.standard_normal(6)
        assert dg.dirichlet_energy(g, f, f) > 0
        assert dg.dirichlet_energy(g, np.full(6, 3.7), np.full(6, 3.7)) == 0.0

    def test_measure_independent_exactly(self, rng):
        g = random_connected_graph(rng, 6)
        f = rng.standard_normal(6)
        h = rng.standard_normal(6)
        other = g.with_measure(rng.uniform(0.1, 5.0, size=6))
        assert dg.dirichlet_energy(g, f, h) == dg.dirichlet_energy(other, f, h)

    def test_half_form_inner_product(self, rng):
        g = random_connected_graph(rng, 6)
        f = rng.standard_normal(6)
        h = rng.standard_normal(6)
        expected = 0.5 * dg.inner_form(g, dg.differential(g, f), dg.differential(g, h))
        assert dg.dirichlet_energy(g, f, h) == pytest.approx(expected, abs=1e-12)


class TestCodifferential:
    def test_zero_form(self, p3):
        assert np.all(dg.codifferential(p3, np.zeros((3, 3))) == 0.0)

    def test_symmetric_form_annihilated(self, rng):
        g = random_connected_graph(rng, 5)
        u = rng.standard_normal((5, 5))
        u = u + u.T
        np.fill_diagonal(u, 0.0)
        assert np.max(np.abs(dg.codifferential(g, u))) <= 1e-12

    def test_adjointness_on_basis(self, rng):
        # Brute-force adjointness over every basis function on n = 4.
        g = random_connected_graph(rng, 4)
        u = rng.standard_normal((4, 4))
        np.fill_diagonal(u, 0.0)
        for i in range(4):
            e_i = basis_function(4, i)
            lhs = dg.inner_a(g, dg.codifferential(g, u), e_i)
            rhs = dg.inner_form(g, u, dg.differential(g, e_i))
            assert lhs == pytest.approx(rhs, abs=1e-12 * max(1.0, abs(rhs)))

    def test_adjointness_random(self, rng):
        for _ in range(100):
            n = int(rng.integers(2, 9))
            g = random_connected_graph(rng, n)
            u = rng.standard_normal((n, n))
            np.fill_diagonal(u, 0.0)
            f = rng.standard_normal(n)
            lhs = dg.inner_a(g, dg.codifferential(g, u), f)
            rhs = dg.inner_form(g, u, dg.differential(g, f))
            scale = max(1.0, abs(lhs), abs(rhs))
            assert abs(lhs - rhs) <= 1e-10 * scale


class TestLaplacian:
    def test_constants_harmonic(self, rng):
        g = random_connected_graph(rng, 6)
        assert np.max(np.abs(dg.laplacian_apply(g, np.ones(6)))) == 0.0

    def test_k2_fixture(self, k2):
        assert np.all(dg.laplacian_apply(k2, np.array([0.0, 1.0])) == [-1.0, 1.0])

    def test_energy_pairing(self, rng):
        for _ in range(25):
            n = int(rng.integers(2, 9))
            g = random_connected_graph(rng, n)
            f = rng.standard_normal(n)
            h = rng.standard_normal(n)
            lhs = dg.inner_a(g, f, dg.laplacian_apply(g, h))
            rhs = dg.dirichlet_energy(g, f, h)
            assert abs(lhs - rhs) <= 1e-10 * max(1.0, abs(rhs))

    def test_matrix_consistency(self, rng):
        g = random_connected_graph(rng, 8)
        f = rng.standard_normal(8)
        explicit = dg.laplacian_matrix(g) @ f
        assert np.max(np.abs(dg.laplacian_apply(g, f) - explicit)) <= 1e-12

    def test_columnwise_application(self, rng):
        g = random_connected_graph(rng, 5)
        r = rng.standard_normal((5, 3))
        out = dg.laplacian_apply(g, r)
        for s in range(3):
            assert np.allclose(out[:, s], dg.laplacian_apply(g, r[:, s]))


class TestVolumeAndMean:
    def test_empty_and_full(self, rng):
        g = random_connected_graph(rng, 5)
        assert dg.volume(g, []) == 0.0
        assert dg.volume(g, range(5)) == pytest.approx(g.volume, abs=1e-14)

    def test_subset_value(self):
        g = dg.GraphSpace(np.array([1.0, 2.0, 3.0]), np.zeros((3, 3)))
        assert dg.volume(g, [0, 2]) == 4.0

    def test_mean(self):
        g = dg.GraphSpace(np.ones(2), np.zeros((2, 2)))
        assert dg.mean(g, np.array([0.0, 2.0])) == 1.0

    def test_rejects_bad_subset(self, p3):
        with pytest.raises(ValueError):
            dg.volume(p3, [0, 0])
        with pytest.raises(ValueError):
            dg.volume(p3, [5])


class TestPartition:
    def test_requires_nonempty_blocks(self):
        with pytest.raises(ValueError, match="non-empty"):
            dg.Partition(np.array([0, 0, 0]), 2)

    def test_block_and_indicator(self):
        p = dg.Partition(np.array([0, 1, 0]), 2)
        assert list(p.block(0)) == [0, 2]
        assert np.all(p.indicator(1) == [0.0, 1.0, 0.0])
