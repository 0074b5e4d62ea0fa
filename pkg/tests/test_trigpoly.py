import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from orlicz_sampling.errors import ConfigError, DegreeError, ParameterError
from orlicz_sampling.trigpoly import (TrigPoly, constant, dirichlet, dirichlet_closed_form,
                                      dumps, embed, evaluate, hilbert_transform, loads,
                                      modulate, monomial, nodes, project, project_composition,
                                      random_poly, riesz_minus, riesz_plus, sample_nodes,
                                      sample_uniform, spike_poly)


def coeff_vectors(max_n=12):
    return st.integers(0, max_n).flatmap(lambda n: st.lists(
        st.complex_numbers(max_magnitude=10, allow_nan=False, allow_infinity=False),
        min_size=2 * n + 1, max_size=2 * n + 1))


class TestNodes:
    def test_n1(self):
        np.testing.assert_allclose(nodes(1).x, [0, 2 * np.pi / 3, 4 * np.pi / 3], atol=1e-15)

    def test_n0(self):
        np.testing.assert_array_equal(nodes(0).x, [0.0])

    @pytest.mark.parametrize("n", [0, 1, 7, 64])
    def test_weights_and_order(self, n):
        ns = nodes(n)
        assert abs(ns.weights.sum() - 1) <= 1e-15
        assert np.all(np.diff(ns.x) > 0)
        np.testing.assert_array_equal(ns.k, np.arange(-n, n + 1))

    def test_negative(self):
        with pytest.raises(ParameterError):
            nodes(-1)


class TestEvaluate:
    def test_exp_at_pi(self):
        assert evaluate(monomial(1), np.pi) == pytest.approx(-1.0, abs=1e-15)

    def test_dirichlet_at_zero(self):
        assert evaluate(dirichlet(2), 0.0) == pytest.approx(5.0, abs=1e-14)

    def test_two_paths_random_points(self):
        f = random_poly(16, 42)
        x = np.random.default_rng(42).uniform(0, 2 * np.pi, 7)
        direct = np.array([sum(f.coeff(k) * np.exp(1j * k * xi) for k in range(-16, 17)) for xi in x])
        np.testing.assert_allclose(evaluate(f, x), direct, rtol=0, atol=1e-12)

    @pytest.mark.parametrize("n", [0, 3, 16])
    def test_fft_path_matches_direct(self, n):
        f = random_poly(n, 5)
        np.testing.assert_allclose(sample_nodes(f), evaluate(f, nodes(n).x), atol=1e-12)

    def test_folding_below_degree(self):
        # fewer points than frequencies: still exact point values
        f = random_poly(10, 3)
        x = 2 * np.pi * np.arange(7) / 7
        np.testing.assert_allclose(sample_uniform(f, 7), evaluate(f, x), atol=1e-12)

    def test_sample_on_coarser_grid_rejected(self):
        with pytest.raises(DegreeError):
            sample_nodes(random_poly(5, 0), 4)


class TestDirichlet:
    @pytest.mark.parametrize("n", [1, 4, 9])
    def test_values_at_nodes(self, n):
        v = sample_nodes(dirichlet(n))
        assert v[0] == pytest.approx(2 * n + 1, abs=1e-12)
        np.testing.assert_allclose(v[1:], 0, atol=1e-12)

    def test_d0(self):
        assert dirichlet(0).allclose(constant(1.0))

    def test_closed_form(self):
        assert evaluate(dirichlet(3), 1.0).real == pytest.approx(dirichlet_closed_form(3, 1.0), abs=1e-10)
        x = np.linspace(0, 2 * np.pi, 1001)
        np.testing.assert_allclose(evaluate(dirichlet(5), x).real, dirichlet_closed_form(5, x),
                                   atol=1e-10)


class TestSpikes:
    @pytest.mark.parametrize("S", [[0], [-3, 1, 2], list(range(-4, 5))])
    def test_pattern(self, S):
        v = sample_nodes(spike_poly(4, S))
        expect = np.isin(np.arange(-4, 5), S).astype(float)
        np.testing.assert_allclose(v, expect, atol=1e-12)

    def test_all_nodes_is_one(self):
        assert spike_poly(6, range(-6, 7)).allclose(constant(1.0, 6), atol=1e-13)

    def test_single_coefficients(self):
        n, j = 5, 2
        xj = nodes(n).x[j + n]
        m = np.arange(-n, n + 1)
        np.testing.assert_allclose(spike_poly(n, [j]).coeffs, np.exp(-1j * m * xj) / (2 * n + 1),
                                   atol=1e-15)

    def test_bad_sets(self):
        with pytest.raises(ParameterError):
            spike_poly(3, [])
        with pytest.raises(ParameterError):
            spike_poly(3, [4])


class TestHilbert:
    def test_cos_to_sin(self):
        cos = TrigPoly([0.5, 0, 0.5])
        sin = TrigPoly([0.5j, 0, -0.5j])
        assert hilbert_transform(cos).allclose(sin, atol=1e-15)

    def test_constant(self):
        assert hilbert_transform(constant(3.0, 2)).allclose(constant(0.0), atol=0)

    @settings(max_examples=50, deadline=None)
    @given(coeff_vectors())
    def test_involution(self, c):
        f = TrigPoly(c)
        hh = hilbert_transform(hilbert_transform(f))
        assert hh.allclose(-(f - constant(f.mean, f.degree)), atol=1e-12)

    @settings(max_examples=50, deadline=None)
    @given(coeff_vectors())
    def test_energy(self, c):
        f = TrigPoly(c)
        h = hilbert_transform(f)
        np.testing.assert_allclose(np.sum(np.abs(h.coeffs) ** 2),
                                   np.sum(np.abs(f.coeffs) ** 2) - abs(f.mean) ** 2,
                                   rtol=1e-12, atol=1e-12)
        assert h.mean == 0

    def test_riesz_split(self):
        f = random_poly(6, 2)
        parts = riesz_plus(f) + riesz_minus(f) + constant(f.mean, 6)
        assert parts.allclose(f, atol=1e-14)
        assert np.all(riesz_plus(f).coeffs[:7] == 0)


class TestProjection:
    def test_kills_next_frequency(self):
        assert project(monomial(5), 4).allclose(constant(0.0), atol=0)

    def test_identity_below_degree(self):
        f = random_poly(3, 1)
        assert project(f, 5) is f

    @pytest.mark.parametrize("seed", range(10))
    def test_composition_equals_truncation(self, seed):
        n = 6
        g = random_poly(2 * n + 1, seed)
        assert project_composition(g, n).allclose(project(g, n), atol=1e-12)

    def test_literal_halves_boundary_terms(self):
        # (I +- iH)/2 keep half of the frequency that lands on 0 after modulation
        n = 4
        g = random_poly(2 * n + 1, 0)
        diff = embed(project_composition(g, n, literal=True), 2 * n + 1) - embed(project(g, n), 2 * n + 1)
        expect = np.zeros(4 * n + 3, complex)
        for k in (n + 1, -(n + 1)):
            expect[k + 2 * n + 1] = 0.5 * g.coeff(k)
        np.testing.assert_allclose(diff.coeffs, expect, atol=1e-12)

    def test_idempotent_and_linear(self):
        f, g = random_poly(9, 1), random_poly(9, 2)
        assert project(project(f, 4), 4).allclose(project(f, 4))
        assert project(2 * f + g, 4).allclose(2 * project(f, 4) + project(g, 4), atol=1e-13)

    def test_negative(self):
        with pytest.raises(DegreeError):
            project(random_poly(3, 0), -1)


class TestRandom:
    def test_deterministic(self):
        np.testing.assert_array_equal(random_poly(8, 3).coeffs, random_poly(8, 3).coeffs)

    def test_sparse_three(self):
        assert np.count_nonzero(random_poly(10, 4, "sparse").coeffs) == 3

    def test_lacunary_support(self):
        c = random_poly(20, 1, "lacunary").coeffs
        support = set(np.flatnonzero(c) - 20)
        assert support == {1, 2, 4, 8, 16, -1, -2, -4, -8, -16}

    def test_gaussian_modulus(self):
        mods = np.concatenate([np.abs(random_poly(8, s).coeffs) for s in range(10000)])
        target, sd = np.sqrt(np.pi) / 2, np.sqrt(1 - np.pi / 4)
        assert abs(mods.mean() - target) <= 3 * sd / np.sqrt(mods.size)

    def test_unknown(self):
        with pytest.raises(ParameterError):
            random_poly(3, 0, "uniform")


class TestAlgebra:
    def test_node_average_is_mean(self):
        for n in (0, 3, 17):
            f = random_poly(n, n)
            assert np.mean(sample_nodes(f)) == pytest.approx(f.mean, abs=1e-12)

    def test_modulate(self):
        f = random_poly(3, 0)
        x = np.linspace(0, 6, 11)
        np.testing.assert_allclose(evaluate(modulate(f, -5), x), np.exp(-5j * x) * evaluate(f, x),
                                   atol=1e-12)

    def test_even_length_rejected(self):
        with pytest.raises(DegreeError):
            TrigPoly([1, 2])

    def test_embed_down_rejected(self):
        with pytest.raises(DegreeError):
            embed(random_poly(3, 0), 2)


class TestSerialization:
    def test_roundtrip(self):
        f = random_poly(5, 9)
        g = loads(dumps(f))
        np.testing.assert_array_equal(f.coeffs, g.coeffs)

    def test_comments(self):
        f = loads("# degree\n0\n2.5 -1  # constant\n")
        assert f.mean == 2.5 - 1j

    @pytest.mark.parametrize("text", ["", "1\n1 0\n", "x\n", "0\n1 2 3\n"])
    def test_malformed(self, text):
        with pytest.raises(ConfigError):
            loads(text)
