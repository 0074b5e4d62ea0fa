import numpy as np
import pytest

from orlicz_sampling.hilbert import (dirichlet_norm, dirichlet_table, estimate_hilbert_norm,
                                     lemma_bounds, lemma_closed_forms_square, projection_tally,
                                     verify_dirichlet_lemma, verify_lambda_monotonicity,
                                     verify_projection_bound, weak_type_estimate)
from orlicz_sampling.nfunction import make_nfunction
from orlicz_sampling.errors import ParameterError
from orlicz_sampling.sampling import FamilySpec
from orlicz_sampling.trigpoly import (TrigPoly, constant, dirichlet, monomial, random_poly)
from conftest import catalogue


class TestDirichletNorm:
    @pytest.mark.parametrize("n", [0, 1, 5, 32, 128])
    def test_square(self, square, n):
        assert dirichlet_norm(square, n) ** 2 == pytest.approx(2 * n + 1, rel=1e-9)

    @pytest.mark.parametrize("nf", catalogue(), ids=lambda f: f.label)
    def test_d0(self, nf):
        assert dirichlet_norm(nf, 0) == pytest.approx(1.0, rel=1e-11)

    def test_power_log_inside_bracket(self, plog):
        n = 16
        lam = dirichlet_norm(plog, n)
        # the bracket, as a function of lambda, pins the modular value 2 pi
        lower, lower_bound, upper = lemma_bounds(plog, n, lam)
        assert lower_bound <= 2 * np.pi <= upper
        # invert both bounds: the norm lies between the two crossing points
        from scipy.optimize import brentq
        lo = brentq(lambda x: lemma_bounds(plog, n, x)[2] - 2 * np.pi, 1e-3, 1e4)
        hi = brentq(lambda x: lemma_bounds(plog, n, x)[0] - 2 * np.pi, 1e-3, 1e4)
        assert hi <= lam <= lo


class TestLemma:
    @pytest.mark.parametrize("n", range(1, 9))
    def test_square_closed_forms(self, square, n):
        lam = np.sqrt(2 * n + 1)
        chk = verify_dirichlet_lemma(square, n, lam)
        np.testing.assert_allclose([chk.lower, chk.middle, chk.upper_4pi],
                                   lemma_closed_forms_square(n, lam), rtol=1e-9)
        assert chk.holds

    @pytest.mark.parametrize("nf", catalogue(), ids=lambda f: f.label)
    def test_n0(self, nf):
        chk = verify_dirichlet_lemma(nf, 0, 1.3)
        assert chk.middle == pytest.approx(2 * np.pi * nf(1 / 1.3), rel=1e-12)
        assert chk.holds

    @pytest.mark.parametrize("nf", catalogue(), ids=lambda f: f.label)
    def test_large_lambda(self, nf):
        n = 6
        chk = verify_dirichlet_lemma(nf, n, 1e3 * (2 * n + 1))
        assert max(chk.lower, chk.middle, chk.upper_4pi) < 1e-3
        assert chk.holds

    def test_reports(self, square):
        lo, up = verify_dirichlet_lemma(square, 3, 2.0).reports(square)
        assert lo.check == "bracket_lower" and up.check == "bracket_upper"
        assert "upper_2pi_holds" in up.detail

    def test_table_csv(self, square):
        text = dirichlet_table(square, [1, 2, 3]).to_csv().splitlines()
        assert text[0] == "n,lambda_n,lower_bound,middle,upper_bound_4pi,upper_bound_2pi_holds"
        lam = [float(r.split(",")[1]) for r in text[1:]]
        np.testing.assert_allclose(lam, np.sqrt([3, 5, 7]), rtol=1e-10)

    def test_lambda_positive(self, square):
        with pytest.raises(ParameterError):
            lemma_bounds(square, 2, 0.0)


class TestMonotonicity:
    def test_square(self, square):
        r = verify_lambda_monotonicity(square, 12)
        assert r.passed
        lam = np.sqrt(2 * np.arange(13) + 1)
        np.testing.assert_allclose(r.detail["worst_ratio"],
                                   np.max(lam[:-1] / (4 * np.pi * lam[1:])), rtol=1e-9)

    def test_single_comparison(self, plog):
        r = verify_lambda_monotonicity(plog, 1)
        assert r.detail["comparisons"] == 1 and r.passed

    def test_needs_one(self, square):
        with pytest.raises(ParameterError):
            verify_lambda_monotonicity(square, 0)


class TestHilbertNorm:
    def test_square_is_one(self, square):
        est = estimate_hilbert_norm(square, FamilySpec(count=40), n=8)
        assert est.value == pytest.approx(1.0, rel=1e-9)

    def test_square_mean_drags_ratio(self, square):
        from orlicz_sampling.hilbert import luxemburg_norm_continuous
        from orlicz_sampling.trigpoly import hilbert_transform
        f = TrigPoly([0, 1, 1])
        r = (luxemburg_norm_continuous(square, hilbert_transform(f)).value
             / luxemburg_norm_continuous(square, f).value)
        assert r == pytest.approx(1 / np.sqrt(2), rel=1e-10)

    def test_power_log_stable(self, plog):
        a = estimate_hilbert_norm(plog, FamilySpec(count=100))
        b = estimate_hilbert_norm(plog, FamilySpec(count=400))
        assert a.value <= b.value <= 1.1 * a.value


class TestWeakType:
    def test_constant(self):
        assert weak_type_estimate(constant(2.0)).value == 0.0

    def test_exponential(self):
        assert weak_type_estimate(monomial(1)).value == pytest.approx(1.0, abs=1e-9)

    def test_dirichlet_bounded(self):
        vals = [weak_type_estimate(dirichlet(n)).value for n in (1, 2, 4, 8, 16, 32)]
        assert max(vals) < 1.0

    def test_grid_size(self):
        with pytest.raises(ParameterError):
            weak_type_estimate(monomial(1), 1024)


class TestProjectionBound:
    def test_square_orthogonal(self, square):
        fam = [random_poly(10, s) for s in range(5)]
        reps = verify_projection_bound(square, fam, 4, 1.0)
        assert projection_tally(reps) == {"pass": 5, "inconclusive": 0}

    def test_next_frequency(self, plog):
        reps = verify_projection_bound(plog, [monomial(5)], 4, 1.0)
        assert reps[0].lhs == 0.0 and reps[0].passed

    def test_power_log_tally(self, plog):
        fam = [random_poly(12, s) for s in range(6)]
        h = estimate_hilbert_norm(plog, FamilySpec(count=30), n=12)
        tally = projection_tally(verify_projection_bound(plog, fam, 6, h))
        assert tally["pass"] + tally["inconclusive"] == 6
        assert all(not r.hard for r in verify_projection_bound(plog, fam[:1], 6, h))

    def test_degree_required(self, square):
        with pytest.raises(ParameterError):
            verify_projection_bound(square, [random_poly(3, 0)], 4, 1.0)
