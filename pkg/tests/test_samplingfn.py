import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from orlicz_sampling.errors import ParameterError
from orlicz_sampling.nfunction import make_nfunction
from orlicz_sampling.samplingfn import (convex_minorant, interpolating_bound, lower_hull,
                                        loglog_slope_at_zero, raw_interpolating_bound,
                                        raw_sampling_bound, sampling_function, second_differences,
                                        secant_majorant)
from conftest import catalogue


class TestRaw:
    @pytest.mark.parametrize("a", [1.5, 2.0, 4.0])
    @pytest.mark.parametrize("t", [1e-5, 0.01, 0.5])
    def test_power(self, a, t):
        nf = make_nfunction("power", a)
        assert raw_sampling_bound(nf, t).value == pytest.approx(t ** a, rel=1e-12)
        assert raw_interpolating_bound(nf, t).value == pytest.approx(t ** a, rel=1e-12)

    @pytest.mark.parametrize("nf", catalogue(), ids=lambda f: f.label)
    def test_t_one(self, nf):
        assert raw_sampling_bound(nf, 1.0).value == pytest.approx(1.0, rel=1e-14)

    def test_power_log_target_shape(self, plog):
        t = 0.01
        val = raw_sampling_bound(plog, t).value
        target = t ** 2 / np.log1p(1 / t)
        assert 0.5 <= val / target <= 2.0
        # denser grid oracle
        x = np.logspace(np.log10(1 / t), np.log10(1e8 / t), 4000)
        assert val == pytest.approx(np.min(plog(t * x) / plog(x)), rel=1e-12)

    def test_power_log_sup_shape(self, plog):
        t = 0.01
        val = raw_interpolating_bound(plog, t).value
        x = np.logspace(np.log10(1 / t), np.log10(1e8 / t), 4000)
        assert val == pytest.approx(np.max(plog(t * x) / plog(x)), rel=1e-3)
        assert 0.5 <= val / t ** 2 <= 2.0

    @pytest.mark.parametrize("nf", catalogue(), ids=lambda f: f.label)
    def test_monotone_in_t(self, nf):
        t = np.logspace(-6, 0, 60)
        r = [raw_sampling_bound(nf, s).value for s in t]
        assert np.all(np.diff(r) >= 0)

    def test_range(self, square):
        with pytest.raises(ParameterError):
            raw_sampling_bound(square, 1.5)
        with pytest.raises(ParameterError):
            raw_sampling_bound(square, 0.1, x_points=100)


class TestHull:
    def test_idempotent(self, rng):
        t = np.sort(rng.uniform(0, 1, 50))
        y = rng.standard_normal(50)
        env, _ = convex_minorant(t, y)
        env2, _ = convex_minorant(t, env)
        np.testing.assert_allclose(env2, env, atol=1e-14)

    @settings(max_examples=50, deadline=None)
    @given(st.lists(st.floats(-10, 10, allow_nan=False), min_size=3, max_size=60))
    def test_minorant_is_convex_and_below(self, ys):
        y = np.array(ys)
        t = np.linspace(0.0, 1.0, y.size)
        env, v = convex_minorant(t, y)
        assert np.all(env <= y + 1e-12)
        assert np.all(second_differences(t, env) >= -1e-9)
        np.testing.assert_allclose(env[v], y[v])

    @settings(max_examples=50, deadline=None)
    @given(st.lists(st.floats(-10, 10, allow_nan=False), min_size=3, max_size=60))
    def test_majorant_is_convex_and_above(self, ys):
        y = np.array(ys)
        t = np.linspace(0.0, 1.0, y.size)
        env, _ = secant_majorant(t, y)
        assert np.all(env >= y - 1e-12)
        assert np.all(second_differences(t, env) >= -1e-6)

    def test_hull_endpoints(self):
        v = lower_hull(np.arange(5.0), np.array([0, 1, -1, 1, 0.0]))
        assert v[0] == 0 and v[-1] == 4

    def test_unsorted(self):
        with pytest.raises(ParameterError):
            lower_hull(np.array([1.0, 0.0]), np.zeros(2))


class TestTables:
    @pytest.mark.parametrize("a", [1.5, 2.0, 4.0])
    def test_power_envelope(self, a):
        tab = sampling_function(make_nfunction("power", a))
        np.testing.assert_allclose(tab.envelope, tab.t ** a, rtol=0, atol=1e-8)
        np.testing.assert_allclose(tab.raw, tab.envelope, rtol=0, atol=1e-10)
        assert tab.stabilized.all()

    def test_power_log(self, plog):
        tab = sampling_function(plog)
        m = (tab.t >= 1e-4) & (tab.t <= 1e-1)
        q = tab.envelope[m] * np.log1p(1 / tab.t[m]) / tab.t[m] ** 2
        assert q.max() / q.min() <= 100
        assert abs(loglog_slope_at_zero(tab.t, tab.envelope).value - 2) <= 0.05

    def test_ordering(self, plog):
        lo, hi = sampling_function(plog), interpolating_bound(plog)
        assert np.all(lo.envelope <= lo.raw * (1 + 1e-12))
        assert np.all(lo.raw <= hi.raw * (1 + 1e-12))
        assert np.all(hi.raw <= hi.envelope * (1 + 1e-12))
        assert not hi.canonical and lo.canonical

    def test_csv(self, square):
        text = sampling_function(square, np.logspace(-2, 0, 5)).to_csv().splitlines()
        assert text[0] == "t,raw,envelope,closed_form,ratio"
        assert len(text) == 6
        assert all(float(r.split(",")[-1]) == pytest.approx(1.0) for r in text[1:])

    def test_slope_of_pure_power(self):
        t = np.logspace(-6, 0, 200)
        assert loglog_slope_at_zero(t, t ** 3).value == pytest.approx(3.0, rel=1e-12)

    def test_bad_grid(self, square):
        with pytest.raises(ParameterError):
            sampling_function(square, [0.0, 0.5])
