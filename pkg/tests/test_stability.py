import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fuzzyplate.errors import ValidationError
from fuzzyplate.fuzzy import Interval
from fuzzyplate.solver import GridSpec, IntervalParams, PhysicalParams, step_crisp
from fuzzyplate.stability import (build_update_matrix, check_stability, critical_d,
                                  seeded_error_experiment, stability_summary)

NOMINAL = PhysicalParams(2.17e-4, 0.040, 40.0)
C = NOMINAL.coefficient  # 0.135625 1/s


def grid_with_d(d, nodes=41):
    return GridSpec(nodes, d / (C * (nodes - 1) ** 2), ())


class TestUpdateMatrix:
    def test_identity_at_zero(self):
        np.testing.assert_array_equal(build_update_matrix(0.0, 6).dense(), np.eye(6))

    def test_interior_rows(self):
        m = build_update_matrix(0.4, 5).dense()
        for i in range(1, 4):
            np.testing.assert_allclose(m[i, i - 1:i + 2], [0.4, 0.2, 0.4])
        np.testing.assert_array_equal(m[0], [1, 0, 0, 0, 0])
        np.testing.assert_array_equal(m[4], [0, 0, 0, 0, 1])

    def test_too_small(self):
        with pytest.raises(ValidationError):
            build_update_matrix(0.1, 2)

    @given(st.floats(0, 1), st.integers(3, 30), st.integers(0, 1000))
    @settings(max_examples=40)
    def test_matches_stencil(self, d, n, seed):
        u = np.random.default_rng(seed).uniform(-5, 5, n)
        u[-1] = 0.0
        m = build_update_matrix(d, n)
        np.testing.assert_allclose(m.apply(u), step_crisp(u, d), rtol=1e-12, atol=1e-12)
        np.testing.assert_allclose(m.dense() @ u, step_crisp(u, d), rtol=1e-12, atol=1e-12)

    def test_interval_uses_upper_endpoint(self):
        m = build_update_matrix(Interval(0.1, 0.3), 5)
        assert m.diag[2] == pytest.approx(0.4)
        assert m.inf_norm() == 1.0


class TestCheckStability:
    def test_examples(self):
        r = check_stability(Interval(0.1, 0.4444), 1.0)
        assert r.inf_norm == 1.0 and r.stable
        r = check_stability(Interval(0.2, 0.6), 1.0)
        assert r.inf_norm == pytest.approx(1.4) and not r.stable
        r = check_stability(Interval(0.0, 0.0), 1.0)
        assert r.inf_norm == 1.0 and r.stable

    @given(st.floats(0, 2))
    def test_classical_bound(self, d_hi):
        assert check_stability(Interval(0.0, d_hi)).stable == (d_hi <= 0.5)

    @given(st.floats(0, 2), st.integers(3, 12))
    @settings(max_examples=30)
    def test_norm_matches_dense_row_sums(self, d, n):
        dense = build_update_matrix(d, n).dense()
        assert check_stability(d).inf_norm == pytest.approx(np.abs(dense).sum(axis=1).max(), rel=1e-12)

    def test_max_stable_dt(self):
        r = check_stability(Interval(0.1, 0.4), dt=1e-3)
        assert r.max_stable_dt == pytest.approx(1.25e-3)
        assert critical_d(1.0) == 0.5
        assert critical_d(0.5) is None

    def test_spectral_radius(self):
        r = check_stability(0.4, nodes=11)
        assert r.spectral_radius == pytest.approx(1.0)  # unit boundary rows
        r = check_stability(0.6, nodes=11)
        interior = 1 - 4 * 0.6 * np.sin(9 * np.pi / 20) ** 2
        assert r.spectral_radius == pytest.approx(abs(interior))


class TestSeededError:
    def test_stable_grid_non_expansive(self):
        g = grid_with_d(0.434)
        assert g.diffusion_number(C) == pytest.approx(0.434)
        probe = seeded_error_experiment(NOMINAL, g, steps=500)
        assert probe.growth[0] == 1.0 and len(probe.growth) == 501
        assert probe.max_growth <= 1 + 1e-9
        assert probe.epsilon0 == pytest.approx(0.04)

    def test_unstable_grid_grows(self):
        probe = seeded_error_experiment(NOMINAL, grid_with_d(0.6), steps=200)
        assert probe.max_growth > 10

    def test_zero_seed_degenerate(self):
        probe = seeded_error_experiment(NOMINAL, grid_with_d(0.3), epsilon0=0.0, steps=10)
        assert probe.degenerate and probe.growth == [0.0] * 11

    def test_matches_matrix_powers(self):
        d, n, steps = 0.6, 41, 60
        g = grid_with_d(d, n)
        probe = seeded_error_experiment(NOMINAL, g, epsilon0=1e-3, steps=steps)
        m = build_update_matrix(g.diffusion_number(C), n).dense()
        e = np.zeros(n)
        e[1] = 1e-3
        expected = [1.0]
        for _ in range(steps):
            e = m @ e
            expected.append(np.max(np.abs(e)) / 1e-3)
        np.testing.assert_allclose(probe.growth, expected, rtol=1e-6)

    def test_independent_of_u0(self):
        g = grid_with_d(0.45)
        a = seeded_error_experiment(NOMINAL, g, epsilon0=0.01, steps=300)
        b = seeded_error_experiment(PhysicalParams(NOMINAL.nu, NOMINAL.h, 0.0), g, epsilon0=0.01,
                                    steps=300)
        np.testing.assert_allclose(a.growth, b.growth, rtol=1e-9, atol=1e-12)

    @pytest.mark.parametrize("d", [0.2, 0.5, 0.55, 0.7])
    def test_growth_bounded_by_norm_powers(self, d):
        g = grid_with_d(d)
        probe = seeded_error_experiment(NOMINAL, g, steps=80)
        norm = check_stability(g.diffusion_number(C)).inf_norm
        for k, gk in enumerate(probe.growth):
            assert gk <= norm ** k * (1 + 1e-9)

    def test_interval_params(self):
        p = IntervalParams(Interval(1.8e-4, 2.5e-4), Interval(0.03, 0.05), Interval(30, 50))
        g = GridSpec(41, 0.18 / 178, ())
        probe = seeded_error_experiment(p, g, steps=500)
        assert probe.max_growth <= 1 + 1e-9
        summary = stability_summary(p, GridSpec(41, 0.18 / 178, (0.18,)))
        assert summary["stable"] and summary["seeded_error"]["max_growth"] <= 1 + 1e-9

    def test_bad_inputs(self):
        with pytest.raises(ValidationError):
            seeded_error_experiment(NOMINAL, grid_with_d(0.3), epsilon0=-1.0)
        with pytest.raises(ValidationError):
            seeded_error_experiment(NOMINAL, grid_with_d(0.3), node=0)
