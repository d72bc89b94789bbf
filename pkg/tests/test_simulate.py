import numpy as np
import pytest
from scipy import stats

from semistable_lab import (
    BrownianModel,
    SemistableModel,
    box_dim_graph,
    box_dim_range,
    empirical_char_check,
    sample_marginal,
    sample_path,
)
from semistable_lab.errors import ModelSpecError
from semistable_lab.simulate import DROP, GAUSSIAN_SUBSTITUTE

from helpers import stable_like_atomic


class TestSamplePath:
    def test_starts_at_origin_and_matches_grid(self):
        m = stable_like_atomic(1.2)
        path = sample_path(m, T=1.0, n_steps=2000, delta=1e-2, seed=0)
        assert path.values.shape == (2001, 1)
        assert np.all(path.values[0] == 0.0)
        assert path.times[0] == 0.0 and path.times[-1] == 1.0

    def test_reproducible(self):
        m = stable_like_atomic(1.2)
        a = sample_path(m, n_steps=500, delta=1e-2, seed=42)
        b = sample_path(m, n_steps=500, delta=1e-2, seed=42)
        assert np.array_equal(a.values, b.values)

    def test_brownian_marginal_variance(self):
        m = BrownianModel([[1.3]])
        samples = sample_marginal(m, t=1.0, n_paths=10_000, seed=1)
        var = samples.var()
        se = 1.3 * np.sqrt(2.0 / 10_000)
        assert abs(var - 1.3) < 3.0 * se

    def test_char_function_semistable(self):
        m = stable_like_atomic(1.8)
        rows = empirical_char_check(
            m, [0.3, 0.5, 1.0, 1.5, 2.0], n_paths=6000, delta=0.05, seed=7
        )
        for row in rows:
            assert abs(row["z_re"]) < 3.0
            assert abs(row["z_im"]) < 3.0

    def test_drop_policy_is_cruder_than_substitution(self):
        m = stable_like_atomic(1.8)
        xi = [1.0, 2.0]

        def worst_abs_err(policy):
            rows = empirical_char_check(
                m, xi, n_paths=20_000, delta=0.4, policy=policy, seed=11
            )
            return max(
                abs(r["ecf_re"] - r["target_re"]) + abs(r["ecf_im"] - r["target_im"])
                for r in rows
            )

        assert worst_abs_err(DROP) > worst_abs_err(GAUSSIAN_SUBSTITUTE)

    def test_rejects_unsupported_model(self):
        from semistable_lab import DensityExampleModel

        with pytest.raises(ModelSpecError):
            sample_path(DensityExampleModel(1.5, 0.5))

    def test_semi_selfsimilarity_energy_distance(self):
        # X(c t) and c^E X(t) agree in law at fixed t; two-sample energy
        # distance permutation test at the 1% level
        m = stable_like_atomic(1.4)
        t0 = 0.5
        a = sample_marginal(m, t=2.0 * t0, n_paths=1500, delta=1e-3, seed=3)[:, 0]
        b = sample_marginal(m, t=t0, n_paths=1500, delta=1e-3, seed=4)[:, 0]
        b_scaled = 2.0 ** (1.0 / 1.4) * b
        observed = stats.energy_distance(a, b_scaled)
        pooled = np.concatenate([a, b_scaled])
        rng = np.random.default_rng(5)
        exceed = 0
        n_perm = 200
        for _ in range(n_perm):
            rng.shuffle(pooled)
            stat = stats.energy_distance(pooled[:1500], pooled[1500:])
            exceed += stat >= observed
        p_value = (exceed + 1) / (n_perm + 1)
        assert p_value > 0.01


class TestBoxCounting:
    def test_deterministic_line_has_graph_dimension_one(self):
        # no jumps, no gaussian part, pure drift: the graph is a straight line
        m = SemistableModel(c=2.0, E=[[1.0]], atoms=[], drift=[-2.0])
        path = sample_path(m, n_steps=50_000, delta=1e-3, seed=0)
        assert path.values[-1, 0] == pytest.approx(2.0)
        est = box_dim_graph(path)
        assert est.value == pytest.approx(1.0, abs=0.05)

    def test_counts_monotone_in_scale(self):
        m = stable_like_atomic(1.8)
        path = sample_path(m, n_steps=100_000, delta=1e-2, seed=2)
        est = box_dim_range(path)
        counts = est.statistic  # grid is coarse -> fine, counts nondecreasing
        assert all(b >= a for a, b in zip(counts, counts[1:]))
        assert 0.0 <= est.value <= 1.0

    def test_graph_dim_within_bounds(self):
        m = stable_like_atomic(1.8)
        path = sample_path(m, n_steps=200_000, delta=5e-3, seed=3)
        est = box_dim_graph(path)
        assert 1.0 <= est.value <= 2.0

    def test_graph_dim_heavy_path_quick(self):
        m = stable_like_atomic(1.8)
        path = sample_path(m, n_steps=400_000, delta=5e-3, seed=4)
        ext = float(
            np.quantile(path.values, 0.995) - np.quantile(path.values, 0.005)
        )
        grid = [ext / 8.0 / 2**j for j in range(10)]
        est = box_dim_graph(path, scale_grid=grid)
        assert est.value == pytest.approx(2.0 - 1.0 / 1.8, abs=0.15)

    def test_range_dim_sparse_jump_path_quick(self):
        m = SemistableModel(c=2.0, E=[[2.0]], atoms=[([1.0], 1.0), ([-1.0], 1.0)])
        path = sample_path(m, n_steps=200_000, delta=1e-6, seed=4)
        ext = float(
            np.quantile(path.values, 0.995) - np.quantile(path.values, 0.005)
        )
        grid = [ext / 2**j for j in range(5, 20)]
        est = box_dim_range(path, scale_grid=grid)
        assert est.value == pytest.approx(0.5, abs=0.15)
