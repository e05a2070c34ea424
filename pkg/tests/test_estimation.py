import numpy as np
import pytest

from fuzzyirt import (
    GsConfig,
    ItemParams,
    PriorConfig,
    ResponseMatrix,
    default_theta_grid,
    estimate_abilities_map,
    estimate_ability_map,
    estimate_item_params,
    fit_item_params,
    gauss_seidel_estimate,
    icc_probability,
    log_likelihood,
    standardize,
)


def _matrix(data, n_students=None, n_items=None):
    data = np.asarray(data)
    students = tuple(f"s{i}" for i in range(data.shape[0]))
    items = tuple(f"q{j}" for j in range(data.shape[1]))
    return ResponseMatrix(data, students, items)


class TestResponseMatrix:
    """Validation of the students x items response table."""

    def test_shape_properties(self):
        m = _matrix([[1, 0, -1], [0, 1, 1]])
        assert (m.n_students, m.n_items) == (2, 3)

    def test_rejects_bad_cells(self):
        with pytest.raises(ValueError, match="must be 1, 0 or -1"):
            _matrix([[1, 2], [0, 1]])

    def test_rejects_all_missing_row(self):
        with pytest.raises(ValueError, match="student s1"):
            _matrix([[1, 0], [-1, -1]])

    def test_rejects_all_missing_column(self):
        with pytest.raises(ValueError, match="item q1"):
            _matrix([[1, -1], [0, -1]])

    def test_rejects_duplicate_ids(self):
        with pytest.raises(ValueError, match="duplicate"):
            ResponseMatrix(np.array([[1], [0]]), ("s0", "s0"), ("q0",))

    def test_rejects_id_length_mismatch(self):
        with pytest.raises(ValueError):
            ResponseMatrix(np.array([[1], [0]]), ("s0",), ("q0",))

    def test_select_students_reorders(self):
        m = _matrix([[1, 0], [0, 1], [1, 1]])
        sub = m.select_students(["s2", "s0"])
        assert sub.student_ids == ("s2", "s0")
        assert sub.data.tolist() == [[1, 1], [1, 0]]
        assert sub.item_ids == m.item_ids


class TestLogLikelihood:
    """Pattern log-likelihood under fixed item parameters."""

    def test_coin_flip_pair(self):
        items = [ItemParams(1.0, 0.0, 0.0)] * 2
        ll = log_likelihood([1, 0], items, 0.0)
        assert ll == pytest.approx(2 * np.log(0.5))

    def test_missing_cells_contribute_nothing(self):
        items = [ItemParams(1.0, 0.0, 0.0)] * 3
        full = log_likelihood([1, 0, -1], items, 0.3)
        short = log_likelihood([1, 0], items[:2], 0.3)
        assert full == pytest.approx(short)

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            log_likelihood([1, 0], [ItemParams(1.0, 0.0, 0.0)], 0.0)

    def test_peaks_near_generating_ability(self):
        rng = np.random.default_rng(3)
        items = [ItemParams(1.5, b, 0.0) for b in np.linspace(-2, 2, 30)]
        true_theta = 0.8
        p = np.array([icc_probability(it, true_theta) for it in items])
        pattern = (rng.random(30) < p).astype(int)
        grid = np.linspace(-4, 4, 81)
        values = [log_likelihood(pattern, items, t) for t in grid]
        best = grid[int(np.argmax(values))]
        assert abs(best - true_theta) < 1.0


class TestAbilityEstimation:
    """MAP ability estimates over the dense theta grid."""

    def test_grid_spacing(self):
        grid = default_theta_grid()
        assert grid[0] == -4.0 and grid[-1] == 4.0
        assert grid[1] - grid[0] == pytest.approx(0.01)

    def test_more_correct_means_higher_estimate(self):
        items = [ItemParams(1.0, 0.0, 0.0)] * 10
        scores = []
        for k in (2, 5, 8):
            pattern = [1] * k + [0] * (10 - k)
            scores.append(estimate_ability_map(pattern, items))
        assert scores[0] < scores[1] < scores[2]

    def test_prior_shrinks_extreme_patterns(self):
        items = [ItemParams(1.0, 0.0, 0.0)] * 5
        est = estimate_ability_map([1] * 5, items)
        assert 0.0 < est < 4.0

    def test_batch_matches_single(self):
        items = [ItemParams(1.2, -0.5, 0.1)] * 8
        data = np.array([[1, 1, 0, 1, 0, 1, 1, 0],
                         [0, 0, 0, 1, 0, 0, 1, 0]])
        batch = estimate_abilities_map(data, items)
        for row, est in zip(data, batch):
            assert est == pytest.approx(estimate_ability_map(row, items))

    def test_recovers_generating_abilities(self):
        rng = np.random.default_rng(9)
        items = [ItemParams(1.3, b, 0.1) for b in np.linspace(-2.5, 2.5, 60)]
        true = np.array([-1.5, -0.5, 0.0, 0.7, 1.8])
        p = np.array([[icc_probability(it, t) for it in items] for t in true])
        data = (rng.random(p.shape) < p).astype(int)
        est = estimate_abilities_map(data, items)
        assert np.all(np.abs(est - true) < 0.7)

    def test_all_missing_pattern_rejected(self):
        items = [ItemParams(1.0, 0.0, 0.0)] * 3
        with pytest.raises(ValueError):
            estimate_ability_map([-1, -1, -1], items)

    def test_refinement_leaves_grid(self):
        # the quadratic step should land between grid nodes, not on them
        items = [ItemParams(1.0, 0.3, 0.0)] * 7
        grid = np.linspace(-4, 4, 41)
        est = estimate_ability_map([1, 1, 0, 1, 0, 1, 1], items, grid=grid)
        assert -4.0 <= est <= 4.0


class TestStandardize:
    """Population z-scoring of the ability vector."""

    def test_three_point_oracle(self):
        z = standardize([1.0, 2.0, 3.0])
        assert z == pytest.approx([-1.224745, 0.0, 1.224745], abs=1e-6)

    def test_moments(self):
        rng = np.random.default_rng(4)
        x = rng.normal(3.0, 2.5, size=200)
        z = standardize(x)
        assert z.mean() == pytest.approx(0.0, abs=1e-12)
        assert z.std() == pytest.approx(1.0, abs=1e-12)

    def test_constant_vector_rejected(self):
        with pytest.raises(ValueError):
            standardize([2.0, 2.0, 2.0])

    def test_needs_at_least_two_values(self):
        with pytest.raises(ValueError):
            standardize([1.0])


class TestFitItemParams:
    """Single-item posterior fit from responses and known abilities."""

    def test_recovers_planted_item(self):
        rng = np.random.default_rng(12)
        true = ItemParams(1.2, 0.5, 0.2)
        theta = rng.normal(0.0, 1.0, size=3000)
        p = icc_probability(true, theta)
        u = (rng.random(3000) < p).astype(int)
        fit = fit_item_params(u, theta)
        assert abs(fit.a - true.a) < 0.3
        assert abs(fit.b - true.b) < 0.2
        assert abs(fit.c - true.c) < 0.1

    def test_estimates_sit_on_search_grids(self):
        rng = np.random.default_rng(5)
        theta = rng.normal(size=200)
        u = (rng.random(200) < 0.6).astype(int)
        fit = fit_item_params(u, theta)
        assert round(fit.a / 0.02) * 0.02 == pytest.approx(fit.a)
        assert round(fit.b / 0.02) * 0.02 == pytest.approx(fit.b)
        assert round(fit.c / 0.01) * 0.01 == pytest.approx(fit.c)

    def test_rejects_empty_and_mismatched(self):
        with pytest.raises(ValueError):
            fit_item_params([], [])
        with pytest.raises(ValueError):
            fit_item_params([1, 0], [0.0])
        with pytest.raises(ValueError):
            fit_item_params([1, 2], [0.0, 0.1])


class TestEstimateItemParams:
    """Column-by-column item fits over a response matrix."""

    def test_skips_missing_cells(self):
        rng = np.random.default_rng(8)
        true = ItemParams(1.0, 0.0, 0.2)
        theta = rng.normal(size=2000)
        p = icc_probability(true, theta)
        u = (rng.random(2000) < p).astype(int)
        holes = u.copy()
        holes[::4] = -1
        m = _matrix(np.column_stack([u, holes]))
        fits = estimate_item_params(m, theta)
        dense = fit_item_params(u[holes >= 0], theta[holes >= 0])
        assert fits[1] == dense

    def test_ability_length_checked(self):
        m = _matrix([[1, 0], [0, 1]])
        with pytest.raises(ValueError):
            estimate_item_params(m, [0.0])


class TestGaussSeidel:
    """Joint alternating calibration loop."""

    @staticmethod
    def _synthetic(n_students=120, n_items=15, seed=21):
        rng = np.random.default_rng(seed)
        items = [ItemParams(float(np.clip(rng.uniform(0.7, 1.6), 0, 2)),
                            float(np.clip(rng.normal(), -4, 4)),
                            float(rng.uniform(0.05, 0.3)))
                 for _ in range(n_items)]
        theta = rng.normal(size=n_students)
        p = np.array([[icc_probability(it, t) for it in items] for t in theta])
        data = (rng.random(p.shape) < p).astype(int)
        return _matrix(data), items, theta

    def test_result_shapes_and_history(self):
        matrix, _, _ = self._synthetic()
        res = gauss_seidel_estimate(matrix, GsConfig(max_sweeps=4))
        assert len(res.items) == matrix.n_items
        assert res.theta.shape == (matrix.n_students,)
        assert res.sweeps <= 4
        assert len(res.max_change_history) == res.sweeps

    def test_abilities_come_out_standardized(self):
        matrix, _, _ = self._synthetic()
        res = gauss_seidel_estimate(matrix, GsConfig(max_sweeps=3))
        assert res.theta.mean() == pytest.approx(0.0, abs=1e-9)
        assert res.theta.std() == pytest.approx(1.0, abs=1e-9)

    def test_theta_ordering_tracks_truth(self):
        matrix, _, true_theta = self._synthetic()
        res = gauss_seidel_estimate(matrix, GsConfig(max_sweeps=5))
        r = np.corrcoef(res.theta, true_theta)[0, 1]
        assert r > 0.8

    def test_custom_prior_accepted(self):
        matrix, _, _ = self._synthetic(n_students=40, n_items=8, seed=2)
        prior = PriorConfig(theta_sd=1.5)
        res = gauss_seidel_estimate(matrix, GsConfig(max_sweeps=2), prior)
        assert len(res.items) == 8
