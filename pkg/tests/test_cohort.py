import numpy as np
import pytest

from fuzzyirt import (
    CohortSpec,
    generate_cohort,
    generate_training_set,
    icc_probability,
)


class TestCohortSpec:
    """Consistency rules of the two-form design."""

    def test_default_is_valid(self):
        spec = CohortSpec()
        assert (spec.n_students, spec.n_items) == (732, 51)
        assert 2 * spec.items_per_form - spec.common_items == spec.n_items

    def test_odd_student_count_rejected(self):
        with pytest.raises(ValueError, match="even"):
            CohortSpec(n_students=731)

    def test_form_arithmetic_checked(self):
        with pytest.raises(ValueError, match="cover the bank"):
            CohortSpec(n_items=50)
        with pytest.raises(ValueError, match="common_items"):
            CohortSpec(n_items=10, items_per_form=5, common_items=5)


class TestGenerateCohort:
    """Drawn items, abilities and the linked-forms response table."""

    def test_shapes(self):
        items, thetas, matrix = generate_cohort()
        assert len(items) == 51
        assert thetas.shape == (732,)
        assert matrix.data.shape == (732, 51)

    def test_observed_cell_count(self):
        spec = CohortSpec()
        _, _, matrix = generate_cohort(spec)
        observed = int((matrix.data >= 0).sum())
        assert observed == spec.n_students * spec.items_per_form

    def test_form_structure(self):
        spec = CohortSpec()
        _, _, matrix = generate_cohort(spec)
        half = spec.n_students // 2
        first_form = np.flatnonzero(matrix.data[0] >= 0)
        second_form = np.flatnonzero(matrix.data[half] >= 0)
        assert first_form.tolist() == list(range(spec.items_per_form))
        assert second_form.tolist() == list(
            range(spec.n_items - spec.items_per_form, spec.n_items))
        common = sorted(set(first_form) & set(second_form))
        assert len(common) == spec.common_items

    def test_parameter_ranges(self):
        spec = CohortSpec(c_low=0.2, c_high=0.5)
        items, thetas, _ = generate_cohort(spec)
        for item in items:
            assert spec.a_low <= item.a <= spec.a_high
            assert spec.c_low <= item.c <= spec.c_high
        assert np.all(np.abs(thetas) <= 4.0)

    def test_seed_reproducibility(self):
        items_a, thetas_a, matrix_a = generate_cohort(CohortSpec(rng_seed=7))
        items_b, thetas_b, matrix_b = generate_cohort(CohortSpec(rng_seed=7))
        items_c, _, _ = generate_cohort(CohortSpec(rng_seed=8))
        assert items_a == items_b
        assert np.array_equal(thetas_a, thetas_b)
        assert np.array_equal(matrix_a.data, matrix_b.data)
        assert items_a != items_c

    def test_response_rate_is_plausible(self):
        _, _, matrix = generate_cohort()
        observed = matrix.data[matrix.data >= 0]
        assert 0.3 < observed.mean() < 0.9


class TestTrainingSets:
    """Row builders for membership-function tuning."""

    def test_grid_mode_covers_all_anchors(self):
        data = generate_training_set(mode="grid")
        assert len(data) == 144
        assert data.inputs.shape == (144, 4)
        # one row per anchor combination: 3 * 4 * 3 * 4
        assert len({tuple(row) for row in data.inputs}) == 144

    def test_grid_mode_targets_are_3pl(self):
        from fuzzyirt import ItemParams
        data = generate_training_set(mode="grid")
        for row, desired in zip(data.inputs, data.desired):
            a, b, c, theta = row
            assert desired == pytest.approx(
                icc_probability(ItemParams(a, b, c), theta))

    def test_sampled_mode_draws_from_cohort(self):
        items, thetas, _ = generate_cohort()
        data = generate_training_set(items, thetas, mode="sampled",
                                     n_rows=200, rng_seed=1)
        assert len(data) == 200
        known = {(it.a, it.b, it.c) for it in items}
        for row in data.inputs:
            assert (row[0], row[1], row[2]) in known

    def test_sampled_mode_is_seeded(self):
        items, thetas, _ = generate_cohort()
        a = generate_training_set(items, thetas, n_rows=50, rng_seed=5)
        b = generate_training_set(items, thetas, n_rows=50, rng_seed=5)
        c = generate_training_set(items, thetas, n_rows=50, rng_seed=6)
        assert np.array_equal(a.inputs, b.inputs)
        assert not np.array_equal(a.inputs, c.inputs)

    def test_sampled_mode_needs_cohort(self):
        with pytest.raises(ValueError, match="items and thetas"):
            generate_training_set(mode="sampled")

    def test_unknown_mode(self):
        with pytest.raises(ValueError, match="mode"):
            generate_training_set(mode="bootstrap")
