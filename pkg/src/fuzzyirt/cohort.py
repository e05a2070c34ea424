"""Synthetic two-form cohorts and training-set builders.

The default cohort mirrors a linked-forms design: two fixed-length
forms share a block of common items, half the students sit each form,
and unseen cells are recorded as missing.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .estimation import ResponseMatrix
from .evaluation import oracle_3pl
from .fml import FuzzySystem, default_assessment_kb
from .irt import THETA_RANGE, ItemParams, icc_array
from .learning import TrainingSet


@dataclass(frozen=True)
class CohortSpec:
    """Shape and generating distributions of a simulated cohort."""

    n_students: int = 732
    n_items: int = 51
    items_per_form: int = 28
    common_items: int = 5
    a_low: float = 0.5
    a_high: float = 1.6
    b_mean: float = 0.0
    b_sd: float = 1.0
    c_low: float = 0.15
    c_high: float = 0.35
    theta_mean: float = 0.0
    theta_sd: float = 1.0
    rng_seed: int = 0

    def __post_init__(self):
        if self.n_students < 2 or self.n_students % 2:
            raise ValueError("n_students must be even and at least 2")
        if self.common_items < 0 or self.common_items >= self.items_per_form:
            raise ValueError("common_items must be smaller than items_per_form")
        if 2 * self.items_per_form - self.common_items != self.n_items:
            raise ValueError(
                "two forms sharing the common block must cover the bank: "
                "2 * items_per_form - common_items must equal n_items"
            )


def generate_cohort(spec: CohortSpec | None = None):
    """Draw items, abilities and a two-form response matrix.

    Returns ``(items, thetas, matrix)``. Form A holds the first
    ``items_per_form`` items, form B the last ``items_per_form``; the
    overlap is the common block. The first half of the students sits
    form A, the second half form B.
    """
    spec = spec or CohortSpec()
    rng = np.random.default_rng(spec.rng_seed)
    a = rng.uniform(spec.a_low, spec.a_high, spec.n_items)
    b = np.clip(rng.normal(spec.b_mean, spec.b_sd, spec.n_items), *THETA_RANGE)
    c = rng.uniform(spec.c_low, spec.c_high, spec.n_items)
    thetas = np.clip(rng.normal(spec.theta_mean, spec.theta_sd, spec.n_students),
                     *THETA_RANGE)
    items = [ItemParams(*row) for row in zip(a, b, c)]

    p = icc_array(a[None, :], b[None, :], c[None, :], thetas[:, None])
    responses = (rng.random(p.shape) <= p).astype(np.int8)
    data = np.full((spec.n_students, spec.n_items), -1, dtype=np.int8)
    half = spec.n_students // 2
    form_a = np.arange(0, spec.items_per_form)
    form_b = np.arange(spec.n_items - spec.items_per_form, spec.n_items)
    data[np.ix_(np.arange(0, half), form_a)] = responses[np.ix_(np.arange(0, half), form_a)]
    data[np.ix_(np.arange(half, spec.n_students), form_b)] = responses[
        np.ix_(np.arange(half, spec.n_students), form_b)]

    student_ids = tuple(f"s{i + 1}" for i in range(spec.n_students))
    item_ids = tuple(f"i{j + 1}" for j in range(spec.n_items))
    matrix = ResponseMatrix(data, student_ids, item_ids)
    return items, thetas, matrix


def generate_training_set(items: Sequence[ItemParams] | None = None,
                          thetas=None,
                          mode: str = "sampled",
                          kb: FuzzySystem | None = None,
                          n_rows: int = 500,
                          rng_seed: int = 0) -> TrainingSet:
    """Build (a, b, c, theta) -> probability rows for membership tuning.

    ``grid`` mode lays one row on every anchor combination of the
    knowledge base (the BC of each input term); ``sampled`` mode draws
    random item-student pairs from the given cohort. Desired outputs
    come from the 3PL curve in both modes.
    """
    if mode == "grid":
        kb = kb or default_assessment_kb()
        anchor_lists = [[s.bc for s in var.sets] for var in kb.input_variables]
        rows = []
        desired = []
        grids = np.meshgrid(*anchor_lists, indexing="ij")
        stacked = np.stack([g.ravel() for g in grids], axis=1)
        for a, b, c, theta in stacked:
            rows.append((a, b, c, theta))
            desired.append(oracle_3pl(ItemParams(a, b, c), theta))
        return TrainingSet(np.array(rows), np.array(desired))
    if mode == "sampled":
        if items is None or thetas is None:
            raise ValueError("sampled mode needs items and thetas")
        items = list(items)
        thetas = np.asarray(
            [t.theta if hasattr(t, "theta") else float(t) for t in thetas], dtype=float
        )
        if not items or thetas.size == 0:
            raise ValueError("sampled mode needs non-empty items and thetas")
        if n_rows < 1:
            raise ValueError("n_rows must be positive")
        rng = np.random.default_rng(rng_seed)
        item_idx = rng.integers(0, len(items), size=n_rows)
        theta_idx = rng.integers(0, thetas.size, size=n_rows)
        rows = np.empty((n_rows, 4))
        desired = np.empty(n_rows)
        for r, (i, s) in enumerate(zip(item_idx, theta_idx)):
            item = items[i]
            rows[r] = (item.a, item.b, item.c, thetas[s])
            desired[r] = oracle_3pl(item, thetas[s])
        return TrainingSet(rows, desired)
    raise ValueError(f"unknown training-set mode {mode!r}")
