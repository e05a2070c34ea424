"""Bayesian calibration of 3PL items and abilities from response data.

Abilities are estimated by maximum a posteriori search on a dense theta
grid; item parameters by coordinate-wise posterior maximization. The two
are alternated Gauss-Seidel style, standardizing the ability scale
between stages to pin down the latent metric.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy import stats

from .irt import THETA_RANGE, A_RANGE, B_RANGE, C_RANGE, ItemParams, icc_array

PROB_FLOOR = 1e-10

THETA_STEP = 0.01
A_STEP = 0.02
B_STEP = 0.02
C_STEP = 0.01


class Response(enum.IntEnum):
    CORRECT = 1
    INCORRECT = 0
    MISSING = -1


@dataclass(frozen=True)
class ResponseMatrix:
    """Students x items response table with missing cells.

    ``data`` holds 1 (correct), 0 (incorrect) or -1 (missing). Every row
    and every column must contain at least one observed cell.
    """

    data: np.ndarray
    student_ids: tuple[str, ...]
    item_ids: tuple[str, ...]

    def __post_init__(self):
        data = np.asarray(self.data, dtype=np.int8)
        if data.ndim != 2:
            raise ValueError("response data must be a 2-D array")
        object.__setattr__(self, "data", data)
        object.__setattr__(self, "student_ids", tuple(self.student_ids))
        object.__setattr__(self, "item_ids", tuple(self.item_ids))
        n_students, n_items = data.shape
        if len(self.student_ids) != n_students:
            raise ValueError("student_ids length does not match row count")
        if len(self.item_ids) != n_items:
            raise ValueError("item_ids length does not match column count")
        if len(set(self.student_ids)) != n_students:
            raise ValueError("duplicate student ids")
        if len(set(self.item_ids)) != n_items:
            raise ValueError("duplicate item ids")
        valid = np.isin(data, (1, 0, -1))
        if not valid.all():
            bad = data[~valid][0]
            raise ValueError(f"response cells must be 1, 0 or -1, got {bad}")
        observed = data >= 0
        if not observed.any(axis=1).all():
            row = int(np.flatnonzero(~observed.any(axis=1))[0])
            raise ValueError(f"student {self.student_ids[row]} has no observed responses")
        if not observed.any(axis=0).all():
            col = int(np.flatnonzero(~observed.any(axis=0))[0])
            raise ValueError(f"item {self.item_ids[col]} has no observed responses")

    @property
    def n_students(self) -> int:
        return self.data.shape[0]

    @property
    def n_items(self) -> int:
        return self.data.shape[1]

    def select_students(self, ids: Sequence[str]) -> "ResponseMatrix":
        index = {sid: i for i, sid in enumerate(self.student_ids)}
        rows = [index[sid] for sid in ids]
        return ResponseMatrix(self.data[rows], tuple(ids), self.item_ids)


@dataclass(frozen=True)
class PriorConfig:
    """Hyperparameters of the calibration priors.

    theta ~ N(theta_mean, theta_sd); b ~ N(b_mean, b_sd);
    a ~ chi(a_df) scaled so its mode sits at a_scale * sqrt(a_df - 1);
    c ~ Beta(c_alpha, c_beta).
    """

    theta_mean: float = 0.0
    theta_sd: float = 1.0
    b_mean: float = 0.0
    b_sd: float = 1.0
    a_df: float = 5.0
    a_scale: float = 0.5
    c_alpha: float = 2.0
    c_beta: float = 6.0

    def log_theta(self, theta):
        return stats.norm.logpdf(theta, self.theta_mean, self.theta_sd)

    def log_a(self, a):
        return stats.chi.logpdf(a, self.a_df, scale=self.a_scale)

    def log_b(self, b):
        return stats.norm.logpdf(b, self.b_mean, self.b_sd)

    def log_c(self, c):
        return stats.beta.logpdf(c, self.c_alpha, self.c_beta)


@dataclass(frozen=True)
class GsConfig:
    """Knobs of the alternating estimation loop."""

    default_item: ItemParams = field(default_factory=lambda: ItemParams(1.0, 0.0, 0.25))
    theta_step: float = THETA_STEP
    max_sweeps: int = 100
    tolerance: float = 1e-3


@dataclass(frozen=True)
class GsResult:
    items: list[ItemParams]
    theta: np.ndarray
    sweeps: int
    max_change_history: list[float]


def default_theta_grid(step: float = THETA_STEP) -> np.ndarray:
    n = int(round((THETA_RANGE[1] - THETA_RANGE[0]) / step)) + 1
    return np.linspace(THETA_RANGE[0], THETA_RANGE[1], n)


def _item_arrays(items: Sequence[ItemParams]):
    a = np.array([it.a for it in items])
    b = np.array([it.b for it in items])
    c = np.array([it.c for it in items])
    return a, b, c


def log_likelihood(pattern: Sequence[int], items: Sequence[ItemParams], theta) -> float:
    """Log-likelihood of one response pattern; missing cells contribute 0.

    Probabilities are floored at 1e-10 so impossible-looking responses
    (e.g. a miss on a c=1 item) stay finite.
    """
    pattern = np.asarray([int(u) for u in pattern])
    if len(pattern) != len(items):
        raise ValueError("pattern length does not match item count")
    if not np.isin(pattern, (1, 0, -1)).all():
        raise ValueError("pattern cells must be 1, 0 or -1")
    a, b, c = _item_arrays(items)
    t = theta.theta if hasattr(theta, "theta") else float(theta)
    p = np.clip(icc_array(a, b, c, t), PROB_FLOOR, 1.0)
    q = np.clip(1.0 - p, PROB_FLOOR, 1.0)
    observed = pattern >= 0
    u = pattern[observed]
    return float(np.sum(u * np.log(p[observed]) + (1 - u) * np.log(q[observed])))


def _posterior_grid(data: np.ndarray, items: Sequence[ItemParams],
                    prior: PriorConfig, grid: np.ndarray) -> np.ndarray:
    """Posterior log-density over ``grid`` for every student row."""
    a, b, c = _item_arrays(items)
    p = np.clip(icc_array(a[:, None], b[:, None], c[:, None], grid[None, :]),
                PROB_FLOOR, 1.0)
    lnp = np.log(p)
    lnq = np.log(np.clip(1.0 - p, PROB_FLOOR, 1.0))
    correct = (data == 1).astype(float)
    incorrect = (data == 0).astype(float)
    post = correct @ lnp + incorrect @ lnq
    post += prior.log_theta(grid)[None, :]
    return post


def _refine_quadratic(grid: np.ndarray, post: np.ndarray, idx: np.ndarray) -> np.ndarray:
    """One parabola fit through the best grid point and its neighbours."""
    theta = grid[idx].astype(float).copy()
    interior = (idx > 0) & (idx < len(grid) - 1)
    rows = np.flatnonzero(interior)
    if len(rows) == 0:
        return theta
    i = idx[rows]
    left = post[rows, i - 1]
    mid = post[rows, i]
    right = post[rows, i + 1]
    denom = left - 2.0 * mid + right
    ok = denom < 0
    h = grid[1] - grid[0]
    shift = np.zeros_like(left)
    shift[ok] = 0.5 * h * (left[ok] - right[ok]) / denom[ok]
    shift = np.clip(shift, -h, h)
    theta[rows] += shift
    return np.clip(theta, grid[0], grid[-1])


def estimate_abilities_map(data: np.ndarray, items: Sequence[ItemParams],
                           prior: PriorConfig | None = None,
                           grid: np.ndarray | None = None) -> np.ndarray:
    """MAP ability estimate for every row of a response array."""
    prior = prior or PriorConfig()
    if grid is None:
        grid = default_theta_grid()
    data = np.asarray(data)
    if data.ndim != 2:
        raise ValueError("response data must be 2-D")
    if not (data >= 0).any(axis=1).all():
        raise ValueError("every student needs at least one observed response")
    post = _posterior_grid(data, items, prior, grid)
    idx = np.argmax(post, axis=1)
    return _refine_quadratic(grid, post, idx)


def estimate_ability_map(pattern: Sequence[int], items: Sequence[ItemParams],
                         prior: PriorConfig | None = None,
                         grid: np.ndarray | None = None) -> float:
    """MAP ability estimate for a single response pattern."""
    pattern = np.asarray([int(u) for u in pattern])
    if len(pattern) != len(items):
        raise ValueError("pattern length does not match item count")
    if not (pattern >= 0).any():
        raise ValueError("cannot estimate ability from an all-missing pattern")
    return float(estimate_abilities_map(pattern[None, :], items, prior, grid)[0])


def standardize(values) -> np.ndarray:
    """Population z-scores: (x - mean) / population sd."""
    x = np.asarray(values, dtype=float)
    if x.ndim != 1 or len(x) < 2:
        raise ValueError("standardize needs a 1-D vector of at least 2 values")
    sd = x.std()
    if sd == 0.0:
        raise ValueError("cannot standardize a constant vector")
    return (x - x.mean()) / sd


def _coordinate_grids():
    a_grid = np.linspace(A_RANGE[0], A_RANGE[1],
                         int(round((A_RANGE[1] - A_RANGE[0]) / A_STEP)) + 1)
    b_grid = np.linspace(B_RANGE[0], B_RANGE[1],
                         int(round((B_RANGE[1] - B_RANGE[0]) / B_STEP)) + 1)
    c_grid = np.linspace(C_RANGE[0], C_RANGE[1],
                         int(round((C_RANGE[1] - C_RANGE[0]) / C_STEP)) + 1)
    return a_grid, b_grid, c_grid


def _column_loglik(u: np.ndarray, theta: np.ndarray, a, b, c) -> np.ndarray:
    """Observed-data log-likelihood of one item column, broadcast over a
    candidate grid in exactly one of a/b/c."""
    p = np.clip(icc_array(a, b, c, theta[:, None]), PROB_FLOOR, 1.0)
    lnp = np.log(p)
    lnq = np.log(np.clip(1.0 - p, PROB_FLOOR, 1.0))
    return (u[:, None] * lnp + (1.0 - u[:, None]) * lnq).sum(axis=0)


def fit_item_params(responses: Sequence[int], thetas: Sequence[float],
                    prior: PriorConfig | None = None,
                    start: ItemParams | None = None,
                    cycles: int = 2) -> ItemParams:
    """Posterior fit of one item from observed responses and abilities.

    Coordinate-wise grid maximization in the order b, a, c, cycled
    ``cycles`` times.
    """
    prior = prior or PriorConfig()
    u = np.asarray(responses, dtype=float)
    theta = np.asarray(thetas, dtype=float)
    if len(u) == 0:
        raise ValueError("cannot fit an item with zero observed responses")
    if len(u) != len(theta):
        raise ValueError("responses and abilities differ in length")
    if not np.isin(u, (0.0, 1.0)).all():
        raise ValueError("responses must be 0 or 1")
    start = start or ItemParams(1.0, 0.0, 0.25)
    a_grid, b_grid, c_grid = _coordinate_grids()
    log_a = prior.log_a(a_grid)
    log_b = prior.log_b(b_grid)
    log_c = prior.log_c(c_grid)
    a, b, c = start.a, start.b, start.c
    for _ in range(cycles):
        ll = _column_loglik(u, theta, a, b_grid[None, :], c)
        b = float(b_grid[np.argmax(ll + log_b)])
        ll = _column_loglik(u, theta, a_grid[None, :], b, c)
        a = float(a_grid[np.argmax(ll + log_a)])
        ll = _column_loglik(u, theta, a, b, c_grid[None, :])
        c = float(c_grid[np.argmax(ll + log_c)])
    return ItemParams(a, b, c)


def estimate_item_params(matrix: ResponseMatrix, abilities: Sequence[float],
                         prior: PriorConfig | None = None,
                         start_items: Sequence[ItemParams] | None = None) -> list[ItemParams]:
    """Coordinate-wise posterior fit of every item column."""
    prior = prior or PriorConfig()
    theta = np.asarray([t.theta if hasattr(t, "theta") else float(t) for t in abilities])
    if len(theta) != matrix.n_students:
        raise ValueError("ability vector length does not match student count")
    if start_items is not None and len(start_items) != matrix.n_items:
        raise ValueError("start_items length does not match item count")
    fitted = []
    for j in range(matrix.n_items):
        col = matrix.data[:, j]
        observed = col >= 0
        if not observed.any():
            raise ValueError(f"item {matrix.item_ids[j]} has no observed responses")
        start = start_items[j] if start_items is not None else None
        fitted.append(fit_item_params(col[observed], theta[observed], prior, start))
    return fitted


def gauss_seidel_estimate(matrix: ResponseMatrix,
                          cfg: GsConfig | None = None,
                          prior: PriorConfig | None = None) -> GsResult:
    """Alternate MAP abilities and item fits until parameters settle.

    Each sweep runs three stages: per-student MAP ability estimation
    with the current item parameters, standardization of the ability
    vector (population z-scores), then per-item posterior maximization.
    Stops when the largest absolute item-parameter change drops below
    ``cfg.tolerance`` or after ``cfg.max_sweeps`` sweeps.
    """
    cfg = cfg or GsConfig()
    prior = prior or PriorConfig()
    grid = default_theta_grid(cfg.theta_step)
    items = [cfg.default_item] * matrix.n_items
    theta = np.zeros(matrix.n_students)
    history: list[float] = []
    sweeps = 0
    for _ in range(cfg.max_sweeps):
        sweeps += 1
        raw = estimate_abilities_map(matrix.data, items, prior, grid)
        theta = standardize(raw)
        new_items = estimate_item_params(matrix, theta, prior)
        old = np.array([[it.a, it.b, it.c] for it in items])
        new = np.array([[it.a, it.b, it.c] for it in new_items])
        max_change = float(np.abs(new - old).max())
        history.append(max_change)
        items = new_items
        if max_change < cfg.tolerance:
            break
    return GsResult(items=items, theta=theta, sweeps=sweeps,
                    max_change_history=history)
