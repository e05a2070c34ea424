"""Form assembly by (1+1) evolution strategy over item importance.

Each bank item gets a real-valued importance weight; the form is the
top-M items by weight. A candidate weight vector is scored by simulating
a cohort drawn from the target ability band, re-estimating each
simulated student, and summing the density-weighted squared estimation
errors. The single-parent strategy mutates the whole vector with an
adaptive step size: grow on acceptance, shrink on rejection.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy import stats

from .estimation import (
    PriorConfig,
    ResponseMatrix,
    default_theta_grid,
    estimate_abilities_map,
)
from .irt import (
    THETA_RANGE,
    ItemParams,
    PerformanceLevel,
    LEVEL_CUTS,
    icc_array,
    test_information,
)

ACCEPT_GROW = 2.0
REJECT_SHRINK = 0.84

# Ability band per reporting level, used by the default theta sampler.
LEVEL_BANDS = {
    PerformanceLevel.BELOW_BASIC: (THETA_RANGE[0], LEVEL_CUTS[0]),
    PerformanceLevel.BASIC: (LEVEL_CUTS[0], LEVEL_CUTS[1]),
    PerformanceLevel.PROFICIENT: (LEVEL_CUTS[1], LEVEL_CUTS[2]),
    PerformanceLevel.ADVANCED: (LEVEL_CUTS[2], THETA_RANGE[1]),
}


@dataclass(frozen=True)
class EsState:
    """Step-size and incumbent objective after one strategy iteration."""

    sigma: float
    accept_coeffs: tuple[float, float]
    best_objective: float


@dataclass(frozen=True)
class Form:
    """An assembled form with its information and error curves."""

    item_indices: tuple[int, ...]
    target_level: PerformanceLevel
    theta_grid: np.ndarray
    tif_curve: np.ndarray
    tse_curve: np.ndarray

    def __post_init__(self):
        idx = tuple(int(i) for i in self.item_indices)
        if len(set(idx)) != len(idx):
            raise ValueError("form items must be distinct")
        object.__setattr__(self, "item_indices", idx)


@dataclass(frozen=True)
class AssemblyConfig:
    """Assembly knobs; ``theta_sampler`` and ``prior_weight`` default to
    a uniform draw over the target level's band and the standard normal
    density."""

    form_size: int
    target_level: PerformanceLevel
    cohort_size: int = 100
    budget: int = 200
    rng_seed: int = 0
    sigma_init: float = 1.0
    accept_coeffs: tuple[float, float] = (ACCEPT_GROW, REJECT_SHRINK)
    theta_sampler: Callable | None = None
    prior_weight: Callable | None = None
    prior: PriorConfig = field(default_factory=PriorConfig)

    def __post_init__(self):
        if self.form_size < 1:
            raise ValueError("form_size must be positive")
        if self.cohort_size < 1:
            raise ValueError("cohort_size must be positive")
        if self.budget < 0:
            raise ValueError("budget must be non-negative")
        if self.sigma_init <= 0:
            raise ValueError("sigma_init must be positive")


def simulate_responses(items: Sequence[ItemParams], abilities,
                       rng: np.random.Generator) -> ResponseMatrix:
    """Draw one correct/incorrect response per student-item cell."""
    items = list(items)
    if not items:
        raise ValueError("cannot simulate responses without items")
    theta = np.asarray(
        [t.theta if hasattr(t, "theta") else float(t) for t in abilities], dtype=float
    )
    if theta.size == 0:
        raise ValueError("cannot simulate responses without students")
    a = np.array([it.a for it in items])
    b = np.array([it.b for it in items])
    c = np.array([it.c for it in items])
    p = icc_array(a[None, :], b[None, :], c[None, :], theta[:, None])
    data = (rng.random(p.shape) <= p).astype(np.int8)
    student_ids = tuple(f"s{i + 1}" for i in range(len(theta)))
    item_ids = tuple(f"i{j + 1}" for j in range(len(items)))
    return ResponseMatrix(data, student_ids, item_ids)


def _default_sampler(level: PerformanceLevel) -> Callable:
    lo, hi = LEVEL_BANDS[level]

    def sample(rng: np.random.Generator, size: int) -> np.ndarray:
        return rng.uniform(lo, hi, size)

    return sample


@dataclass(frozen=True)
class _FrozenCohort:
    """One simulated cohort reused across every objective evaluation of
    an assembly run, so the search minimizes a deterministic function."""

    thetas: np.ndarray
    draws: np.ndarray
    weights: np.ndarray


def _freeze_cohort(bank_size: int, cfg: AssemblyConfig,
                   rng: np.random.Generator) -> _FrozenCohort:
    sampler = cfg.theta_sampler or _default_sampler(cfg.target_level)
    thetas = np.clip(np.asarray(sampler(rng, cfg.cohort_size), dtype=float),
                     THETA_RANGE[0], THETA_RANGE[1])
    draws = rng.random((cfg.cohort_size, bank_size))
    weight_fn = cfg.prior_weight or (lambda t: stats.norm.pdf(t))
    weights = np.asarray(weight_fn(thetas), dtype=float)
    return _FrozenCohort(thetas=thetas, draws=draws, weights=weights)


def top_m_indices(u: np.ndarray, m: int) -> np.ndarray:
    """Indices of the m largest weights, ties resolved by lower index."""
    order = np.argsort(-u, kind="stable")
    return order[:m]


def _objective(u: np.ndarray, bank: Sequence[ItemParams], cfg: AssemblyConfig,
               frozen: _FrozenCohort, grid: np.ndarray,
               estimator: Callable | None = None) -> float:
    selected = top_m_indices(u, cfg.form_size)
    items = [bank[i] for i in selected]
    a = np.array([it.a for it in items])
    b = np.array([it.b for it in items])
    c = np.array([it.c for it in items])
    p = icc_array(a[None, :], b[None, :], c[None, :], frozen.thetas[:, None])
    responses = (frozen.draws[:, selected] <= p).astype(np.int8)
    if estimator is not None:
        theta_hat = np.asarray(estimator(responses, items), dtype=float)
    else:
        theta_hat = estimate_abilities_map(responses, items, cfg.prior, grid)
    return float(np.sum(frozen.weights * (frozen.thetas - theta_hat) ** 2))


def _check_importance(u, bank_size: int) -> np.ndarray:
    u = np.asarray(u, dtype=float)
    if u.shape != (bank_size,):
        raise ValueError(f"importance vector must have {bank_size} weights")
    if not np.isfinite(u).all():
        raise ValueError("importance weights must be finite")
    return u


def assembly_objective(u, bank: Sequence[ItemParams], cfg: AssemblyConfig,
                       rng: np.random.Generator,
                       estimator: Callable | None = None) -> float:
    """Density-weighted squared ability-recovery error of the top-M form.

    Draws a fresh simulated cohort from ``rng``; within an assembly run
    the cohort is frozen instead (see :func:`assemble_form`).
    """
    bank = list(bank)
    if cfg.form_size > len(bank):
        raise ValueError("form_size exceeds the bank size")
    u = _check_importance(u, len(bank))
    frozen = _freeze_cohort(len(bank), cfg, rng)
    return _objective(u, bank, cfg, frozen, default_theta_grid(), estimator)


def assemble_form(bank: Sequence[ItemParams],
                  cfg: AssemblyConfig) -> tuple[Form, list[EsState]]:
    """Search importance weights with a (1+1) evolution strategy.

    The mutation step size doubles on every accepted candidate and
    shrinks by 0.84 on every rejection; the incumbent objective trace in
    the returned history is non-increasing by construction.
    """
    bank = list(bank)
    if cfg.form_size > len(bank):
        raise ValueError("form_size exceeds the bank size")
    rng = np.random.default_rng(cfg.rng_seed)
    frozen = _freeze_cohort(len(bank), cfg, rng)
    grid = default_theta_grid()
    u = rng.random(len(bank))
    best = _objective(u, bank, cfg, frozen, grid)
    sigma = cfg.sigma_init
    history = [EsState(sigma=sigma, accept_coeffs=cfg.accept_coeffs,
                       best_objective=best)]
    grow, shrink = cfg.accept_coeffs
    for _ in range(cfg.budget):
        candidate = u + sigma * rng.standard_normal(len(bank))
        value = _objective(candidate, bank, cfg, frozen, grid)
        if value < best:
            u, best = candidate, value
            sigma *= grow
        else:
            sigma *= shrink
        history.append(EsState(sigma=sigma, accept_coeffs=cfg.accept_coeffs,
                               best_objective=best))
    selected = top_m_indices(u, cfg.form_size)
    items = [bank[i] for i in selected]
    tif = test_information(items, grid)
    form = Form(
        item_indices=tuple(int(i) for i in selected),
        target_level=cfg.target_level,
        theta_grid=grid,
        tif_curve=tif,
        tse_curve=1.0 / np.sqrt(tif),
    )
    return form, history
