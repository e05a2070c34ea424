"""Three-parameter logistic (3PL) test model primitives.

The probability of a correct response to an item follows the scaled
logistic curve

    P(theta) = c + (1 - c) / (1 + exp(-1.7 * a * (theta - b)))

with discrimination ``a``, difficulty ``b`` and pseudo-guessing ``c``.
The 1.7 scaling constant aligns the logistic with the normal ogive and
is part of the model definition, as is the 2.89 (= 1.7^2) factor in the
item information function.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.special import expit

SCALE = 1.7
INFO_SCALE = 2.89

A_RANGE = (0.0, 2.0)
B_RANGE = (-4.0, 4.0)
C_RANGE = (0.0, 1.0)
THETA_RANGE = (-4.0, 4.0)

T_SCORE_SLOPE = 10.0
T_SCORE_OFFSET = 50.0


def _check_range(name: str, value: float, lo: float, hi: float) -> float:
    value = float(value)
    if not math.isfinite(value):
        raise ValueError(f"{name} must be finite, got {value!r}")
    if not lo <= value <= hi:
        raise ValueError(f"{name} must lie in [{lo}, {hi}], got {value}")
    return value


@dataclass(frozen=True)
class ItemParams:
    """Validated 3PL parameter triple for one item.

    Out-of-range values are rejected rather than clamped: silently
    cleaning calibration output would mask estimator bugs.
    """

    a: float
    b: float
    c: float

    def __post_init__(self):
        object.__setattr__(self, "a", _check_range("a", self.a, *A_RANGE))
        object.__setattr__(self, "b", _check_range("b", self.b, *B_RANGE))
        object.__setattr__(self, "c", _check_range("c", self.c, *C_RANGE))


@dataclass(frozen=True)
class Ability:
    """Latent ability value on the theta scale, restricted to [-4, 4]."""

    theta: float

    def __post_init__(self):
        object.__setattr__(
            self, "theta", _check_range("theta", self.theta, *THETA_RANGE)
        )


class PerformanceLevel(enum.IntEnum):
    """Ordered reporting bands on the theta scale."""

    BELOW_BASIC = 0
    BASIC = 1
    PROFICIENT = 2
    ADVANCED = 3

    @property
    def label(self) -> str:
        return _LEVEL_LABELS[self]


_LEVEL_LABELS = {
    PerformanceLevel.BELOW_BASIC: "BelowBasic",
    PerformanceLevel.BASIC: "Basic",
    PerformanceLevel.PROFICIENT: "Proficient",
    PerformanceLevel.ADVANCED: "Advanced",
}

# Lower edges of BASIC / PROFICIENT / ADVANCED; a boundary theta belongs
# to the higher level.
LEVEL_CUTS = (-1.0, -0.4, 1.5)


def _as_theta(theta) -> float:
    if isinstance(theta, Ability):
        return theta.theta
    value = float(theta)
    if not math.isfinite(value):
        raise ValueError(f"theta must be finite, got {value!r}")
    return value


def icc_probability(item: ItemParams, theta):
    """Probability of a correct response at ability ``theta``.

    ``theta`` may be a scalar, an Ability, or an ndarray of abilities.
    """
    if isinstance(theta, np.ndarray):
        return item.c + (1.0 - item.c) * expit(SCALE * item.a * (theta - item.b))
    t = _as_theta(theta)
    return float(item.c + (1.0 - item.c) * expit(SCALE * item.a * (t - item.b)))


def item_information(item: ItemParams, theta):
    """Fisher information of one item at ``theta``.

    I(theta) = 2.89 * a^2 * (Q/P) * ((P - c) / (1 - c))^2
    """
    if item.c >= 1.0:
        raise ValueError("item information is undefined for c = 1")
    p = icc_probability(item, theta)
    if isinstance(p, np.ndarray):
        out = np.zeros_like(p)
        ok = (p > 0.0) & (p < 1.0)
        ratio = (p[ok] - item.c) / (1.0 - item.c)
        out[ok] = INFO_SCALE * item.a**2 * ((1.0 - p[ok]) / p[ok]) * ratio**2
        return out
    if p <= 0.0 or p >= 1.0:
        return 0.0
    ratio = (p - item.c) / (1.0 - item.c)
    return float(INFO_SCALE * item.a**2 * ((1.0 - p) / p) * ratio**2)


def test_information(items: Sequence[ItemParams], theta):
    """Test information function: sum of item informations at ``theta``."""
    items = list(items)
    if not items:
        raise ValueError("test information requires at least one item")
    total = item_information(items[0], theta)
    for item in items[1:]:
        total = total + item_information(item, theta)
    return total


def test_standard_error(items: Sequence[ItemParams], theta):
    """Test standard error, 1 / sqrt(TIF)."""
    tif = test_information(items, theta)
    if isinstance(tif, np.ndarray):
        if np.any(tif <= 0.0):
            raise ValueError("test standard error undefined where TIF = 0")
        return 1.0 / np.sqrt(tif)
    if tif <= 0.0:
        raise ValueError("test standard error undefined where TIF = 0")
    return float(1.0 / math.sqrt(tif))


def t_score(theta) -> float:
    """Linear T-score transform: theta * 10 + 50."""
    return _as_theta(theta) * T_SCORE_SLOPE + T_SCORE_OFFSET


def performance_level(theta) -> PerformanceLevel:
    """Map a theta value to its reporting band."""
    t = _as_theta(theta)
    if t < LEVEL_CUTS[0]:
        return PerformanceLevel.BELOW_BASIC
    if t < LEVEL_CUTS[1]:
        return PerformanceLevel.BASIC
    if t < LEVEL_CUTS[2]:
        return PerformanceLevel.PROFICIENT
    return PerformanceLevel.ADVANCED


_DEMO_BANK = [
    (1.1, 1.0, 0.1),
    (0.77, 0.75, 0.23),
    (0.7, -0.06, 0.14),
    (1.6, 0.0, 0.11),
    (2.0, 1.7, 0.03),
    (1.5, 0.0, 0.0),
    (1.0, 0.0, 0.0),
    (0.5, 0.0, 0.0),
    (1.0, 2.0, 0.0),
    (1.0, 0.0, 0.0),
    (1.0, -2.0, 0.0),
    (1.0, 0.0, 0.5),
    (1.0, 0.0, 0.25),
    (1.0, 0.0, 0.0),
    (0.5, -0.5, 0.5),
    (1.0, 0.0, 0.25),
    (1.5, 0.5, 0.0),
    (0.5, 1.0, 0.0),
    (1.0, 1.5, 0.5),
    (1.5, -1.0, 0.25),
]


def demo_item_bank() -> list[ItemParams]:
    """A 20-item reference bank handy for demos and quick experiments."""
    return [ItemParams(a, b, c) for a, b, c in _DEMO_BANK]


def icc_array(a, b, c, theta):
    """Broadcasting 3PL probability over plain arrays.

    Internal workhorse for grid searches; no range validation.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    c = np.asarray(c, dtype=float)
    theta = np.asarray(theta, dtype=float)
    return c + (1.0 - c) * expit(SCALE * a * (theta - b))
