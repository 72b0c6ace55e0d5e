"""
Fuzzy injury-severity universes.

Each feature (peak deformation, pedestrian impact velocity) is covered by
five equally spaced triangular sets E, D, C, B, A from lowest to highest
severity. A crisp value is described by its degrees of membership to the two
adjacent sets that bracket it; outside the universe the outermost pair is
extrapolated linearly instead of clamped.
"""

import logging
from dataclasses import dataclass
from typing import Tuple

import numpy as np

logger = logging.getLogger(__name__)

SET_LABELS: Tuple[str, ...] = ('E', 'D', 'C', 'B', 'A')
SET_COUNT = len(SET_LABELS)

DEFORMATION_BOUNDS = (0.2681, 0.8874)                 # [m]
PEDESTRIAN_VELOCITY_BOUNDS = (6.7056, 24.5872)        # [m/s]


@dataclass(frozen=True)
class FuzzyUniverse:
    """Five triangular sets spread evenly between two crisp bounds"""
    lower_bound: float
    upper_bound: float
    name: str = ''

    def __post_init__(self):
        if not self.upper_bound > self.lower_bound:
            raise ValueError(
                f"upper bound {self.upper_bound} must exceed lower bound {self.lower_bound}"
            )

    @property
    def spacing(self) -> float:
        return (self.upper_bound - self.lower_bound) / (SET_COUNT - 1)

    @property
    def centers(self) -> Tuple[float, ...]:
        """Set peaks for E, D, C, B, A"""
        inner = tuple(self.lower_bound + i * self.spacing for i in range(1, SET_COUNT - 1))
        return (self.lower_bound,) + inner + (self.upper_bound,)

    @property
    def labels(self) -> Tuple[str, ...]:
        return SET_LABELS

    def center_of(self, label: str) -> float:
        return self.centers[SET_LABELS.index(label)]


@dataclass(frozen=True)
class MembershipResult:
    """Degrees of membership to an adjacent pair of sets (1-based indices)"""
    lower_set_index: int
    higher_set_index: int
    mu_lower: float
    mu_higher: float

    @property
    def lower_label(self) -> str:
        return SET_LABELS[self.lower_set_index - 1]

    @property
    def higher_label(self) -> str:
        return SET_LABELS[self.higher_set_index - 1]

    @property
    def extrapolated(self) -> bool:
        return not (0.0 <= self.mu_lower <= 1.0)


def build_universe(lower: float, upper: float, name: str = '') -> FuzzyUniverse:
    """Five equally spaced sets over [lower, upper]"""
    return FuzzyUniverse(lower_bound=float(lower), upper_bound=float(upper), name=name)


DEFORMATION_UNIVERSE = build_universe(*DEFORMATION_BOUNDS, name='peak_deformation')
PEDESTRIAN_VELOCITY_UNIVERSE = build_universe(*PEDESTRIAN_VELOCITY_BOUNDS,
                                              name='pedestrian_velocity')


def membership(universe: FuzzyUniverse, value: float) -> MembershipResult:
    """
    Membership of ``value`` to the bracketing pair of adjacent sets.

    A value on an interior center n returns the pair (n, n+1) with
    mu_lower = 1. Below E the pair stays (E, D), above A it stays (B, A),
    and the linear formula extrapolates past [0, 1].

    Args:
        universe: Fuzzy universe of the feature
        value: Crisp feature value

    Returns:
        MembershipResult with mu_lower + mu_higher == 1
    """
    centers = universe.centers
    n = int(np.searchsorted(centers, value, side='right')) - 1
    n = min(max(n, 0), SET_COUNT - 2)
    c_low, c_high = centers[n], centers[n + 1]

    # The larger degree is computed directly; 1 - x is exact for x in [0.5, 2]
    position = (value - c_low) / (c_high - c_low)
    if position <= 0.5:
        mu_lower = (c_high - value) / (c_high - c_low)
        mu_higher = 1.0 - mu_lower
    else:
        mu_higher = position
        mu_lower = 1.0 - mu_higher

    return MembershipResult(
        lower_set_index=n + 1,
        higher_set_index=n + 2,
        mu_lower=mu_lower,
        mu_higher=mu_higher,
    )


def set_memberships(universe: FuzzyUniverse, value: float) -> np.ndarray:
    """Triangular degree of each set E..A (zero at neighbouring centers)"""
    centers = np.asarray(universe.centers)
    return np.clip(1.0 - np.abs(value - centers) / universe.spacing, 0.0, 1.0)


def membership_matrix(deformation: MembershipResult, velocity: MembershipResult) -> np.ndarray:
    """Row-partitioned 2x2 matrix [[mu_l, mu_h] deformation, [mu_l, mu_h] velocity]"""
    return np.array([
        [deformation.mu_lower, deformation.mu_higher],
        [velocity.mu_lower, velocity.mu_higher],
    ])
