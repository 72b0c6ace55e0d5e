#!/usr/bin/env python3
"""
Ethical Decision Maker

Common weighted utility cost and path selection.

The cost of a collision option weights the pair of membership degrees with
the factorial-squared weight of the matching set index and scales by the
number of people at risk:

    cost = ((n_h!)^2 * mu_higher + (n_l!)^2 * mu_lower) * N

Policies:
    UTILITARIAN    steer into the option with the lowest cost; ties keep
                   the original course
    DEONTOLOGICAL  never leave the original course

License: MIT
"""

import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Optional, Sequence, Tuple

from .severity import FuzzyUniverse, MembershipResult, SET_COUNT, membership

logger = logging.getLogger(__name__)

TIE_TOLERANCE = 1e-9

DECISION_COLUMNS = ('policy', 'chosen', 'option_id', 'target', 'people', 'feature_value', 'cost')


class TargetKind(Enum):
    """What the vehicle collides with on a path"""
    RIGID_BARRIER = "rigid_barrier"
    PEDESTRIANS = "pedestrians"


class Policy(Enum):
    """Path selection policy"""
    UTILITARIAN = "utilitarian"
    DEONTOLOGICAL = "deontological"


@dataclass
class CollisionOption:
    """A candidate path and its predicted outcome"""
    option_id: str
    is_original_course: bool
    target_kind: TargetKind
    people_count: int
    feature_value: float
    membership: Optional[MembershipResult] = None
    utility_cost: float = 0.0

    def __post_init__(self):
        if self.people_count < 0:
            raise ValueError(f"people_count must be non-negative, got {self.people_count}")


@dataclass
class Decision:
    """Selected option with the costs it was chosen from"""
    chosen_option: str
    policy: Policy
    per_option_costs: List[Tuple[str, float]] = field(default_factory=list)
    rationale: str = ''

    def cost_of(self, option_id: str) -> float:
        return dict(self.per_option_costs)[option_id]

    @property
    def chosen_cost(self) -> float:
        return self.cost_of(self.chosen_option)


# =============================================================================
# Utility Cost
# =============================================================================

def factorial_squared_weight(n: int) -> int:
    """(n!)^2 for set index n in 1..5"""
    if not 1 <= n <= SET_COUNT:
        raise ValueError(f"set index must be in 1..{SET_COUNT}, got {n}")
    return math.factorial(n) ** 2


def utility_cost(result: MembershipResult, people_count: int) -> float:
    """Weighted cost of lives at risk for one option"""
    if people_count < 0:
        raise ValueError(f"people_count must be non-negative, got {people_count}")
    weighted = (factorial_squared_weight(result.higher_set_index) * result.mu_higher
                + factorial_squared_weight(result.lower_set_index) * result.mu_lower)
    return weighted * people_count


def swapped_pairing_cost(result: MembershipResult, people_count: int) -> float:
    """
    Cost with each weight applied to the opposite set's degree.

    Diagnostic only: this pairing reproduces the published 20 m/s occupant
    costs, which disagree with the index-matched formula used everywhere else.
    """
    swapped = MembershipResult(
        lower_set_index=result.lower_set_index,
        higher_set_index=result.higher_set_index,
        mu_lower=result.mu_higher,
        mu_higher=result.mu_lower,
    )
    return utility_cost(swapped, people_count)


def build_option(
    option_id: str,
    target_kind: TargetKind,
    people_count: int,
    feature_value: float,
    universe: FuzzyUniverse,
    is_original_course: bool = False
) -> CollisionOption:
    """Collision option with membership and cost evaluated on ``universe``"""
    result = membership(universe, feature_value)
    return CollisionOption(
        option_id=option_id,
        is_original_course=is_original_course,
        target_kind=target_kind,
        people_count=people_count,
        feature_value=feature_value,
        membership=result,
        utility_cost=utility_cost(result, people_count),
    )


# =============================================================================
# Path Selection
# =============================================================================

def _original_course(options: Sequence[CollisionOption]) -> CollisionOption:
    originals = [o for o in options if o.is_original_course]
    if len(originals) != 1:
        raise ValueError(f"exactly one option must be the original course, found {len(originals)}")
    return originals[0]


def decide(options: Sequence[CollisionOption], policy: Policy) -> Decision:
    """
    Select a path under ``policy``.

    Args:
        options: Candidate paths, exactly one flagged as the original course
        policy: UTILITARIAN or DEONTOLOGICAL

    Returns:
        Decision with every option's cost for reporting
    """
    if not options:
        raise ValueError("at least one collision option is required")
    original = _original_course(options)
    costs = [(o.option_id, o.utility_cost) for o in options]

    if policy is Policy.DEONTOLOGICAL:
        return Decision(
            chosen_option=original.option_id,
            policy=policy,
            per_option_costs=costs,
            rationale=f"remain on original course '{original.option_id}'",
        )

    lowest = min(o.utility_cost for o in options)
    if original.utility_cost - lowest <= TIE_TOLERANCE:
        chosen = original
    else:
        chosen = next(o for o in options if o.utility_cost - lowest <= TIE_TOLERANCE)

    rationale = f"lowest common utility cost {chosen.utility_cost:.6g} on '{chosen.option_id}'"
    if chosen is not original:
        rationale += f", steering away from '{original.option_id}' ({original.utility_cost:.6g})"
    logger.debug(f"Utilitarian choice: {rationale}")
    return Decision(
        chosen_option=chosen.option_id,
        policy=policy,
        per_option_costs=costs,
        rationale=rationale,
    )


def decision_rows(decision: Decision, options: Sequence[CollisionOption]) -> List[Dict[str, object]]:
    """One record per option with the DECISION_COLUMNS fields"""
    return [
        {
            'policy': decision.policy.value,
            'chosen': option.option_id == decision.chosen_option,
            'option_id': option.option_id,
            'target': option.target_kind.value,
            'people': option.people_count,
            'feature_value': option.feature_value,
            'cost': option.utility_cost,
        }
        for option in options
    ]
