#!/usr/bin/env python3
"""
ESCS Scenario Pipeline

Configuration ingestion and end-to-end orchestration of one collision
dilemma: the vehicle brakes towards a rigid barrier on its original course,
with a group of pedestrians on the alternative path.

    laden mass -> braking impact velocity -> peak deformation
               -> memberships -> utility costs -> policy decisions

Configuration files are flat ``key = value`` text with dotted section keys:

    # barrier 15 m ahead, pedestrians at the default distance
    scenario.barrier_distance = 15
    sweep.initial_velocities = 12, 16, 20
    vehicle.occupant_mass = 80

Usage:
    config = load_config('scenario.conf')
    report = sweep(config)
    report.summaries[2]['utilitarian']

License: MIT
"""

import logging
import math
from concurrent.futures import ProcessPoolExecutor, as_completed
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Union

from pydantic import (
    BaseModel,
    ConfigDict,
    Field,
    NonNegativeFloat,
    NonNegativeInt,
    PositiveFloat,
    PositiveInt,
    ValidationError,
    ValidationInfo,
    field_validator,
    model_validator,
)

from .crash import CrashModel, discrepancy, exceeds_designed_deformation, lpm_peak_deformation
from .dynamics import MAX_STEERING_ANGLE_RAD, VehicleParams, brake_to_target
from .errors import ConfigParseError, ConfigValueError, UnknownConfigKeyError
from .ethics import CollisionOption, Decision, Policy, TargetKind, build_option, decide
from .published import KNOWN_TYPOS, PUBLISHED_COSTS, PUBLISHED_SUMMED_COSTS
from .severity import DEFORMATION_BOUNDS, PEDESTRIAN_VELOCITY_BOUNDS, FuzzyUniverse, build_universe

logger = logging.getLogger(__name__)

BARRIER_OPTION = 'barrier'
PEDESTRIAN_OPTION = 'pedestrians'

# Relative divergence from a published cost that marks a row as an erratum
ERRATUM_THRESHOLD = 0.01

ROW_COLUMNS = (
    'velocity', 'occupants', 'pedestrians', 'impact_velocity', 'barrier_impact_velocity',
    'peak_deformation', 'cabin_intrusion', 'cost_pedestrians', 'cost_occupants',
    'utilitarian_choice', 'deontological_choice', 'published_pedestrians',
    'published_occupants', 'annotation',
)


class CourseChoice(str, Enum):
    """Which option the vehicle is already heading for"""
    BARRIER = BARRIER_OPTION
    PEDESTRIANS = PEDESTRIAN_OPTION


class PolicySelection(str, Enum):
    """Policies reported by a run"""
    UTILITARIAN = 'utilitarian'
    DEONTOLOGICAL = 'deontological'
    BOTH = 'both'

    @property
    def policies(self) -> Tuple[Policy, ...]:
        if self is PolicySelection.BOTH:
            return (Policy.UTILITARIAN, Policy.DEONTOLOGICAL)
        return (Policy(self.value),)


# =============================================================================
# Configuration Models
# =============================================================================

def _split_list(value: Any) -> Any:
    if isinstance(value, str):
        return [item.strip() for item in value.split(',') if item.strip()]
    return value


class _Section(BaseModel):
    model_config = ConfigDict(extra='forbid', frozen=True)


class SweepSection(_Section):
    """Cross-product of cases run by a sweep"""
    initial_velocities: List[PositiveFloat] = Field(
        default_factory=lambda: [12.0, 16.0, 20.0], min_length=1)
    occupant_counts: List[NonNegativeInt] = Field(
        default_factory=lambda: [0, 1, 2], min_length=1)
    pedestrian_counts: List[NonNegativeInt] = Field(
        default_factory=lambda: [0, 1, 2, 3, 4], min_length=1)

    @field_validator('initial_velocities', 'occupant_counts', 'pedestrian_counts', mode='before')
    @classmethod
    def _comma_separated(cls, value):
        return _split_list(value)


class VehicleSection(_Section):
    """Vehicle and actuator constants"""
    base_mass: PositiveFloat = 1247.0        # [kg]
    occupant_mass: PositiveFloat = 80.0      # [kg] per occupant
    wheelbase: PositiveFloat = 2.55          # [m]
    drag_c: NonNegativeFloat = 140.0         # [N*s/m]
    v_max: PositiveFloat = 47.8              # [m/s]
    a_max: PositiveFloat = 8.5               # [m/s^2]
    d_max: PositiveFloat = 5.0               # [m/s^2]
    f_max: PositiveFloat = 10600.0           # [N]
    p_gain: PositiveFloat = 70.0


class CrashSection(_Section):
    """Lumped-parameter crash constants"""
    stiffness: PositiveFloat = 894300.0              # [N/m]
    failure_point: NonNegativeFloat = 1410.0         # [N]
    include_failure_point_in_energy: bool = False
    designed_deformation: PositiveFloat = 0.59       # [m]


class SeveritySection(_Section):
    """Universe of discourse bounds"""
    deformation_lower: PositiveFloat = DEFORMATION_BOUNDS[0]
    deformation_upper: PositiveFloat = DEFORMATION_BOUNDS[1]
    velocity_lower: PositiveFloat = PEDESTRIAN_VELOCITY_BOUNDS[0]
    velocity_upper: PositiveFloat = PEDESTRIAN_VELOCITY_BOUNDS[1]

    @field_validator('deformation_upper', 'velocity_upper')
    @classmethod
    def _upper_above_lower(cls, value: float, info: ValidationInfo) -> float:
        lower_name = info.field_name.replace('_upper', '_lower')
        lower = info.data.get(lower_name)
        if lower is not None and value <= lower:
            raise ValueError(f"must exceed {lower_name} ({lower})")
        return value


class ScenarioSection(_Section):
    """Geometry of the dilemma and the policies to report"""
    target_distance: PositiveFloat = 10.0                 # [m]
    barrier_distance: Optional[PositiveFloat] = None      # [m], defaults to target_distance
    pedestrian_distance: Optional[PositiveFloat] = None   # [m], defaults to target_distance
    steering_gamma: float = Field(0.15, allow_inf_nan=False)   # [rad]
    original_course: CourseChoice = CourseChoice.BARRIER
    policy: PolicySelection = PolicySelection.BOTH

    @field_validator('steering_gamma')
    @classmethod
    def _steering_limit(cls, value: float) -> float:
        if abs(value) > MAX_STEERING_ANGLE_RAD:
            raise ValueError(f"|gamma| must not exceed {MAX_STEERING_ANGLE_RAD:.6f} rad")
        return value


class SimulationSection(_Section):
    """Integrator steps and sweep parallelism"""
    dt: PositiveFloat = 1e-3          # [s]
    crash_dt: PositiveFloat = 1e-5    # [s]
    workers: PositiveInt = 1


class ReportSection(_Section):
    compare_published: bool = True


class ScenarioConfig(_Section):
    """Complete, validated scenario configuration"""
    sweep: SweepSection = Field(default_factory=SweepSection)
    vehicle: VehicleSection = Field(default_factory=VehicleSection)
    crash: CrashSection = Field(default_factory=CrashSection)
    severity: SeveritySection = Field(default_factory=SeveritySection)
    scenario: ScenarioSection = Field(default_factory=ScenarioSection)
    simulation: SimulationSection = Field(default_factory=SimulationSection)
    report: ReportSection = Field(default_factory=ReportSection)

    @model_validator(mode='after')
    def _velocities_within_limit(self) -> 'ScenarioConfig':
        too_fast = [v for v in self.sweep.initial_velocities if v > self.vehicle.v_max]
        if too_fast:
            raise ValueError(f"sweep.initial_velocities {too_fast} exceed vehicle.v_max "
                             f"({self.vehicle.v_max})")
        return self

    def laden_mass(self, occupants: int) -> float:
        """Base mass plus one occupant mass per occupant"""
        if occupants < 0:
            raise ValueError(f"occupants must be non-negative, got {occupants}")
        return self.vehicle.base_mass + self.vehicle.occupant_mass * occupants

    def vehicle_params(self, occupants: int) -> VehicleParams:
        v = self.vehicle
        return VehicleParams(
            wheelbase=v.wheelbase,
            mass=self.laden_mass(occupants),
            drag_c=v.drag_c,
            v_max=v.v_max,
            a_max=v.a_max,
            d_max=v.d_max,
            f_max=v.f_max,
            p_gain=v.p_gain,
        )

    def crash_model(self, occupants: int) -> CrashModel:
        return CrashModel(
            mass=self.laden_mass(occupants),
            stiffness_k=self.crash.stiffness,
            failure_point_fp=self.crash.failure_point,
            include_failure_point_in_energy=self.crash.include_failure_point_in_energy,
        )

    @property
    def deformation_universe(self) -> FuzzyUniverse:
        s = self.severity
        return build_universe(s.deformation_lower, s.deformation_upper, name='peak_deformation')

    @property
    def velocity_universe(self) -> FuzzyUniverse:
        s = self.severity
        return build_universe(s.velocity_lower, s.velocity_upper, name='pedestrian_velocity')

    @property
    def barrier_distance(self) -> float:
        return self.scenario.barrier_distance or self.scenario.target_distance

    @property
    def pedestrian_distance(self) -> float:
        return self.scenario.pedestrian_distance or self.scenario.target_distance

    @property
    def default_physics(self) -> bool:
        """True when every key that changes a computed cost holds its default"""
        defaults = ScenarioSection()
        return (self.vehicle == VehicleSection()
                and self.severity == SeveritySection()
                and self.crash.stiffness == CrashSection().stiffness
                and self.simulation.dt == SimulationSection().dt
                and self.barrier_distance == defaults.target_distance
                and self.pedestrian_distance == defaults.target_distance)

    @property
    def compares_published(self) -> bool:
        """``report.compare_published`` with the published physics in effect"""
        return self.report.compare_published and self.default_physics

    def with_policy(self, policy: Union[str, PolicySelection]) -> 'ScenarioConfig':
        """Copy with ``scenario.policy`` replaced"""
        scenario = self.scenario.model_copy(update={'policy': PolicySelection(policy)})
        return self.model_copy(update={'scenario': scenario})


_SECTIONS: Dict[str, type] = {
    name: info.annotation for name, info in ScenarioConfig.model_fields.items()
}

# Bare key -> section, for keys written without their section prefix
_BARE_KEYS: Dict[str, str] = {
    key: section for section, model in _SECTIONS.items() for key in model.model_fields
}

# pydantic prefixes messages raised from custom validators
_VALUE_ERROR_PREFIX = 'Value error, '


# =============================================================================
# Configuration Loading
# =============================================================================

def _resolve_key(raw_key: str) -> Tuple[str, str]:
    if '.' in raw_key:
        section, _, name = raw_key.partition('.')
        if section not in _SECTIONS or not name or '.' in name:
            raise UnknownConfigKeyError(raw_key)
        return section, name
    if raw_key not in _BARE_KEYS:
        raise UnknownConfigKeyError(raw_key)
    return _BARE_KEYS[raw_key], raw_key


def parse_config(text: str) -> ScenarioConfig:
    """
    Parse and validate configuration text.

    Args:
        text: ``key = value`` lines; ``#`` starts a comment

    Returns:
        ScenarioConfig with unspecified keys defaulted

    Raises:
        ConfigParseError: Malformed or duplicate line
        UnknownConfigKeyError: Key outside the schema
        ConfigValueError: Value violates a field invariant
    """
    nested: Dict[str, Dict[str, str]] = {}
    seen: Dict[str, int] = {}

    for line_number, line in enumerate(text.splitlines(), start=1):
        content = line.split('#', 1)[0].strip()
        if not content:
            continue
        if '=' not in content:
            raise ConfigParseError(line_number, line, "expected 'key = value'")
        raw_key, _, value = content.partition('=')
        raw_key = raw_key.strip()
        if not raw_key:
            raise ConfigParseError(line_number, line, "missing key")

        section, name = _resolve_key(raw_key)
        dotted = f"{section}.{name}"
        if dotted in seen:
            raise ConfigParseError(line_number, line,
                                   f"duplicate key '{dotted}' (first set on line {seen[dotted]})")
        seen[dotted] = line_number
        nested.setdefault(section, {})[name] = value.strip()

    try:
        config = ScenarioConfig.model_validate(nested)
    except ValidationError as e:
        error = e.errors()[0]
        key = '.'.join(str(part) for part in error['loc'] if not isinstance(part, int))
        if error['type'] == 'extra_forbidden':
            raise UnknownConfigKeyError(key) from None
        reason = error['msg']
        if reason.startswith(_VALUE_ERROR_PREFIX):
            reason = reason[len(_VALUE_ERROR_PREFIX):]
        raise ConfigValueError(key or 'config', reason) from None

    logger.debug(f"Parsed {len(seen)} configuration keys")
    return config


def load_config(path: Union[str, Path]) -> ScenarioConfig:
    """Read and validate a configuration file (an empty file yields all defaults)"""
    path = Path(path)
    config = parse_config(path.read_text())
    logger.info(f"Loaded configuration from {path}")
    return config


# =============================================================================
# Report Types
# =============================================================================

@dataclass
class ScenarioRow:
    """Outcome of one (velocity, occupants, pedestrians) case"""
    velocity: float
    occupants: int
    pedestrians: int
    impact_velocity: float                 # at the pedestrians [m/s]
    barrier_impact_velocity: float         # [m/s]
    peak_deformation: float                # [m]
    cabin_intrusion: bool
    cost_pedestrians: float
    cost_occupants: float
    utilitarian_choice: str
    deontological_choice: str
    published_pedestrians: Optional[float] = None
    published_occupants: Optional[float] = None
    annotation: str = ''
    options: List[CollisionOption] = field(default_factory=list, repr=False, compare=False)
    decisions: Dict[Policy, Decision] = field(default_factory=dict, repr=False, compare=False)

    @property
    def key(self) -> Tuple[float, int, int]:
        return (self.velocity, self.occupants, self.pedestrians)

    def choice(self, policy: Policy) -> str:
        if policy is Policy.UTILITARIAN:
            return self.utilitarian_choice
        return self.deontological_choice

    def cost_of(self, option_id: str) -> float:
        if option_id == BARRIER_OPTION:
            return self.cost_occupants
        if option_id == PEDESTRIAN_OPTION:
            return self.cost_pedestrians
        raise ValueError(f"unknown option '{option_id}'")

    def chosen_cost(self, policy: Policy) -> float:
        return self.cost_of(self.choice(policy))

    def as_record(self) -> Dict[str, Any]:
        return {name: getattr(self, name) for name in ROW_COLUMNS}


@dataclass
class ScenarioReport:
    """Sorted sweep rows with per-scenario policy sums"""
    config: ScenarioConfig
    rows: List[ScenarioRow] = field(default_factory=list)
    summaries: Dict[int, Dict[str, float]] = field(default_factory=dict)
    published_summaries: Dict[int, Dict[str, float]] = field(default_factory=dict)
    annotations: List[str] = field(default_factory=list)

    @property
    def policies(self) -> Tuple[Policy, ...]:
        return self.config.scenario.policy.policies

    def rows_for(self, occupants: int) -> List[ScenarioRow]:
        return [row for row in self.rows if row.occupants == occupants]


# =============================================================================
# Pipeline
# =============================================================================

def _annotate(row: ScenarioRow) -> str:
    if row.published_pedestrians is None or row.published_occupants is None:
        return ''
    if row.key in KNOWN_TYPOS:
        return 'typo'
    pairs = ((row.cost_pedestrians, row.published_pedestrians),
             (row.cost_occupants, row.published_occupants))
    for computed, published in pairs:
        if published == 0:
            if computed != 0:
                return 'erratum'
        elif discrepancy(published, computed) > ERRATUM_THRESHOLD:
            return 'erratum'
    return ''


def _choices(options: List[CollisionOption]) -> Dict[Policy, Decision]:
    return {policy: decide(options, policy) for policy in Policy}


def run_case(config: ScenarioConfig, v0: float, occupants: int, pedestrians: int) -> ScenarioRow:
    """
    Run the full pipeline for one case.

    Args:
        config: Scenario configuration
        v0: Initial velocity [m/s]
        occupants: Vehicle occupants (laden mass and barrier-option people)
        pedestrians: People on the alternative path

    Returns:
        ScenarioRow with both policy decisions
    """
    if pedestrians < 0:
        raise ValueError(f"pedestrians must be non-negative, got {pedestrians}")

    params = config.vehicle_params(occupants)
    dt = config.simulation.dt
    pedestrian_braking = brake_to_target(params, v0, config.pedestrian_distance, dt)
    if config.barrier_distance == config.pedestrian_distance:
        barrier_braking = pedestrian_braking
    else:
        barrier_braking = brake_to_target(params, v0, config.barrier_distance, dt)

    peak = lpm_peak_deformation(config.crash_model(occupants), barrier_braking.impact_velocity)
    original = config.scenario.original_course

    barrier = build_option(BARRIER_OPTION, TargetKind.RIGID_BARRIER, occupants, peak,
                           config.deformation_universe,
                           is_original_course=original is CourseChoice.BARRIER)
    pedestrian = build_option(PEDESTRIAN_OPTION, TargetKind.PEDESTRIANS, pedestrians,
                              pedestrian_braking.impact_velocity, config.velocity_universe,
                              is_original_course=original is CourseChoice.PEDESTRIANS)

    # No contact, no injury: the extrapolated membership would otherwise go negative
    for option, braking in ((barrier, barrier_braking), (pedestrian, pedestrian_braking)):
        if braking.stopped_before_target:
            logger.warning(f"v0={v0}m/s stops before the {option.option_id}; cost set to 0")
            option.utility_cost = 0.0

    options = [barrier, pedestrian]
    decisions = _choices(options)
    published = None
    if config.compares_published:
        published = PUBLISHED_COSTS.get((float(v0), occupants, pedestrians))

    row = ScenarioRow(
        velocity=float(v0),
        occupants=occupants,
        pedestrians=pedestrians,
        impact_velocity=pedestrian_braking.impact_velocity,
        barrier_impact_velocity=barrier_braking.impact_velocity,
        peak_deformation=peak,
        cabin_intrusion=exceeds_designed_deformation(peak, config.crash.designed_deformation),
        cost_pedestrians=pedestrian.utility_cost,
        cost_occupants=barrier.utility_cost,
        utilitarian_choice=decisions[Policy.UTILITARIAN].chosen_option,
        deontological_choice=decisions[Policy.DEONTOLOGICAL].chosen_option,
        published_pedestrians=published[0] if published else None,
        published_occupants=published[1] if published else None,
        options=options,
        decisions=decisions,
    )
    row.annotation = _annotate(row)
    logger.debug(f"Case v0={v0} occupants={occupants} pedestrians={pedestrians}: "
                 f"costs P={row.cost_pedestrians:.6g} O={row.cost_occupants:.6g}, "
                 f"utilitarian -> {row.utilitarian_choice}")
    return row


def summed_costs(rows: List[ScenarioRow]) -> Dict[int, Dict[str, float]]:
    """Per occupant scenario and policy, the sum of the chosen options' costs"""
    sums: Dict[int, Dict[str, float]] = {}
    for row in rows:
        scenario = sums.setdefault(row.occupants, {p.value: 0.0 for p in Policy})
        for policy in Policy:
            scenario[policy.value] += row.chosen_cost(policy)
    return sums


def published_rows(original_course: CourseChoice = CourseChoice.BARRIER) -> List[ScenarioRow]:
    """
    Rows rebuilt from the published per-row costs with the decisions recomputed.

    Physical columns are NaN; only the cost and choice columns are meaningful.
    """
    rows = []
    for (velocity, occupants, pedestrians), (cost_p, cost_o) in sorted(PUBLISHED_COSTS.items()):
        options = [
            CollisionOption(BARRIER_OPTION, original_course is CourseChoice.BARRIER,
                            TargetKind.RIGID_BARRIER, occupants, math.nan, utility_cost=cost_o),
            CollisionOption(PEDESTRIAN_OPTION, original_course is CourseChoice.PEDESTRIANS,
                            TargetKind.PEDESTRIANS, pedestrians, math.nan, utility_cost=cost_p),
        ]
        decisions = _choices(options)
        rows.append(ScenarioRow(
            velocity=velocity,
            occupants=occupants,
            pedestrians=pedestrians,
            impact_velocity=math.nan,
            barrier_impact_velocity=math.nan,
            peak_deformation=math.nan,
            cabin_intrusion=False,
            cost_pedestrians=cost_p,
            cost_occupants=cost_o,
            utilitarian_choice=decisions[Policy.UTILITARIAN].chosen_option,
            deontological_choice=decisions[Policy.DEONTOLOGICAL].chosen_option,
            published_pedestrians=cost_p,
            published_occupants=cost_o,
            options=options,
            decisions=decisions,
        ))
    return rows


def _annotation_lines(rows: List[ScenarioRow], original_course: CourseChoice) -> List[str]:
    lines = []
    published_choices = {row.key: row for row in published_rows(original_course)}
    for row in rows:
        label = (f"v0={row.velocity:g} m/s, {row.occupants} occupant(s), "
                 f"{row.pedestrians} pedestrian(s)")
        if row.annotation == 'typo':
            lines.append(f"{label}: published pedestrian cost {row.published_pedestrians:.6g} "
                         f"is a typo for {row.cost_pedestrians:.6g}")
        elif row.annotation == 'erratum':
            lines.append(f"{label}: computed costs P={row.cost_pedestrians:.6g} "
                         f"O={row.cost_occupants:.6g} vs published "
                         f"P={row.published_pedestrians:.6g} O={row.published_occupants:.6g}")
        reference = published_choices.get(row.key)
        if reference is not None and reference.utilitarian_choice != row.utilitarian_choice:
            lines.append(f"{label}: utilitarian choice '{row.utilitarian_choice}' differs from "
                         f"'{reference.utilitarian_choice}' on the published costs")
    return lines


def sweep(config: ScenarioConfig, workers: Optional[int] = None) -> ScenarioReport:
    """
    Run every (velocity, occupants, pedestrians) case of the configuration.

    Args:
        config: Scenario configuration
        workers: Process count, defaults to ``simulation.workers``

    Returns:
        ScenarioReport with rows sorted by (velocity, occupants, pedestrians)
    """
    s = config.sweep
    cases = [(v, o, p)
             for v in sorted(set(s.initial_velocities))
             for o in sorted(set(s.occupant_counts))
             for p in sorted(set(s.pedestrian_counts))]
    workers = workers or config.simulation.workers
    if workers < 1:
        raise ValueError(f"workers must be positive, got {workers}")

    logger.info(f"Sweeping {len(cases)} cases with {workers} worker(s)")
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(run_case, config, *case) for case in cases]
            rows = [future.result() for future in as_completed(futures)]
    else:
        rows = [run_case(config, *case) for case in cases]
    rows.sort(key=lambda row: row.key)

    report = ScenarioReport(config=config, rows=rows, summaries=summed_costs(rows))
    if config.report.compare_published and not config.default_physics:
        logger.info("Physics differs from the published setup; skipping published comparison")
    if config.compares_published:
        report.published_summaries = {
            occupants: dict(PUBLISHED_SUMMED_COSTS[occupants])
            for occupants in sorted(set(s.occupant_counts)) if occupants in PUBLISHED_SUMMED_COSTS
        }
        report.annotations = _annotation_lines(rows, config.scenario.original_course)
        for line in report.annotations:
            logger.warning(line)

    logger.info(f"Sweep complete: {len(rows)} rows, {len(report.annotations)} annotation(s)")
    return report
