"""
ESCS - Ethical Steering Control System

Predicts the outcome of an unavoidable collision (vehicle braking and
steering, barrier crash response, pedestrian impact speed), grades the
injury severity of each option with fuzzy membership and selects a path
under a utilitarian or deontological policy.
"""

__version__ = "1.0.0"

from .dynamics import (
    # Classes
    VehicleParams,
    KinematicState,
    LongitudinalState,
    ImpactResult,
    SteeringResult,
    # Functions
    rk4_step,
    kinematic_step,
    constant_speed_path,
    turn_radius,
    longitudinal_acceleration,
    longitudinal_step,
    brake_to_target,
    closed_form_impact_velocity,
    steering_trajectory,
)

from .crash import (
    CrashModel,
    CrashOutcome,
    ForceDeformationSample,
    LinearFit,
    ReferenceComparison,
    kinetic_energy,
    collision_energy,
    discrepancy,
    exceeds_designed_deformation,
    lpm_peak_deformation,
    lpm_closed_form,
    lpm_simulate,
    compare_with_reference,
    lls_fit,
    load_samples,
)

from .severity import (
    FuzzyUniverse,
    MembershipResult,
    DEFORMATION_UNIVERSE,
    PEDESTRIAN_VELOCITY_UNIVERSE,
    build_universe,
    membership,
    set_memberships,
    membership_matrix,
)

from .ethics import (
    # Enums
    TargetKind,
    Policy,
    # Classes
    CollisionOption,
    Decision,
    # Functions
    factorial_squared_weight,
    utility_cost,
    swapped_pairing_cost,
    build_option,
    decide,
    decision_rows,
)

from .scenario import (
    CourseChoice,
    PolicySelection,
    ScenarioConfig,
    ScenarioRow,
    ScenarioReport,
    parse_config,
    load_config,
    run_case,
    sweep,
    summed_costs,
    published_rows,
)

from .report import emit_report, format_rows_csv

from .errors import (
    ESCSError,
    ConfigError,
    ConfigParseError,
    UnknownConfigKeyError,
    ConfigValueError,
    SingularFitError,
    ReportWriteError,
)

__all__ = [
    # Version
    '__version__',

    # Vehicle dynamics
    'VehicleParams',
    'KinematicState',
    'LongitudinalState',
    'ImpactResult',
    'SteeringResult',
    'rk4_step',
    'kinematic_step',
    'constant_speed_path',
    'turn_radius',
    'longitudinal_acceleration',
    'longitudinal_step',
    'brake_to_target',
    'closed_form_impact_velocity',
    'steering_trajectory',

    # Crash model
    'CrashModel',
    'CrashOutcome',
    'ForceDeformationSample',
    'LinearFit',
    'ReferenceComparison',
    'kinetic_energy',
    'collision_energy',
    'discrepancy',
    'exceeds_designed_deformation',
    'lpm_peak_deformation',
    'lpm_closed_form',
    'lpm_simulate',
    'compare_with_reference',
    'lls_fit',
    'load_samples',

    # Severity
    'FuzzyUniverse',
    'MembershipResult',
    'DEFORMATION_UNIVERSE',
    'PEDESTRIAN_VELOCITY_UNIVERSE',
    'build_universe',
    'membership',
    'set_memberships',
    'membership_matrix',

    # Ethics
    'TargetKind',
    'Policy',
    'CollisionOption',
    'Decision',
    'factorial_squared_weight',
    'utility_cost',
    'swapped_pairing_cost',
    'build_option',
    'decide',
    'decision_rows',

    # Scenario and report
    'CourseChoice',
    'PolicySelection',
    'ScenarioConfig',
    'ScenarioRow',
    'ScenarioReport',
    'parse_config',
    'load_config',
    'run_case',
    'sweep',
    'summed_costs',
    'published_rows',
    'emit_report',
    'format_rows_csv',

    # Errors
    'ESCSError',
    'ConfigError',
    'ConfigParseError',
    'UnknownConfigKeyError',
    'ConfigValueError',
    'SingularFitError',
    'ReportWriteError',
]
