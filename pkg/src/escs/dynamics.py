#!/usr/bin/env python3
"""
Vehicle Motion Models for the Ethical Steering Control System

Planar kinematic bicycle model plus a longitudinal force-driven model under
saturated proportional velocity control. Both are integrated with one
fixed-step 4th-order Runge-Kutta scheme.

Saturation contract of the longitudinal model (applied in this order):
    u = clamp(P * (v_ref - v), -1, +1)      normalized control
    F = u * F_max                           commanded force
    a = (F - c * v) / m                     rolling resistance + drag
    a = clamp(a, -d_max, +a_max)            actuator limits
    v = clamp(v, 0, v_max)                  after integration, no reverse

Usage:
    params = VehicleParams(mass=1407.0)
    result = brake_to_target(params, v0=20.0, d_target=10.0)
    print(result.impact_velocity)          # ~17.32 m/s

    path = steering_trajectory(params, result, gamma=0.15, d_target=10.0)
    print(path.lateral_at_target, path.lane_clearance)

License: MIT
"""

import logging
import math
from dataclasses import dataclass, field, replace
from typing import Callable, Iterator, List, Optional, Tuple

import numpy as np

logger = logging.getLogger(__name__)

State = Tuple[float, ...]

DEFAULT_DT_S = 1e-3
DEFAULT_WHEELBASE_M = 2.55
MAX_STEERING_ANGLE_RAD = math.radians(10.0)
LANE_WIDTH_M = 3.5
STOP_VELOCITY_MPS = 1e-6
MAX_SIMULATION_TIME_S = 600.0


# =============================================================================
# Integrator
# =============================================================================

def rk4_step(derivative: Callable[[State], State], state: State, dt: float) -> State:
    """
    Advance an autonomous system one step with classic 4th-order Runge-Kutta.

    Args:
        derivative: Function mapping a state tuple to its time derivative
        state: Current state tuple
        dt: Step size [s]

    Returns:
        State tuple after ``dt``
    """
    k1 = derivative(state)
    k2 = derivative(tuple(s + 0.5 * dt * k for s, k in zip(state, k1)))
    k3 = derivative(tuple(s + 0.5 * dt * k for s, k in zip(state, k2)))
    k4 = derivative(tuple(s + dt * k for s, k in zip(state, k3)))
    return tuple(
        s + dt / 6.0 * (a + 2.0 * b + 2.0 * c + d)
        for s, a, b, c, d in zip(state, k1, k2, k3, k4)
    )


def _clamp(value: float, low: float, high: float) -> float:
    return min(max(value, low), high)


# =============================================================================
# Domain Types
# =============================================================================

@dataclass(frozen=True)
class VehicleParams:
    """Vehicle constants for the bicycle and longitudinal models"""
    wheelbase: float = DEFAULT_WHEELBASE_M   # L [m]
    mass: float = 1407.0                     # laden mass [kg]
    drag_c: float = 140.0                    # rolling resistance + drag [N*s/m]
    v_max: float = 47.8                      # [m/s]
    a_max: float = 8.5                       # [m/s^2]
    d_max: float = 5.0                       # deceleration magnitude [m/s^2]
    f_max: float = 10600.0                   # [N]
    p_gain: float = 70.0                     # proportional gain

    def __post_init__(self):
        for name in ('wheelbase', 'mass', 'v_max', 'a_max', 'd_max', 'f_max', 'p_gain'):
            value = getattr(self, name)
            if not value > 0:
                raise ValueError(f"{name} must be positive, got {value}")
        if not self.drag_c >= 0:
            raise ValueError(f"drag_c must be non-negative, got {self.drag_c}")

    def with_mass(self, mass: float) -> 'VehicleParams':
        """Copy with a different laden mass"""
        return replace(self, mass=mass)


@dataclass(frozen=True)
class KinematicState:
    """Planar pose of the rear axle"""
    x: float = 0.0
    y: float = 0.0
    heading: float = 0.0   # theta [rad]
    t: float = 0.0


@dataclass(frozen=True)
class LongitudinalState:
    """Position and speed along the direction of travel"""
    x: float = 0.0
    v: float = 0.0
    t: float = 0.0


@dataclass
class ImpactResult:
    """Outcome of an emergency braking run towards a target"""
    impact_velocity: float
    impact_time: float
    stopped_before_target: bool
    series: List[LongitudinalState] = field(default_factory=list)

    def as_array(self) -> np.ndarray:
        """Series as an (n, 3) array with columns t, x, v"""
        return np.array([(s.t, s.x, s.v) for s in self.series], dtype=float).reshape(-1, 3)


@dataclass
class SteeringResult:
    """Planar path driven with a braking velocity profile and fixed steering"""
    gamma: float
    path: List[KinematicState] = field(default_factory=list)
    velocities: List[float] = field(default_factory=list)
    lane_clearance: bool = False
    lateral_at_target: Optional[float] = None

    @property
    def reached_target(self) -> bool:
        return self.lateral_at_target is not None

    @property
    def max_lateral(self) -> float:
        return max((abs(s.y) for s in self.path), default=0.0)

    def as_array(self) -> np.ndarray:
        """Path as an (n, 5) array with columns t, x, y, theta, v"""
        rows = [(s.t, s.x, s.y, s.heading, v) for s, v in zip(self.path, self.velocities)]
        return np.array(rows, dtype=float).reshape(-1, 5)


# =============================================================================
# Kinematic Bicycle Model
# =============================================================================

def _check_steering(gamma: float):
    if not abs(gamma) <= MAX_STEERING_ANGLE_RAD:
        raise ValueError(
            f"steering angle {gamma:.4f} rad exceeds limit of "
            f"{MAX_STEERING_ANGLE_RAD:.4f} rad (10 deg)"
        )


def turn_radius(gamma: float, wheelbase: float = DEFAULT_WHEELBASE_M) -> float:
    """Turning radius L / tan(gamma) of the bicycle model (inf when straight)"""
    if gamma == 0:
        return math.inf
    return wheelbase / math.tan(abs(gamma))


def kinematic_step(
    state: KinematicState,
    v: float,
    gamma: float,
    dt: float,
    wheelbase: float = DEFAULT_WHEELBASE_M
) -> KinematicState:
    """
    Advance the kinematic bicycle model by one step.

    x' = v cos(theta), y' = v sin(theta), theta' = v / L * tan(gamma)

    Args:
        state: Current pose
        v: Speed held constant over the step [m/s]
        gamma: Steering angle, at most 10 degrees in magnitude [rad]
        dt: Step size [s]
        wheelbase: Distance between axles L [m]

    Returns:
        Pose after ``dt``
    """
    if not dt > 0:
        raise ValueError(f"dt must be positive, got {dt}")
    _check_steering(gamma)

    yaw_rate = v / wheelbase * math.tan(gamma)

    def derivative(s: State) -> State:
        heading = s[2]
        return (v * math.cos(heading), v * math.sin(heading), yaw_rate)

    x, y, heading = rk4_step(derivative, (state.x, state.y, state.heading), dt)
    return KinematicState(x=x, y=y, heading=heading, t=state.t + dt)


def constant_speed_path(
    v: float,
    gamma: float,
    duration: float,
    dt: float = DEFAULT_DT_S,
    wheelbase: float = DEFAULT_WHEELBASE_M
) -> List[KinematicState]:
    """Trajectory from the origin at constant speed and steering angle"""
    if not duration > 0:
        raise ValueError(f"duration must be positive, got {duration}")
    state = KinematicState()
    path = [state]
    for _ in range(int(round(duration / dt))):
        state = kinematic_step(state, v, gamma, dt, wheelbase)
        path.append(state)
    return path


# =============================================================================
# Longitudinal Model with Velocity Control
# =============================================================================

def longitudinal_acceleration(v: float, v_ref: float, params: VehicleParams) -> float:
    """Saturated acceleration commanded by the proportional velocity loop"""
    u = _clamp(params.p_gain * (v_ref - v), -1.0, 1.0)
    force = u * params.f_max
    accel = (force - params.drag_c * v) / params.mass
    return _clamp(accel, -params.d_max, params.a_max)


def longitudinal_step(
    state: LongitudinalState,
    v_ref: float,
    params: VehicleParams,
    dt: float
) -> LongitudinalState:
    """
    Advance the longitudinal model by one step.

    Args:
        state: Current position/speed
        v_ref: Reference speed for the proportional loop [m/s]
        params: Vehicle constants
        dt: Step size [s]

    Returns:
        New state with speed clamped to [0, v_max]
    """
    if not dt > 0:
        raise ValueError(f"dt must be positive, got {dt}")

    def derivative(s: State) -> State:
        v = s[1]
        return (v, longitudinal_acceleration(v, v_ref, params))

    x, v = rk4_step(derivative, (state.x, state.v), dt)
    return LongitudinalState(x=x, v=_clamp(v, 0.0, params.v_max), t=state.t + dt)


def brake_to_target(
    params: VehicleParams,
    v0: float,
    d_target: float,
    dt: float = DEFAULT_DT_S
) -> ImpactResult:
    """
    Emergency braking (v_ref = 0) from ``v0`` towards a target ``d_target`` ahead.

    Stops at the first step whose position reaches the target, interpolating
    speed and time linearly inside that step, or when the vehicle has stopped.

    Args:
        params: Vehicle constants
        v0: Initial speed, 0 < v0 <= v_max [m/s]
        d_target: Distance to the collision target [m]
        dt: Integrator step [s]

    Returns:
        ImpactResult with the full time series
    """
    if not 0 < v0 <= params.v_max:
        raise ValueError(f"v0 must be in (0, {params.v_max}], got {v0}")
    if not d_target > 0:
        raise ValueError(f"d_target must be positive, got {d_target}")
    if not dt > 0:
        raise ValueError(f"dt must be positive, got {dt}")

    state = LongitudinalState(x=0.0, v=v0, t=0.0)
    series = [state]
    max_steps = int(math.ceil(MAX_SIMULATION_TIME_S / dt))

    for _ in range(max_steps):
        nxt = longitudinal_step(state, 0.0, params, dt)

        if nxt.x >= d_target:
            frac = (d_target - state.x) / (nxt.x - state.x)
            impact = LongitudinalState(
                x=d_target,
                v=state.v + frac * (nxt.v - state.v),
                t=state.t + frac * dt
            )
            series.append(impact)
            logger.debug(f"Impact at t={impact.t:.4f}s, v={impact.v:.4f}m/s "
                         f"after {len(series) - 1} steps")
            return ImpactResult(
                impact_velocity=impact.v,
                impact_time=impact.t,
                stopped_before_target=False,
                series=series
            )

        series.append(nxt)
        if nxt.v <= STOP_VELOCITY_MPS:
            logger.debug(f"Stopped at x={nxt.x:.3f}m before target at {d_target}m")
            return ImpactResult(
                impact_velocity=0.0,
                impact_time=nxt.t,
                stopped_before_target=True,
                series=series
            )
        state = nxt

    raise RuntimeError(f"braking did not terminate within {MAX_SIMULATION_TIME_S}s")


def closed_form_impact_velocity(v0: float, a_dec: float, d: float) -> float:
    """Impact speed under constant deceleration: sqrt(max(0, v0^2 - 2 a d))"""
    if v0 < 0 or not a_dec > 0 or d < 0:
        raise ValueError(f"need v0 >= 0, a_dec > 0, d >= 0 (got {v0}, {a_dec}, {d})")
    return math.sqrt(max(0.0, v0 * v0 - 2.0 * a_dec * d))


# =============================================================================
# Steering Path
# =============================================================================

def _velocity_segments(
    params: VehicleParams,
    braking: ImpactResult,
    dt: float
) -> Iterator[Tuple[float, float, float]]:
    """Yield (step, mean speed, end speed) from the braking profile, then keep braking"""
    samples = braking.series
    for prev, cur in zip(samples, samples[1:]):
        step = cur.t - prev.t
        if step > 0:
            yield step, 0.5 * (prev.v + cur.v), cur.v

    if braking.stopped_before_target:
        return

    # The curved path covers less x per metre travelled than the straight one
    state = samples[-1]
    deadline = state.t + MAX_SIMULATION_TIME_S
    while state.v > STOP_VELOCITY_MPS and state.t < deadline:
        nxt = longitudinal_step(state, 0.0, params, dt)
        yield dt, 0.5 * (state.v + nxt.v), nxt.v
        state = nxt


def steering_trajectory(
    params: VehicleParams,
    braking: ImpactResult,
    gamma: float,
    d_target: float,
    dt: float = DEFAULT_DT_S
) -> SteeringResult:
    """
    Drive the bicycle model with a braking speed profile and constant steering.

    The lane is cleared when |y| reaches the lane width before x reaches
    ``d_target``; the lateral offset at the crossing is recorded.

    Args:
        params: Vehicle constants (wheelbase is used)
        braking: Result of ``brake_to_target`` supplying the speed profile
        gamma: Constant steering angle [rad]
        d_target: Longitudinal distance of the target [m]
        dt: Step for braking beyond the end of the profile [s]

    Returns:
        SteeringResult
    """
    _check_steering(gamma)
    if not braking.series:
        raise ValueError("braking series is empty")
    if not d_target > 0:
        raise ValueError(f"d_target must be positive, got {d_target}")

    first = braking.series[0]
    state = KinematicState(t=first.t)
    result = SteeringResult(gamma=gamma, path=[state], velocities=[first.v])

    for step, v_mean, v_end in _velocity_segments(params, braking, dt):
        nxt = kinematic_step(state, v_mean, gamma, step, params.wheelbase)
        result.path.append(nxt)
        result.velocities.append(v_end)

        if nxt.x >= d_target:
            frac = (d_target - state.x) / (nxt.x - state.x)
            result.lateral_at_target = state.y + frac * (nxt.y - state.y)
            if abs(result.lateral_at_target) >= LANE_WIDTH_M:
                result.lane_clearance = True
            break
        if abs(nxt.y) >= LANE_WIDTH_M:
            result.lane_clearance = True
        state = nxt

    logger.debug(f"Steering gamma={gamma:.3f}rad: lateral at target "
                 f"{result.lateral_at_target}, clearance={result.lane_clearance}")
    return result
