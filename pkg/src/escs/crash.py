#!/usr/bin/env python3
"""
Lumped-Parameter Crash Model

Single mass-spring model of a vehicle striking a rigid barrier:

    m * x'' + k * x = f(t),   x(0) = 0, x'(0) = v_impact

Only the first quarter cycle is considered (no damping, no rebound), so the
peak deformation is where the crumple-zone velocity reaches zero. Stiffness
and failure point come from a straight-line least-squares fit of the
force/deformation curve, f = fp + k * delta. The failure point is a fitted
intercept for reporting; it does not enter the equation of motion.

Usage:
    model = CrashModel(mass=1247.0)
    outcome = lpm_closed_form(model, 15.6464)
    outcome.peak_deformation        # ~0.5842 m

    fit = lls_fit(load_samples('force_deformation.csv'))

License: MIT
"""

import csv
import logging
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import List, Optional, Sequence, Union

import numpy as np

from .dynamics import rk4_step
from .errors import SingularFitError
from .published import (
    FE_REFERENCE,
    FiniteElementReference,
    PUBLISHED_FAILURE_POINT_N,
    PUBLISHED_STIFFNESS_N_PER_M,
)

logger = logging.getLogger(__name__)

DEFAULT_STIFFNESS_N_PER_M = PUBLISHED_STIFFNESS_N_PER_M
DEFAULT_FAILURE_POINT_N = PUBLISHED_FAILURE_POINT_N
DESIGNED_DEFORMATION_M = FE_REFERENCE.designed_deformation
DEFAULT_CRASH_DT_S = 1e-5
STANDARD_GRAVITY = 9.80665

SAMPLE_COLUMNS = ('deformation_m', 'force_N')


# =============================================================================
# Domain Types
# =============================================================================

@dataclass(frozen=True)
class CrashModel:
    """Mass/stiffness/failure-point triple of the lumped-parameter model"""
    mass: float
    stiffness_k: float = DEFAULT_STIFFNESS_N_PER_M
    failure_point_fp: float = DEFAULT_FAILURE_POINT_N
    include_failure_point_in_energy: bool = False

    def __post_init__(self):
        if not self.mass > 0:
            raise ValueError(f"mass must be positive, got {self.mass}")
        if not self.stiffness_k > 0:
            raise ValueError(f"stiffness_k must be positive, got {self.stiffness_k}")
        if not self.failure_point_fp >= 0:
            raise ValueError(f"failure_point_fp must be non-negative, got {self.failure_point_fp}")

    @property
    def natural_frequency(self) -> float:
        """Undamped angular frequency sqrt(k/m) [rad/s]"""
        return math.sqrt(self.stiffness_k / self.mass)


@dataclass
class CrashOutcome:
    """Quarter-cycle crash response"""
    peak_deformation: float        # [m]
    collision_duration: float      # [s]
    collision_energy: float        # [J]
    peak_acceleration: float       # magnitude [m/s^2]
    series: Optional[np.ndarray] = field(default=None, repr=False)   # t, deformation, acceleration

    @property
    def peak_acceleration_g(self) -> float:
        return self.peak_acceleration / STANDARD_GRAVITY


@dataclass(frozen=True)
class ForceDeformationSample:
    """One point of a force/deformation curve"""
    deformation: float   # [m]
    force: float         # [N]

    def __post_init__(self):
        if not self.deformation >= 0:
            raise ValueError(f"deformation must be non-negative, got {self.deformation}")


@dataclass(frozen=True)
class LinearFit:
    """Least-squares line f = fp + k * delta"""
    failure_point_fp: float
    stiffness_k: float
    fitted_energy: float
    residuals: np.ndarray = field(repr=False, compare=False)

    def predict(self, deformation) -> np.ndarray:
        return self.failure_point_fp + self.stiffness_k * np.asarray(deformation, dtype=float)


@dataclass(frozen=True)
class ReferenceComparison:
    """One row of the model-versus-finite-element table"""
    quantity: str
    reference: float
    model: float

    @property
    def discrepancy(self) -> float:
        return discrepancy(self.reference, self.model)


# =============================================================================
# Energy and Discrepancy
# =============================================================================

def kinetic_energy(mass: float, v: float) -> float:
    """0.5 * m * v^2 [J]"""
    if not mass > 0:
        raise ValueError(f"mass must be positive, got {mass}")
    if v < 0:
        raise ValueError(f"v must be non-negative, got {v}")
    return 0.5 * mass * v * v


def collision_energy(model: CrashModel, peak_deformation: float) -> float:
    """Area under the force/deformation line up to the peak"""
    energy = 0.5 * model.stiffness_k * peak_deformation ** 2
    if model.include_failure_point_in_energy:
        energy += model.failure_point_fp * peak_deformation
    return energy


def discrepancy(reference: float, model: float) -> float:
    """Per-unit magnitude |(reference - model) / reference|"""
    if reference == 0:
        raise ValueError("reference value must be non-zero")
    return abs((reference - model) / reference)


def exceeds_designed_deformation(
    peak_deformation: float,
    designed: float = DESIGNED_DEFORMATION_M
) -> bool:
    """Deformation past the designed crumple length intrudes into the passenger cell"""
    return peak_deformation > designed


# =============================================================================
# Lumped-Parameter Model
# =============================================================================

def lpm_peak_deformation(model: CrashModel, impact_v: float) -> float:
    """Quarter-cycle amplitude v * sqrt(m/k) of the undamped oscillator"""
    if impact_v < 0:
        raise ValueError(f"impact_v must be non-negative, got {impact_v}")
    return impact_v / model.natural_frequency


def lpm_closed_form(model: CrashModel, impact_v: float) -> CrashOutcome:
    """Analytic quarter-cycle outcome (the production path)"""
    peak = lpm_peak_deformation(model, impact_v)
    omega = model.natural_frequency
    return CrashOutcome(
        peak_deformation=peak,
        collision_duration=0.5 * math.pi / omega if impact_v > 0 else 0.0,
        collision_energy=collision_energy(model, peak),
        peak_acceleration=impact_v * omega,
    )


def lpm_simulate(
    model: CrashModel,
    impact_v: float,
    dt: float = DEFAULT_CRASH_DT_S
) -> CrashOutcome:
    """
    Integrate the mass-spring model until the deformation rate first reaches zero.

    Args:
        model: Crash model constants
        impact_v: Barrier impact velocity [m/s]
        dt: Integrator step [s]

    Returns:
        CrashOutcome including the (t, deformation, acceleration) series
    """
    if not impact_v > 0:
        raise ValueError(f"impact_v must be positive, got {impact_v}")
    if not dt > 0:
        raise ValueError(f"dt must be positive, got {dt}")

    omega_sq = model.stiffness_k / model.mass

    def derivative(s):
        x, xdot = s
        return (xdot, -omega_sq * x)

    t = 0.0
    x, xdot = 0.0, impact_v
    rows = [(t, x, 0.0)]
    # generous bound: the quarter period is pi/2 / omega
    max_steps = int(math.ceil(4.0 * math.pi / math.sqrt(omega_sq) / dt))

    for _ in range(max_steps):
        x_next, xdot_next = rk4_step(derivative, (x, xdot), dt)
        if xdot_next <= 0:
            # velocity is linear inside the step to O(dt^2)
            tau = dt * xdot / (xdot - xdot_next)
            peak = x + 0.5 * xdot * tau
            t += tau
            rows.append((t, peak, -omega_sq * peak))
            break
        t += dt
        x, xdot = x_next, xdot_next
        rows.append((t, x, -omega_sq * x))
    else:
        raise RuntimeError("crash simulation did not reach peak deformation")

    series = np.array(rows, dtype=float)
    peak = float(series[-1, 1])
    logger.debug(f"LPM m={model.mass}kg v={impact_v}m/s: peak {peak:.5f}m at t={t:.5f}s "
                 f"({len(rows) - 1} steps)")
    return CrashOutcome(
        peak_deformation=peak,
        collision_duration=t,
        collision_energy=collision_energy(model, peak),
        peak_acceleration=float(np.max(np.abs(series[:, 2]))),
        series=series,
    )


def compare_with_reference(
    model: CrashModel,
    impact_v: Optional[float] = None,
    reference: FiniteElementReference = FE_REFERENCE
) -> List[ReferenceComparison]:
    """
    Compare the lumped-parameter outcome against finite-element outputs.

    Args:
        model: Crash model; its energy flag is ignored, both variants are reported
        impact_v: Impact velocity, defaults to the reference test velocity
        reference: Finite-element outputs

    Returns:
        Rows for peak deformation, energy with/without failure point and duration
    """
    if impact_v is None:
        impact_v = reference.impact_velocity
    outcome = lpm_closed_form(model, impact_v)
    peak = outcome.peak_deformation
    spring_energy = 0.5 * model.stiffness_k * peak ** 2
    return [
        ReferenceComparison('peak_deformation', reference.peak_deformation, peak),
        ReferenceComparison('collision_energy_with_failure_point', reference.collision_energy,
                            spring_energy + model.failure_point_fp * peak),
        ReferenceComparison('collision_energy', reference.collision_energy, spring_energy),
        ReferenceComparison('collision_duration', reference.collision_duration,
                            outcome.collision_duration),
    ]


# =============================================================================
# Least-Squares Identification
# =============================================================================

def lls_fit(samples: Sequence[ForceDeformationSample]) -> LinearFit:
    """
    Ordinary least-squares fit of f = fp + k * delta.

    Args:
        samples: At least two samples with two distinct deformations

    Returns:
        LinearFit with failure point, stiffness and the area under the fitted
        line across the sampled deformation range
    """
    if len(samples) < 2:
        raise ValueError(f"need at least 2 samples, got {len(samples)}")

    deformation = np.array([s.deformation for s in samples], dtype=float)
    force = np.array([s.force for s in samples], dtype=float)
    if np.ptp(deformation) == 0:
        raise SingularFitError("all deformation values are equal; design matrix is singular")

    phi = np.column_stack([np.ones_like(deformation), deformation])
    theta, _, rank, _ = np.linalg.lstsq(phi, force, rcond=None)
    if rank < 2:
        raise SingularFitError(f"design matrix rank {rank} < 2")

    fp, k = float(theta[0]), float(theta[1])
    lo, hi = float(deformation.min()), float(deformation.max())
    energy = fp * (hi - lo) + 0.5 * k * (hi * hi - lo * lo)
    logger.info(f"Fitted {len(samples)} samples: fp={fp:.1f}N, k={k:.1f}N/m, area={energy:.1f}J")
    return LinearFit(
        failure_point_fp=fp,
        stiffness_k=k,
        fitted_energy=energy,
        residuals=force - phi @ theta,
    )


def load_samples(path: Union[str, Path]) -> List[ForceDeformationSample]:
    """Read a ``deformation_m,force_N`` CSV file"""
    path = Path(path)
    with path.open(newline='') as f:
        reader = csv.DictReader(f)
        if tuple(reader.fieldnames or ()) != SAMPLE_COLUMNS:
            raise ValueError(f"{path}: expected header {','.join(SAMPLE_COLUMNS)}, "
                             f"got {reader.fieldnames}")
        samples = []
        for line_number, row in enumerate(reader, start=2):
            try:
                samples.append(ForceDeformationSample(
                    deformation=float(row['deformation_m']),
                    force=float(row['force_N'])
                ))
            except (TypeError, ValueError) as e:
                raise ValueError(f"{path}:{line_number}: {e}") from e
    logger.debug(f"Loaded {len(samples)} force/deformation samples from {path}")
    return samples
