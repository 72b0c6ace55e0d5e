"""
CSV and plot-series emission for sweep reports.

Tables are written with six significant digits. Braking, trajectory and
crash series keep full float precision. Every file uses ``\\n`` line
endings, so two runs of the same configuration produce byte-identical
output.

Outputs (``emit='csv'``):
    sweep.csv                       all rows, ROW_COLUMNS order
    scenario_occupants_<n>.csv      rows of one occupant scenario
    summary.csv                     summed chosen costs per scenario and policy
    decisions.csv                   per-option costs behind every decision

Outputs (``emit='plots'``):
    costs_vs_pedestrians_occupants_<n>.csv
    braking_v<v>_occupants_<n>.csv          t,x,v
    trajectory_v<v>_gamma_<g>.csv           t,x,y,theta,v
    crash_v<v>_occupants_<n>.csv            t,deformation,acceleration
    membership_<universe>.csv               value,E,D,C,B,A
"""

import csv
import io
import logging
import math
from enum import Enum
from pathlib import Path
from typing import Any, Dict, Iterable, List, Sequence, Union

import numpy as np

from .crash import lpm_simulate
from .dynamics import brake_to_target, steering_trajectory
from .errors import ReportWriteError
from .ethics import DECISION_COLUMNS, decision_rows
from .scenario import ROW_COLUMNS, ScenarioReport, ScenarioRow
from .severity import SET_LABELS, FuzzyUniverse, set_memberships

logger = logging.getLogger(__name__)

EMIT_CHOICES = ('csv', 'plots', 'all')
SUMMARY_COLUMNS = ('occupants', 'policy', 'summed_cost', 'published_summed_cost')
BRAKING_COLUMNS = ('t', 'x', 'v')
TRAJECTORY_COLUMNS = ('t', 'x', 'y', 'theta', 'v')
CRASH_COLUMNS = ('t', 'deformation', 'acceleration')
MEMBERSHIP_POINTS = 201


def format_value(value: Any, precise: bool = False) -> str:
    """Fixed textual form of one CSV cell"""
    if value is None:
        return ''
    if isinstance(value, bool):
        return 'true' if value else 'false'
    if isinstance(value, Enum):
        return str(value.value)
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        value = float(value)
        if math.isnan(value):
            return 'nan'
        value += 0.0  # no '-0' cell
        return repr(value) if precise else '%.6g' % value
    return str(value)


def _render(columns: Sequence[str], records: Iterable[Dict[str, Any]], precise: bool = False) -> str:
    buffer = io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=list(columns), lineterminator='\n')
    writer.writeheader()
    for record in records:
        writer.writerow({name: format_value(record.get(name), precise) for name in columns})
    return buffer.getvalue()


def _array_records(columns: Sequence[str], data: np.ndarray) -> List[Dict[str, Any]]:
    return [dict(zip(columns, map(float, values))) for values in data]


def _render_series(columns: Sequence[str], data: np.ndarray) -> str:
    """Time series with every float at its shortest round-trip repr"""
    return _render(columns, _array_records(columns, data), precise=True)


def format_rows_csv(rows: Sequence[ScenarioRow]) -> str:
    """Header plus one line per row, in ROW_COLUMNS order"""
    return _render(ROW_COLUMNS, (row.as_record() for row in rows))


def _write(path: Path, text: str) -> Path:
    try:
        with path.open('w', newline='') as f:
            f.write(text)
    except OSError as e:
        raise ReportWriteError(path, e) from e
    logger.debug(f"Wrote {path}")
    return path


# =============================================================================
# Tables
# =============================================================================

def _summary_records(report: ScenarioReport) -> List[Dict[str, Any]]:
    records = []
    for occupants in sorted(report.summaries):
        for policy in report.policies:
            published = report.published_summaries.get(occupants, {}).get(policy.value)
            records.append({
                'occupants': occupants,
                'policy': policy,
                'summed_cost': report.summaries[occupants][policy.value],
                'published_summed_cost': published,
            })
    return records


def _decision_records(report: ScenarioReport) -> List[Dict[str, Any]]:
    columns = ('velocity', 'occupants', 'pedestrians')
    records = []
    for row in report.rows:
        for policy in report.policies:
            decision = row.decisions.get(policy)
            if decision is None:
                continue
            for record in decision_rows(decision, row.options):
                records.append(dict(zip(columns, row.key), **record))
    return records


def _emit_tables(report: ScenarioReport, out_dir: Path) -> List[Path]:
    written = [_write(out_dir / 'sweep.csv', format_rows_csv(report.rows))]
    for occupants in sorted({row.occupants for row in report.rows}):
        written.append(_write(out_dir / f'scenario_occupants_{occupants}.csv',
                              format_rows_csv(report.rows_for(occupants))))
    written.append(_write(out_dir / 'summary.csv',
                          _render(SUMMARY_COLUMNS, _summary_records(report))))
    written.append(_write(out_dir / 'decisions.csv',
                          _render(('velocity', 'occupants', 'pedestrians') + DECISION_COLUMNS,
                                  _decision_records(report))))
    return written


# =============================================================================
# Plot Series
# =============================================================================

def _cost_series(report: ScenarioReport, occupants: int) -> str:
    rows = report.rows_for(occupants)
    velocities = sorted({row.velocity for row in rows})
    columns = ['pedestrians']
    for v in velocities:
        columns += [f'cost_pedestrians_v{v:g}', f'cost_occupants_v{v:g}']

    by_count: Dict[int, Dict[str, Any]] = {}
    for row in rows:
        record = by_count.setdefault(row.pedestrians, {'pedestrians': row.pedestrians})
        record[f'cost_pedestrians_v{row.velocity:g}'] = row.cost_pedestrians
        record[f'cost_occupants_v{row.velocity:g}'] = row.cost_occupants
    return _render(columns, (by_count[n] for n in sorted(by_count)))


def membership_series(universe: FuzzyUniverse, points: int = MEMBERSHIP_POINTS) -> np.ndarray:
    """Columns value, E..A sampled evenly across the universe"""
    values = np.linspace(universe.lower_bound, universe.upper_bound, points)
    return np.array([np.concatenate(([v], set_memberships(universe, v))) for v in values])


def _emit_series(report: ScenarioReport, out_dir: Path) -> List[Path]:
    config = report.config
    dt = config.simulation.dt
    velocities = sorted({row.velocity for row in report.rows})
    occupant_counts = sorted({row.occupants for row in report.rows})
    written = []

    for occupants in occupant_counts:
        written.append(_write(out_dir / f'costs_vs_pedestrians_occupants_{occupants}.csv',
                              _cost_series(report, occupants)))

    for v in velocities:
        for occupants in occupant_counts:
            params = config.vehicle_params(occupants)
            braking = brake_to_target(params, v, config.pedestrian_distance, dt)
            written.append(_write(out_dir / f'braking_v{v:g}_occupants_{occupants}.csv',
                                  _render_series(BRAKING_COLUMNS, braking.as_array())))

            barrier = brake_to_target(params, v, config.barrier_distance, dt)
            if barrier.impact_velocity > 0:
                outcome = lpm_simulate(config.crash_model(occupants), barrier.impact_velocity,
                                       config.simulation.crash_dt)
                written.append(_write(out_dir / f'crash_v{v:g}_occupants_{occupants}.csv',
                                      _render_series(CRASH_COLUMNS, outcome.series)))

        # the heaviest vehicle brakes the least
        params = config.vehicle_params(occupant_counts[-1])
        braking = brake_to_target(params, v, config.pedestrian_distance, dt)
        for gamma in sorted({0.0, config.scenario.steering_gamma}):
            path = steering_trajectory(params, braking, gamma, config.pedestrian_distance, dt)
            written.append(_write(out_dir / f'trajectory_v{v:g}_gamma_{gamma:g}.csv',
                                  _render_series(TRAJECTORY_COLUMNS, path.as_array())))

    for universe in (config.deformation_universe, config.velocity_universe):
        columns = ('value',) + SET_LABELS
        written.append(_write(out_dir / f'membership_{universe.name}.csv',
                              _render(columns,
                                      _array_records(columns, membership_series(universe)))))
    return written


# =============================================================================
# Entry Point
# =============================================================================

def emit_report(
    report: ScenarioReport,
    out_dir: Union[str, Path],
    emit: str = 'all'
) -> List[Path]:
    """
    Write the report files.

    Args:
        report: Non-empty sweep report
        out_dir: Output directory, created if missing
        emit: 'csv', 'plots' (alias 'plot-series') or 'all'

    Returns:
        Paths written, in write order

    Raises:
        ValueError: Empty report or unknown ``emit``
        ReportWriteError: Any file could not be written
    """
    if emit == 'plot-series':
        emit = 'plots'
    if emit not in EMIT_CHOICES:
        raise ValueError(f"emit must be one of {EMIT_CHOICES}, got {emit!r}")
    if not report.rows:
        raise ValueError("report has no rows")

    out_dir = Path(out_dir)
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
    except OSError as e:
        raise ReportWriteError(out_dir, e) from e

    written = []
    if emit in ('csv', 'all'):
        written += _emit_tables(report, out_dir)
    if emit in ('plots', 'all'):
        written += _emit_series(report, out_dir)

    logger.info(f"Wrote {len(written)} file(s) to {out_dir}")
    return written
