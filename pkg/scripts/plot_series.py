#!/usr/bin/env python3
"""
Plot ESCS Series

Renders the plot-series CSV files written by ``escs run --emit plots`` to
PNG images next to them.

Usage:
    escs run --out results --emit plots
    python scripts/plot_series.py results
"""

import argparse
from pathlib import Path

import matplotlib
matplotlib.use('Agg')
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402


def load_series(path):
    """Return (column names, 2-D array) for a numeric CSV file"""
    data = np.genfromtxt(path, delimiter=',', names=True)
    return list(data.dtype.names), np.atleast_1d(data)


def plot_costs(path):
    names, data = load_series(path)
    fig, ax = plt.subplots(figsize=(7, 4.5))
    for name in names[1:]:
        style = '-o' if name.startswith('cost_pedestrians') else '--s'
        ax.plot(data['pedestrians'], data[name], style, label=name.replace('_', ' '))
    ax.set_yscale('symlog', linthresh=1.0)
    ax.set_xlabel("Pedestrians")
    ax.set_ylabel("Common utility cost")
    ax.grid(True, alpha=0.3)
    ax.legend(fontsize=8)
    return fig


def plot_braking(path):
    _, data = load_series(path)
    fig, (ax_x, ax_v) = plt.subplots(2, 1, sharex=True, figsize=(7, 5))
    ax_x.plot(data['t'], data['x'])
    ax_x.set_ylabel("Displacement (m)")
    ax_v.plot(data['t'], data['v'])
    ax_v.set_ylabel("Velocity (m/s)")
    ax_v.set_xlabel("Time (s)")
    for ax in (ax_x, ax_v):
        ax.grid(True, alpha=0.3)
    return fig


def plot_trajectory(path):
    _, data = load_series(path)
    fig, ax = plt.subplots(figsize=(7, 4))
    ax.plot(data['x'], data['y'])
    ax.axhline(3.5, color='gray', linestyle=':', label="adjacent lane")
    ax.set_xlabel("x (m)")
    ax.set_ylabel("y (m)")
    ax.set_aspect('equal', adjustable='datalim')
    ax.grid(True, alpha=0.3)
    ax.legend()
    return fig


def plot_crash(path):
    _, data = load_series(path)
    fig, (ax_d, ax_a) = plt.subplots(2, 1, sharex=True, figsize=(7, 5))
    ax_d.plot(data['t'] * 1e3, data['deformation'])
    ax_d.set_ylabel("Deformation (m)")
    ax_a.plot(data['t'] * 1e3, data['acceleration'] / 9.80665)
    ax_a.set_ylabel("Acceleration (g)")
    ax_a.set_xlabel("Time (ms)")
    for ax in (ax_d, ax_a):
        ax.grid(True, alpha=0.3)
    return fig


def plot_membership(path):
    names, data = load_series(path)
    fig, ax = plt.subplots(figsize=(7, 3.5))
    for name in names[1:]:
        ax.plot(data['value'], data[name], label=name)
    ax.set_xlabel(path.stem.replace('membership_', '').replace('_', ' '))
    ax.set_ylabel("Degree of membership")
    ax.set_ylim(-0.05, 1.05)
    ax.legend(ncol=5, fontsize=8)
    return fig


PLOTTERS = {
    'costs_vs_pedestrians_': plot_costs,
    'braking_': plot_braking,
    'trajectory_': plot_trajectory,
    'crash_': plot_crash,
    'membership_': plot_membership,
}


def main():
    parser = argparse.ArgumentParser(description="Render ESCS plot-series CSV files to PNG")
    parser.add_argument('directory', help="Directory written by 'escs run --emit plots'")
    parser.add_argument('--dpi', type=int, default=120, help="Image resolution (default: 120)")
    args = parser.parse_args()

    directory = Path(args.directory)
    count = 0
    for path in sorted(directory.glob('*.csv')):
        plotter = next((fn for prefix, fn in PLOTTERS.items() if path.name.startswith(prefix)), None)
        if plotter is None:
            continue
        out_path = path.with_suffix('.png')
        fig = plotter(path)
        fig.suptitle(path.stem)
        fig.tight_layout()
        fig.savefig(out_path, dpi=args.dpi)
        plt.close(fig)
        count += 1
        print(f"  {out_path}")

    print(f"Rendered {count} plot(s) in {directory}")


if __name__ == '__main__':
    main()
