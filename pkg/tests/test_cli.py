#!/usr/bin/env python3
"""
Tests for the escs command-line interface and its exit codes.
"""

import csv
import io

import pytest

from escs import __version__
from escs.cli import EXIT_IO, EXIT_OK, EXIT_VALIDATION, main


@pytest.fixture
def small_config(write_config):
    return write_config("sweep.initial_velocities = 12, 20\n"
                        "sweep.occupant_counts = 0, 2\n"
                        "sweep.pedestrian_counts = 0, 2\n")


class TestRun:
    """Tests for ``escs run``"""

    def test_writes_tables(self, small_config, tmp_path, capsys):
        out = tmp_path / 'results'
        code = main(['run', '--config', str(small_config), '--out', str(out), '--emit', 'csv'])
        assert code == EXIT_OK
        assert (out / 'sweep.csv').exists()
        assert (out / 'summary.csv').exists()
        assert not (out / 'membership_peak_deformation.csv').exists()
        stdout = capsys.readouterr().out
        assert 'utilitarian' in stdout
        assert 'Results saved to' in stdout

    def test_policy_override(self, small_config, tmp_path):
        out = tmp_path / 'results'
        main(['run', '--config', str(small_config), '--out', str(out), '--emit', 'csv',
              '--policy', 'utilitarian'])
        with (out / 'summary.csv').open(newline='') as f:
            assert {row['policy'] for row in csv.DictReader(f)} == {'utilitarian'}

    def test_invalid_config(self, write_config, tmp_path, capsys):
        path = write_config("vehicle.occupant_mass = -1\n")
        code = main(['run', '--config', str(path), '--out', str(tmp_path / 'out')])
        assert code == EXIT_VALIDATION
        assert "vehicle.occupant_mass" in capsys.readouterr().err
        assert not (tmp_path / 'out').exists()

    def test_missing_config(self, tmp_path):
        code = main(['run', '--config', str(tmp_path / 'missing.conf')])
        assert code == EXIT_IO

    def test_unwritable_output(self, small_config, tmp_path, capsys):
        blocker = tmp_path / 'taken'
        blocker.write_text("file")
        code = main(['run', '--config', str(small_config), '--out', str(blocker), '--emit', 'csv'])
        assert code == EXIT_IO
        assert "taken" in capsys.readouterr().err


class TestCase:
    """Tests for ``escs case``"""

    def test_prints_single_row(self, capsys):
        code = main(['case', '--v0', '20', '--occupants', '2', '--pedestrians', '2'])
        assert code == EXIT_OK
        rows = list(csv.DictReader(io.StringIO(capsys.readouterr().out)))
        assert len(rows) == 1
        assert float(rows[0]['cost_pedestrians']) == pytest.approx(476.4, abs=1.0)
        assert rows[0]['utilitarian_choice'] == 'pedestrians'
        assert rows[0]['annotation'] == 'erratum'

    def test_speed_above_limit(self, capsys):
        code = main(['case', '--v0', '60', '--occupants', '0', '--pedestrians', '1'])
        assert code == EXIT_VALIDATION
        assert "v0" in capsys.readouterr().err


class TestFit:
    """Tests for ``escs fit``"""

    def test_fit(self, tmp_path, capsys):
        path = tmp_path / 'curve.csv'
        path.write_text("deformation_m,force_N\n0.0,1410\n0.2,180270\n0.4,359130\n")
        assert main(['fit', '--samples', str(path)]) == EXIT_OK
        stdout = capsys.readouterr().out
        assert 'stiffness k:      894300 N/m' in stdout
        assert 'failure point fp: 1410 N' in stdout

    def test_singular(self, tmp_path):
        path = tmp_path / 'curve.csv'
        path.write_text("deformation_m,force_N\n0.3,1\n0.3,2\n")
        assert main(['fit', '--samples', str(path)]) == EXIT_VALIDATION


class TestCrashCheck:
    """Tests for ``escs crash-check``"""

    def test_reference_table(self, capsys):
        assert main(['crash-check']) == EXIT_OK
        stdout = capsys.readouterr().out
        assert 'peak_deformation' in stdout
        assert 'collision_energy_with_failure_point' in stdout
        assert '0.0387' in stdout

    def test_invalid_mass(self):
        assert main(['crash-check', '--mass', '0']) == EXIT_VALIDATION


class TestParser:
    """Tests for argument handling"""

    def test_command_required(self):
        with pytest.raises(SystemExit) as info:
            main([])
        assert info.value.code == EXIT_VALIDATION

    def test_unknown_policy_is_validation_error(self, capsys):
        with pytest.raises(SystemExit) as info:
            main(['run', '--policy', 'greedy'])
        assert info.value.code == EXIT_VALIDATION
        assert "greedy" in capsys.readouterr().err

    def test_non_numeric_velocity_is_validation_error(self, capsys):
        with pytest.raises(SystemExit) as info:
            main(['case', '--v0', 'fast', '--occupants', '1', '--pedestrians', '1'])
        assert info.value.code == EXIT_VALIDATION
        assert "--v0" in capsys.readouterr().err

    def test_version(self, capsys):
        with pytest.raises(SystemExit):
            main(['--version'])
        assert __version__ in capsys.readouterr().out
