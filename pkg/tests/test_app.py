"""
Unit tests for the command line entry point.

Tests subcommand dispatch, output and exit codes.
"""

import io
import os
import sys
import tempfile
import unittest
from contextlib import redirect_stdout
from pathlib import Path
from unittest.mock import MagicMock, patch

import yaml

# Add the parent directory to the path
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

from app import EXIT_ABORT, EXIT_CONFIG, EXIT_FAILED, EXIT_OK, build_parser, main
from config.app_settings import NumericsSettings, SolverSettings
from scenarios import RunResult
from solver.exceptions import NumericalAbortError
from tests import make_channel_scenario
from validation.harness import ValidationReport


def run_cli(*argv):
    """Run main and capture stdout"""
    buffer = io.StringIO()
    with redirect_stdout(buffer):
        code = main(list(argv))
    return code, buffer.getvalue()


class TestParser(unittest.TestCase):
    """Test argument parsing."""

    def test_run_options(self):
        args = build_parser().parse_args(['run', 'vipo', '--until', '0.5', '--workers', '2', '--dp', '5e-5'])
        self.assertEqual(args.command, 'run')
        self.assertEqual(args.config, 'vipo')
        self.assertEqual((args.until, args.workers, args.dp), (0.5, 2, 5e-5))

    def test_command_required(self):
        with self.assertRaises(SystemExit):
            build_parser().parse_args([])


class TestCommands(unittest.TestCase):
    """Test subcommands end to end."""

    def setUp(self):
        self.temp_dir = tempfile.TemporaryDirectory()
        self.directory = Path(self.temp_dir.name)
        self.scenario = self.directory / 'channel.yaml'
        self.scenario.write_text(yaml.safe_dump(make_channel_scenario()))

    def tearDown(self):
        self.temp_dir.cleanup()

    def test_list(self):
        """Test the built-in scenarios are listed with descriptions."""
        code, output = run_cli('list')
        self.assertEqual(code, EXIT_OK)
        for name in ('vipo', 'pivo', 't_channel', 'y_channel', 'sprinkler', 'pulsatile_pipe'):
            self.assertIn(name, output)

    def test_run_writes_snapshots(self):
        """Test a short run of a scenario file writes snapshots."""
        out_dir = self.directory / 'out'
        code, _ = run_cli('run', str(self.scenario), '--until', '0.005', '--out', str(out_dir))
        self.assertEqual(code, EXIT_OK)
        self.assertTrue(list((out_dir / 'snapshots').glob('test_channel_*.csv')))

    def test_run_unknown_scenario(self):
        code, _ = run_cli('run', 'no_such_scenario')
        self.assertEqual(code, EXIT_CONFIG)

    def test_run_invalid_scenario(self):
        """Test a schema violation maps to the configuration exit code."""
        self.scenario.write_text(yaml.safe_dump(make_channel_scenario(dim=5)))
        code, _ = run_cli('run', str(self.scenario))
        self.assertEqual(code, EXIT_CONFIG)

    @patch('app.run_scenario')
    def test_run_numerical_abort(self, mock_run):
        """Test a numerical abort maps to exit code 3."""
        mock_run.side_effect = NumericalAbortError("density 0.4 rho0", time=0.01)
        code, _ = run_cli('run', str(self.scenario), '--out', str(self.directory / 'out'))
        self.assertEqual(code, EXIT_ABORT)

    @patch('app.run_scenario')
    def test_run_forwards_options(self, mock_run):
        """Test the run options reach run_scenario unchanged."""
        mock_run.return_value = RunResult(time=0.005)
        out_dir = self.directory / 'out'
        code, _ = run_cli('run', str(self.scenario), '--until', '0.005', '--out', str(out_dir), '--workers', '3')
        self.assertEqual(code, EXIT_OK)
        kwargs = mock_run.call_args.kwargs
        self.assertEqual(kwargs['until'], 0.005)
        self.assertEqual(kwargs['out_dir'], out_dir)
        self.assertEqual(kwargs['workers'], 3)
        self.assertEqual(mock_run.call_args.args[0].config.name, 'test_channel')

    @patch('app.validate_case')
    def test_validate_passed(self, mock_validate):
        report = ValidationReport(case='vipo', kind='channel_poiseuille', time=1.0)
        report.add('rmsep', 0.01, 0.03, True)
        mock_validate.return_value = report

        code, output = run_cli('validate', 'vipo', '--until', '1.0')
        self.assertEqual(code, EXIT_OK)
        self.assertIn('PASSED', output)
        self.assertEqual(mock_validate.call_args.kwargs['until'], 1.0)

    @patch('app.validate_case')
    def test_validate_failed(self, mock_validate):
        """Test a failed check maps to exit code 1 and still prints the table."""
        report = ValidationReport(case='vipo', kind='channel_poiseuille', time=1.0)
        report.add('rmsep', 0.2, 0.03, False)
        mock_validate.return_value = report

        code, output = run_cli('validate', 'vipo')
        self.assertEqual(code, EXIT_FAILED)
        self.assertIn('FAIL', output)

    def test_validate_unknown_case(self):
        code, _ = run_cli('validate', 'no_such_case')
        self.assertEqual(code, EXIT_CONFIG)

    @patch('app.get_settings')
    def test_invalid_settings(self, mock_settings):
        """Test invalid settings stop before any command runs."""
        mock_settings.return_value = SolverSettings(numerics=NumericsSettings(wall_layers=2))
        mock_list = MagicMock(return_value=EXIT_OK)
        with patch.dict('app.COMMANDS', {'list': mock_list}):
            code, _ = run_cli('list')
        self.assertEqual(code, EXIT_CONFIG)
        mock_list.assert_not_called()


if __name__ == '__main__':
    unittest.main()
