"""
Unit tests for configuration management.

Tests the NumericsSettings, RunSettings and SolverSettings classes to
ensure defaults, environment overrides and validation behave.
"""

import os
import sys
import unittest
from unittest.mock import patch

# Add the parent directory to the path for imports
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

from config import app_settings
from config.app_settings import (
    SCENARIO_DIR,
    NumericsSettings,
    RunSettings,
    SolverSettings,
    expand_env_vars,
    get_config_value,
    get_settings,
    reload_settings,
)


class TestNumericsSettings(unittest.TestCase):
    """Test NumericsSettings defaults and overrides."""

    def test_defaults(self):
        """Test values from solver.yaml."""
        numerics = NumericsSettings()
        self.assertEqual(numerics.smoothing_ratio, 1.3)
        self.assertEqual(numerics.wall_layers, 4)
        self.assertEqual(numerics.advection_cfl, 0.25)
        self.assertEqual(numerics.acoustic_cfl, 0.6)
        self.assertEqual(numerics.tvf_lambda, 7.0)
        self.assertEqual((numerics.density_lower, numerics.density_upper), (0.5, 2.0))

    @patch.dict(os.environ, {'SPH_TVF_LAMBDA': '5.5', 'SPH_WALL_LAYERS': '5'})
    def test_environment_override(self):
        """Test SPH_* variables take precedence over solver.yaml."""
        numerics = NumericsSettings()
        self.assertEqual(numerics.tvf_lambda, 5.5)
        self.assertEqual(numerics.wall_layers, 5)

    def test_explicit_values(self):
        numerics = NumericsSettings(smoothing_ratio=1.5, wall_layers=3)
        self.assertEqual(numerics.smoothing_ratio, 1.5)
        self.assertEqual(numerics.wall_layers, 3)


class TestRunSettings(unittest.TestCase):
    """Test RunSettings."""

    def test_defaults(self):
        run = RunSettings()
        self.assertEqual(run.workers, 1)
        self.assertEqual(run.output_dir, 'output')
        self.assertEqual(run.snapshot_precision, 17)
        self.assertEqual(run.max_substeps, 64)

    @patch.dict(os.environ, {'SPH_OUTPUT_DIR': '/tmp/sph-runs', 'SPH_WORKERS': '4'})
    def test_output_dir_from_environment(self):
        run = RunSettings()
        self.assertEqual(run.output_dir, '/tmp/sph-runs')
        self.assertEqual(run.workers, 4)


class TestSolverSettings(unittest.TestCase):
    """Test the settings container and its validation."""

    def test_valid_defaults(self):
        settings = SolverSettings()
        result = settings.validate_configuration()
        self.assertTrue(result['valid'])
        self.assertEqual(result['errors'], [])
        self.assertEqual(settings.scenario_dir, str(SCENARIO_DIR))
        self.assertEqual(settings.log_level, 'INFO')

    def test_invalid_numerics(self):
        """Test each invalid numeric setting is reported."""
        settings = SolverSettings(
            numerics=NumericsSettings(wall_layers=2, acoustic_cfl=1.5, density_lower=1.2),
            run=RunSettings(workers=0),
        )
        result = settings.validate_configuration()
        self.assertFalse(result['valid'])
        self.assertEqual(len(result['errors']), 4)
        self.assertTrue(any('wall_layers' in e for e in result['errors']))
        self.assertTrue(any('workers' in e for e in result['errors']))

    def test_warnings(self):
        """Test unusual but usable settings only warn."""
        settings = SolverSettings(
            numerics=NumericsSettings(tvf_lambda=12.0),
            run=RunSettings(workers=2),
            scenario_dir='/nonexistent/scenarios',
        )
        result = settings.validate_configuration()
        self.assertTrue(result['valid'])
        self.assertEqual(len(result['warnings']), 3)

    def test_runtime_info(self):
        info = SolverSettings().get_runtime_info()
        self.assertEqual(info['wall_layers'], 4)
        self.assertIn('tvf_lambda', info)


class TestSettingsLoading(unittest.TestCase):
    """Test global settings and config value resolution."""

    def tearDown(self):
        os.environ.pop('SPH_WORKERS', None)
        reload_settings()

    def test_get_settings_singleton(self):
        self.assertIs(get_settings(), get_settings())

    def test_reload_picks_up_environment(self):
        """Test reload_settings re-reads the environment."""
        os.environ['SPH_WORKERS'] = '3'
        settings = reload_settings()
        self.assertEqual(settings.run.workers, 3)
        self.assertIs(get_settings(), settings)

    def test_config_value_fallbacks(self):
        """Test environment, then solver.yaml, then the default."""
        self.assertEqual(get_config_value('SPH_UNSET_KEY', 'numerics.smoothing_ratio', '9'), '1.3')
        self.assertEqual(get_config_value('SPH_UNSET_KEY', 'numerics.missing', '9'), '9')
        self.assertEqual(get_config_value('SPH_UNSET_KEY', 'app.scenario_dir', 'fallback'), 'fallback')
        with patch.dict(os.environ, {'SPH_UNSET_KEY': '2'}):
            self.assertEqual(get_config_value('SPH_UNSET_KEY', 'numerics.smoothing_ratio', '9'), '2')

    def test_missing_settings_file(self):
        """Test a missing solver.yaml falls back to built-in defaults."""
        self.assertEqual(app_settings.load_solver_config(app_settings.SETTINGS_FILE.parent / 'absent.yaml'), {})

    def test_expand_env_vars(self):
        with patch.dict(os.environ, {'SPH_TEST_VALUE': 'abc'}):
            expanded = expand_env_vars({'a': ['${SPH_TEST_VALUE}', 'plain'], 'b': '${SPH_NOT_SET}', 'c': 3})
        self.assertEqual(expanded, {'a': ['abc', 'plain'], 'b': '', 'c': 3})


if __name__ == '__main__':
    unittest.main()
