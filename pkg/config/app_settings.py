"""
Centralized Solver Settings and Configuration Management
"""

import os
import logging
import yaml
from typing import Dict, Any, Optional
from dataclasses import dataclass, field
from pathlib import Path

logger = logging.getLogger(__name__)

SETTINGS_FILE = Path(__file__).parent / 'solver.yaml'
SCENARIO_DIR = Path(__file__).parent / 'scenarios'


def load_solver_config(config_path: Path = SETTINGS_FILE) -> Dict[str, Any]:
    """Load the defaults block from solver.yaml"""
    try:
        with open(config_path, 'r') as f:
            config = yaml.safe_load(f) or {}
            config = expand_env_vars(config)
            logger.debug(f"✅ Loaded solver configuration from {config_path}")
            return config.get('environment', {})
    except Exception as e:
        logger.warning(f"⚠️ Failed to load solver configuration: {str(e)}")
        return {}


def expand_env_vars(obj):
    """Recursively expand ${VAR} references in config values"""
    if isinstance(obj, dict):
        return {k: expand_env_vars(v) for k, v in obj.items()}
    elif isinstance(obj, list):
        return [expand_env_vars(item) for item in obj]
    elif isinstance(obj, str) and obj.startswith('${') and obj.endswith('}'):
        env_var = obj[2:-1]
        return os.environ.get(env_var, '')
    else:
        return obj


_solver_config = load_solver_config()


def get_config_value(env_key: str, config_path: str, default: str = '') -> str:
    """Get a value from the environment, then solver.yaml, then the default"""
    env_value = os.environ.get(env_key)
    if env_value:
        return str(env_value)

    try:
        value = _solver_config
        for key in config_path.split('.'):
            value = value[key]
        if value is None or value == '':
            return default
        return str(value)
    except (KeyError, TypeError):
        return default


@dataclass
class NumericsSettings:
    """Discretization constants shared by every scenario"""

    smoothing_ratio: float = field(default_factory=lambda: float(get_config_value('SPH_SMOOTHING_RATIO', 'numerics.smoothing_ratio', '1.3')))
    wall_layers: int = field(default_factory=lambda: int(get_config_value('SPH_WALL_LAYERS', 'numerics.wall_layers', '4')))
    advection_cfl: float = field(default_factory=lambda: float(get_config_value('SPH_ADVECTION_CFL', 'numerics.advection_cfl', '0.25')))
    acoustic_cfl: float = field(default_factory=lambda: float(get_config_value('SPH_ACOUSTIC_CFL', 'numerics.acoustic_cfl', '0.6')))
    tvf_lambda: float = field(default_factory=lambda: float(get_config_value('SPH_TVF_LAMBDA', 'numerics.tvf_lambda', '7.0')))
    density_lower: float = field(default_factory=lambda: float(get_config_value('SPH_DENSITY_LOWER', 'numerics.density_lower', '0.5')))
    density_upper: float = field(default_factory=lambda: float(get_config_value('SPH_DENSITY_UPPER', 'numerics.density_upper', '2.0')))
    near_boundary_layers: float = field(default_factory=lambda: float(get_config_value('SPH_NEAR_BOUNDARY_LAYERS', 'numerics.near_boundary_layers', '3')))


@dataclass
class RunSettings:
    """Execution and output settings"""

    workers: int = field(default_factory=lambda: int(get_config_value('SPH_WORKERS', 'run.workers', '1')))
    output_dir: str = field(default_factory=lambda: get_config_value('SPH_OUTPUT_DIR', 'run.output_dir', 'output'))
    snapshot_precision: int = field(default_factory=lambda: int(get_config_value('SPH_SNAPSHOT_PRECISION', 'run.snapshot_precision', '17')))
    max_substeps: int = field(default_factory=lambda: int(get_config_value('SPH_MAX_SUBSTEPS', 'run.max_substeps', '64')))


@dataclass
class SolverSettings:
    """Main settings container"""

    numerics: NumericsSettings = field(default_factory=NumericsSettings)
    run: RunSettings = field(default_factory=RunSettings)

    log_level: str = field(default_factory=lambda: get_config_value('SPH_LOG_LEVEL', 'app.log_level', 'INFO'))
    scenario_dir: str = field(default_factory=lambda: get_config_value('SPH_SCENARIO_DIR', 'app.scenario_dir', str(SCENARIO_DIR)))

    def validate_configuration(self) -> Dict[str, Any]:
        """Validate settings and return status"""
        validation = {
            'valid': True,
            'errors': [],
            'warnings': [],
        }

        if self.numerics.smoothing_ratio <= 0:
            validation['errors'].append('smoothing_ratio must be positive')
        # 2h support at h = 1.3dp spans 2.6 layers
        if self.numerics.wall_layers < 3:
            validation['errors'].append('wall_layers must be at least 3 to cover the kernel support')
        if not 0 < self.numerics.acoustic_cfl <= 1 or not 0 < self.numerics.advection_cfl <= 1:
            validation['errors'].append('CFL factors must lie in (0, 1]')
        if not 0 < self.numerics.density_lower < 1 < self.numerics.density_upper:
            validation['errors'].append('density bounds must bracket 1')
        if not 5.0 <= self.numerics.tvf_lambda <= 10.0:
            validation['warnings'].append(f'tvf_lambda {self.numerics.tvf_lambda} outside the usual 5-10 range')
        if self.run.workers < 1:
            validation['errors'].append('workers must be at least 1')
        if self.run.workers > 1:
            validation['warnings'].append('runs with more than one worker are not bitwise reproducible')
        if not Path(self.scenario_dir).is_dir():
            validation['warnings'].append(f'scenario directory {self.scenario_dir} not found')

        validation['valid'] = not validation['errors']
        return validation

    def get_runtime_info(self) -> Dict[str, Any]:
        """Settings summary safe for logging"""
        return {
            'log_level': self.log_level,
            'workers': self.run.workers,
            'output_dir': self.run.output_dir,
            'smoothing_ratio': self.numerics.smoothing_ratio,
            'wall_layers': self.numerics.wall_layers,
            'tvf_lambda': self.numerics.tvf_lambda,
        }


_settings: Optional[SolverSettings] = None


def get_settings() -> SolverSettings:
    """Get global solver settings instance"""
    global _settings
    if _settings is None:
        _settings = SolverSettings()
        logger.debug("⚙️ Solver settings initialized")
    return _settings


def reload_settings() -> SolverSettings:
    """Reload settings from the environment and solver.yaml"""
    global _settings, _solver_config
    _solver_config = load_solver_config()
    _settings = SolverSettings()
    logger.info("🔄 Solver settings reloaded")
    return _settings


def get_numerics_settings() -> NumericsSettings:
    return get_settings().numerics
