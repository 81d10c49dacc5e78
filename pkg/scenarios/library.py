"""
Built-in scenario library under config/scenarios
"""

import logging
from pathlib import Path
from typing import Dict, Optional

import yaml

from config.app_settings import get_settings
from solver.exceptions import ConfigurationError

from .config import ScenarioConfig, load_scenario

logger = logging.getLogger(__name__)


def scenario_dir() -> Path:
    return Path(get_settings().scenario_dir)


def list_scenarios(directory: Optional[Path] = None) -> Dict[str, str]:
    """Scenario name -> one-line description, sorted by name"""
    directory = directory or scenario_dir()
    scenarios = {}
    for path in sorted(Path(directory).glob('*.yaml')):
        try:
            with open(path, 'r') as f:
                data = yaml.safe_load(f) or {}
        except (OSError, yaml.YAMLError) as e:
            logger.warning(f"⚠️ Skipping unreadable scenario {path.name}: {str(e)}")
            continue
        description = str(data.get('description') or '').strip()
        scenarios[path.stem] = description.splitlines()[0] if description else ''
    return scenarios


def scenario_path(name: str, directory: Optional[Path] = None) -> Path:
    """Resolve a built-in name or an existing file path"""
    candidate = Path(name)
    if candidate.suffix in ('.yaml', '.yml') and candidate.is_file():
        return candidate
    path = Path(directory or scenario_dir()) / f"{name}.yaml"
    if not path.is_file():
        available = ', '.join(list_scenarios(directory)) or 'none'
        raise ConfigurationError(f"Unknown scenario '{name}' (available: {available})")
    return path


def load_builtin(name: str, dp: Optional[float] = None, directory: Optional[Path] = None) -> ScenarioConfig:
    return load_scenario(scenario_path(name, directory), dp=dp)
