"""
Solver settings and built-in scenario files
"""

from .app_settings import (
    SCENARIO_DIR,
    NumericsSettings,
    RunSettings,
    SolverSettings,
    get_settings,
    reload_settings,
)

__all__ = [
    'SCENARIO_DIR',
    'NumericsSettings',
    'RunSettings',
    'SolverSettings',
    'get_settings',
    'reload_settings',
]
