"""
Scenario files, geometry seeding, run loop and output
"""

from .builder import BuiltScenario, Probe, build_scenario
from .config import ScenarioConfig, load_scenario, scenario_from_dict
from .geometry import Segment, seed_geometry
from .library import list_scenarios, load_builtin, scenario_path
from .output import Snapshot, read_snapshot, write_profile_csv, write_snapshot
from .runner import RunResult, ScenarioRunner, run_scenario

__all__ = [
    'BuiltScenario',
    'Probe',
    'RunResult',
    'ScenarioConfig',
    'ScenarioRunner',
    'Segment',
    'Snapshot',
    'build_scenario',
    'list_scenarios',
    'load_builtin',
    'load_scenario',
    'read_snapshot',
    'run_scenario',
    'scenario_from_dict',
    'scenario_path',
    'seed_geometry',
    'write_profile_csv',
    'write_snapshot',
]
