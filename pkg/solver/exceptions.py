"""
Solver exception hierarchy
"""


class SolverError(Exception):
    """Base class for all solver failures"""


class ConfigurationError(SolverError):
    """Scenario or settings are invalid (CLI exit code 2)"""


class NumericalAbortError(SolverError):
    """The simulation state left its admissible range (CLI exit code 3)"""

    def __init__(self, message: str, time: float = 0.0):
        super().__init__(message)
        self.time = time


class ParticleLifecycleError(SolverError):
    """Illegal structural operation on a particle (double delete, wall relabel, ...)"""


class KernelDomainError(ValueError):
    """Kernel evaluated outside its domain"""


class OracleDomainError(ValueError):
    """Reference solution evaluated outside its domain"""
