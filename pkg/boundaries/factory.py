"""
Boundary Condition Factory
"""

import logging
from typing import Any, Dict, Type

from solver.exceptions import ConfigurationError

from .base import BoundaryCondition
from .pressure import PressureBC
from .velocity import VelocityBC

logger = logging.getLogger(__name__)


class BoundaryConditionFactory:
    """Factory class for creating buffer boundary conditions"""

    _conditions: Dict[str, Type[BoundaryCondition]] = {
        'pressure': PressureBC,
        'velocity': VelocityBC,
    }

    @classmethod
    def create_condition(cls, config: Dict[str, Any]) -> BoundaryCondition:
        """
        Create a boundary condition instance

        Args:
            config: Buffer ``bc`` mapping with a ``type`` key

        Returns:
            BoundaryCondition instance
        """
        bc_type = config.get('type')
        if bc_type not in cls._conditions:
            logger.error(f"❌ Unknown boundary condition type: {bc_type}")
            logger.info(f"📋 Available boundary conditions: {list(cls._conditions.keys())}")
            raise ConfigurationError(f"Unknown boundary condition type '{bc_type}'")

        try:
            condition = cls._conditions[bc_type](config)
        except ConfigurationError:
            raise
        except Exception as e:
            logger.error(f"❌ Failed to create {bc_type} boundary condition: {str(e)}")
            raise ConfigurationError(f"Invalid {bc_type} boundary condition: {e}") from e
        logger.debug(f"✅ {condition.describe()} boundary condition created")
        return condition

    @classmethod
    def get_available_conditions(cls) -> Dict[str, Type[BoundaryCondition]]:
        return cls._conditions.copy()

    @classmethod
    def register_condition(cls, bc_type: str, condition_class: Type[BoundaryCondition]) -> None:
        """
        Register a new boundary condition type

        Args:
            bc_type: Name used in scenario files
            condition_class: Class to register
        """
        if not issubclass(condition_class, BoundaryCondition):
            raise ValueError("Boundary condition class must inherit from BoundaryCondition")
        cls._conditions[bc_type] = condition_class
        logger.info(f"📝 Registered new boundary condition: {bc_type}")
