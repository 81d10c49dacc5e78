"""
Buffer boundary conditions: pressure, velocity and their time drivers
"""

from .base import BoundaryCondition
from .drivers import AORTIC_INFLOW, ConstantDriver, CosineDriver, FourierCoefficients, FourierDriver, fourier_inflow, make_driver
from .factory import BoundaryConditionFactory
from .pressure import PressureBC, apply_pressure_bc
from .profiles import ParabolicProfile, PlugProfile, PoiseuilleProfile, VelocityProfile, make_profile, poiseuille_inlet_profile
from .velocity import VelocityBC, apply_velocity_bc
from .windkessel import AORTIC_OUTLETS, WindkesselParameters, WindkesselState, measure_flow_rate, windkessel_advance

__all__ = [
    'AORTIC_INFLOW',
    'AORTIC_OUTLETS',
    'BoundaryCondition',
    'BoundaryConditionFactory',
    'ConstantDriver',
    'CosineDriver',
    'FourierCoefficients',
    'FourierDriver',
    'ParabolicProfile',
    'PlugProfile',
    'PoiseuilleProfile',
    'PressureBC',
    'VelocityBC',
    'VelocityProfile',
    'WindkesselParameters',
    'WindkesselState',
    'apply_pressure_bc',
    'apply_velocity_bc',
    'fourier_inflow',
    'make_driver',
    'make_profile',
    'measure_flow_rate',
    'poiseuille_inlet_profile',
    'windkessel_advance',
]
