"""
Reference solutions and error metrics

The validation runs themselves live in ``validation.harness``.
"""

from .analytic import (
    WomersleyParams,
    bessel_j0,
    channel_poiseuille,
    hagen_poiseuille_flow_rate,
    pipe_poiseuille,
    quasi_steady_velocity,
    windkessel_reference,
    womersley_velocity,
)
from .metrics import ProfileSamples, extract_profile, filter_reference_samples, rmsep

__all__ = [
    'ProfileSamples',
    'WomersleyParams',
    'bessel_j0',
    'channel_poiseuille',
    'extract_profile',
    'filter_reference_samples',
    'hagen_poiseuille_flow_rate',
    'pipe_poiseuille',
    'quasi_steady_velocity',
    'rmsep',
    'windkessel_reference',
    'womersley_velocity',
]
