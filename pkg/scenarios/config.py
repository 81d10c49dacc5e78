"""
Scenario file schema and loading
"""

import logging
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

import yaml

from config.app_settings import expand_env_vars
from solver.exceptions import ConfigurationError
from solver.particles import FluidProperties

logger = logging.getLogger(__name__)

BUFFER_KINDS = ('inflow', 'outflow', 'bidirectional')


@dataclass
class FluidSpec:
    """
    Fluid inputs. ``c0`` defaults to 10 u_max; ``eta`` may instead come from
    a Reynolds number over a characteristic length.
    """

    rho0: float
    u_max: Optional[float] = None
    c0: Optional[float] = None
    eta: Optional[float] = None
    Re: Optional[float] = None
    length: Optional[float] = None

    def properties(self) -> FluidProperties:
        if self.c0 is None and self.u_max is None:
            raise ConfigurationError("fluid needs u_max or c0")
        c0 = self.c0 if self.c0 is not None else 10.0 * self.u_max
        eta = self.eta
        if eta is None:
            if self.Re is None or self.length is None or self.u_max is None:
                raise ConfigurationError("fluid needs eta, or Re with length and u_max")
            eta = self.rho0 * self.u_max * self.length / self.Re
        try:
            return FluidProperties(rho0=self.rho0, c0=c0, eta=eta)
        except ValueError as e:
            raise ConfigurationError(f"Invalid fluid properties: {e}") from e


@dataclass
class SegmentSpec:
    """
    Straight channel (2-D) or pipe (3-D) piece in design coordinates.

    ``open_start``/``open_end`` are a port name, True (open, no port) or
    False (closed by walls).
    """

    name: str
    start: List[float]
    length: float
    width: float
    direction_deg: float = 0.0
    axis: Optional[List[float]] = None
    open_start: Union[str, bool] = False
    open_end: Union[str, bool] = False
    walls: bool = True


@dataclass
class GeometrySpec:
    segments: List[SegmentSpec]
    placement_deg: float = 0.0
    placement_axis: Optional[List[float]] = None
    domain_lower: Optional[List[float]] = None
    domain_upper: Optional[List[float]] = None
    delete_outside_domain: bool = False


@dataclass
class RotationSpec:
    omega: float
    theta0: float = 0.0
    center: List[float] = field(default_factory=lambda: [0.0, 0.0])


@dataclass
class BufferSpec:
    """A buffer placed at a geometry port or by an explicit frame"""

    id: int
    kind: str
    bc: Optional[Dict[str, Any]] = None
    port: Optional[str] = None
    layers: Optional[float] = None
    a: Optional[float] = None
    b: Optional[float] = None
    c: Optional[float] = None
    origin: Optional[List[float]] = None
    angle_deg: Optional[float] = None
    axis: Optional[List[float]] = None
    rotate: Optional[RotationSpec] = None


@dataclass
class ProbeSpec:
    """Cross-section at distance ``s`` along a segment"""

    name: str
    segment: str
    s: float
    radial: bool = False
    n_bins: Optional[int] = None


@dataclass
class OutputSpec:
    snapshot_every: Optional[float] = None
    probe_every: Optional[float] = None
    probe_times: List[float] = field(default_factory=list)
    probes: List[ProbeSpec] = field(default_factory=list)


@dataclass
class ScenarioConfig:
    name: str
    dim: int
    dp: float
    fluid: FluidSpec
    geometry: GeometrySpec
    buffers: List[BufferSpec]
    end_time: float
    output: OutputSpec = field(default_factory=OutputSpec)
    description: str = ''
    density_reinit: bool = True
    tvf_lambda: Optional[float] = None
    max_substeps: Optional[int] = None
    validation: Dict[str, Any] = field(default_factory=dict)
    source: Optional[str] = None

    def validate(self) -> None:
        """Raise ConfigurationError on the first schema violation"""
        errors = []
        if self.dim not in (2, 3):
            errors.append(f"dim must be 2 or 3, got {self.dim}")
        if not self.dp > 0:
            errors.append("dp must be positive")
        if not self.end_time > 0:
            errors.append("end_time must be positive")
        if not self.geometry.segments:
            errors.append("geometry needs at least one segment")
        ids = [b.id for b in self.buffers]
        if len(set(ids)) != len(ids):
            errors.append(f"buffer ids must be unique, got {ids}")
        for buffer in self.buffers:
            if buffer.id < 1:
                errors.append(f"buffer id {buffer.id} must be a positive integer")
            if buffer.kind not in BUFFER_KINDS:
                errors.append(f"buffer {buffer.id}: unknown kind '{buffer.kind}'")
            if buffer.port is None and buffer.origin is None:
                errors.append(f"buffer {buffer.id}: needs a port or an origin")
            if buffer.rotate is not None and (buffer.kind != 'inflow' or self.dim != 2):
                errors.append(f"buffer {buffer.id}: only 2-D inflow buffers can rotate")
        if errors:
            for error in errors:
                logger.error(f"❌ {self.name}: {error}")
            raise ConfigurationError(f"Invalid scenario '{self.name}': " + '; '.join(errors))

    def scaled(self, dp: float) -> "ScenarioConfig":
        """Copy with a new particle spacing; layer-based buffer depths follow it"""
        return replace(self, dp=dp)


def _float_list(value: Any, key: str) -> Optional[List[float]]:
    if value is None:
        return None
    try:
        return [float(v) for v in value]
    except (TypeError, ValueError) as e:
        raise ConfigurationError(f"{key} must be a list of numbers") from e


def scenario_from_dict(data: Dict[str, Any], source: Optional[str] = None) -> ScenarioConfig:
    """Build and validate a ScenarioConfig from a parsed mapping"""
    data = expand_env_vars(data)
    try:
        geometry = data['geometry']
        placement = geometry.get('placement', {}) or {}
        domain = geometry.get('domain', {}) or {}
        output = data.get('output', {}) or {}
        config = ScenarioConfig(
            name=str(data['name']),
            description=str(data.get('description', '')),
            dim=int(data['dim']),
            dp=float(data['dp']),
            fluid=FluidSpec(**{k: float(v) for k, v in data['fluid'].items()}),
            geometry=GeometrySpec(
                segments=[
                    SegmentSpec(
                        name=str(s['name']),
                        start=_float_list(s['start'], 'start'),
                        length=float(s['length']),
                        width=float(s['width']),
                        direction_deg=float(s.get('direction_deg', 0.0)),
                        axis=_float_list(s.get('axis'), 'axis'),
                        open_start=s.get('open_start', False),
                        open_end=s.get('open_end', False),
                        walls=bool(s.get('walls', True)),
                    )
                    for s in geometry['segments']
                ],
                placement_deg=float(placement.get('angle_deg', 0.0)),
                placement_axis=_float_list(placement.get('axis'), 'placement.axis'),
                domain_lower=_float_list(domain.get('lower'), 'domain.lower'),
                domain_upper=_float_list(domain.get('upper'), 'domain.upper'),
                delete_outside_domain=bool(geometry.get('delete_outside_domain', False)),
            ),
            buffers=[
                BufferSpec(
                    id=int(b['id']),
                    kind=str(b['kind']),
                    bc=b.get('bc'),
                    port=b.get('port'),
                    layers=float(b['layers']) if 'layers' in b else None,
                    a=float(b['a']) if 'a' in b else None,
                    b=float(b['b']) if 'b' in b else None,
                    c=float(b['c']) if 'c' in b else None,
                    origin=_float_list(b.get('origin'), 'origin'),
                    angle_deg=float(b['angle_deg']) if 'angle_deg' in b else None,
                    axis=_float_list(b.get('axis'), 'axis'),
                    rotate=RotationSpec(
                        omega=float(b['rotate']['omega']),
                        theta0=float(b['rotate'].get('theta0', 0.0)),
                        center=_float_list(b['rotate'].get('center', [0.0, 0.0]), 'center'),
                    ) if b.get('rotate') else None,
                )
                for b in data.get('buffers', [])
            ],
            end_time=float(data['end_time']),
            output=OutputSpec(
                snapshot_every=float(output['snapshot_every']) if output.get('snapshot_every') else None,
                probe_every=float(output['probe_every']) if output.get('probe_every') else None,
                probe_times=[float(t) for t in output.get('probe_times', [])],
                probes=[
                    ProbeSpec(
                        name=str(p['name']), segment=str(p['segment']), s=float(p['s']),
                        radial=bool(p.get('radial', False)),
                        n_bins=int(p['n_bins']) if 'n_bins' in p else None,
                    )
                    for p in output.get('probes', [])
                ],
            ),
            density_reinit=bool(data.get('numerics', {}).get('density_reinit', True)),
            tvf_lambda=float(data['numerics']['tvf_lambda']) if 'tvf_lambda' in data.get('numerics', {}) else None,
            max_substeps=int(data['numerics']['max_substeps']) if 'max_substeps' in data.get('numerics', {}) else None,
            validation=data.get('validation', {}) or {},
            source=source,
        )
    except ConfigurationError:
        raise
    except (KeyError, TypeError, ValueError) as e:
        logger.error(f"❌ Malformed scenario {source or ''}: {str(e)}")
        raise ConfigurationError(f"Malformed scenario: missing or invalid {e}") from e
    config.validate()
    return config


def load_scenario(path: Union[str, Path], dp: Optional[float] = None) -> ScenarioConfig:
    """
    Load a scenario YAML file

    Args:
        path: Scenario file
        dp: Optional particle spacing override

    Returns:
        Validated ScenarioConfig
    """
    path = Path(path)
    try:
        with open(path, 'r') as f:
            data = yaml.safe_load(f)
    except OSError as e:
        logger.error(f"❌ Cannot read scenario {path}: {str(e)}")
        raise ConfigurationError(f"Cannot read scenario {path}: {e}") from e
    except yaml.YAMLError as e:
        logger.error(f"❌ Invalid YAML in {path}: {str(e)}")
        raise ConfigurationError(f"Invalid YAML in {path}: {e}") from e
    if not isinstance(data, dict):
        raise ConfigurationError(f"Scenario {path} must be a mapping")

    config = scenario_from_dict(data, source=str(path))
    if dp is not None:
        config = config.scaled(dp)
    logger.info(f"✅ Loaded scenario '{config.name}' from {path}")
    return config
