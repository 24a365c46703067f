"""Structured schema for the Hydra-composed run configuration.

The composed ``DictConfig`` is merged into :class:`RunConfig`, so unknown keys and
badly typed values are rejected before any command runs.
"""
from dataclasses import dataclass, field
import math
from typing import List, Optional

from omegaconf import DictConfig, OmegaConf
from omegaconf.errors import OmegaConfBaseException

from pl_rffp.errors import ConfigError

INF = math.inf

PROTOCOLS = ('adsb', 'wifi')
INPUT_MODES = ('preamble', 'full_packet', 'offset_zero', 'offset_random', 'offset_last', 'delete_symbols')
COMMANDS = ('gen_data', 'train', 'eval', 'experiment', 'visualize', 'params')
EXPERIMENTS = ('complex-vs-real', 'id-robustness', 'snr-matrix', 'noise-aug')
ACTIVATIONS = ('modrelu', 'crelu')
DTYPES = ('float32', 'float64')
BANDS = ('low', 'medium', 'high')


@dataclass
class ProjectConfig:
    name: str = 'pl_rffp'
    root_dir: str = '.'
    data_dir: str = 'data'
    output_dir: str = 'output'


@dataclass
class ImpairmentConfig:
    cfo_max_hz: float = 20e3
    iq_gain_std_db: float = 0.5
    iq_phase_std_deg: float = 2.0
    pa_a3_scale: float = 0.05
    pa_a5_scale: float = 0.005
    linewidth_max_hz: float = 100.0
    enable_pa: bool = True
    enable_iq: bool = True
    enable_cfo: bool = True
    enable_phase_noise: bool = True
    random_phase: bool = True


@dataclass
class DataConfig:
    protocol: str = 'adsb'
    num_devices: int = 20
    n_train: int = 100
    n_test: int = 50
    snr_band: str = 'high'
    # None: same band as the training split
    test_snr_band: Optional[str] = None
    input_mode: str = 'preamble'
    train_snr_aug_db: float = INF
    test_snr_aug_db: float = INF
    impairments: ImpairmentConfig = field(default_factory=ImpairmentConfig)


@dataclass
class ModelConfig:
    architecture: str = 'adsb-complex'
    activation: str = 'modrelu'
    # only read when architecture is 'custom'
    layers: Optional[List[str]] = None
    # defaults to data.num_devices
    num_classes: Optional[int] = None
    input_length: Optional[int] = None


@dataclass
class AdamConfig:
    lr: float = 1e-3
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8


@dataclass
class TrainConfig:
    epochs: int = 200
    batch_size: int = 100
    adam: AdamConfig = field(default_factory=AdamConfig)
    l2_lambda: float = 1e-3
    seed: int = 0
    shuffle: bool = True
    dtype: str = 'float32'


@dataclass
class AugmentConfig:
    train_snr_db: List[float] = field(default_factory=lambda: [10.0, 15.0, 20.0, 25.0, INF])
    test_snr_db: List[float] = field(default_factory=lambda: [20.0, 50.0, 100.0, INF])
    train_band: str = 'high'
    test_band: str = 'low'


@dataclass
class IdRobustnessConfig:
    scenarios: List[str] = field(default_factory=lambda: [
        'no_offset', 'random_offset', 'last_offset', 'preamble_only', 'delete_symbols', 'kernel2_full_packet'])
    snr_bands: List[str] = field(default_factory=lambda: ['high', 'medium'])


@dataclass
class VisualizeConfig:
    layer: int = 0
    steps: int = 200
    step_size: float = 0.1
    seed: int = 0


@dataclass
class PathsConfig:
    train_data: Optional[str] = None
    test_data: Optional[str] = None
    checkpoint: Optional[str] = None
    # defaults to a fresh run directory under project.output_dir
    output: Optional[str] = None


@dataclass
class ExpConfig:
    name: str = 'default'
    seed: int = 0
    experiment: str = 'complex-vs-real'
    repeats: int = 1
    jobs: int = 1
    record_timing: bool = False
    progress: bool = False
    # loggers
    csv: bool = False
    wandb: bool = False
    log_every_n_steps: int = 50
    data: DataConfig = field(default_factory=DataConfig)
    model: ModelConfig = field(default_factory=ModelConfig)
    train: TrainConfig = field(default_factory=TrainConfig)
    augment: AugmentConfig = field(default_factory=AugmentConfig)
    id_robustness: IdRobustnessConfig = field(default_factory=IdRobustnessConfig)
    visualize: VisualizeConfig = field(default_factory=VisualizeConfig)


@dataclass
class RunConfig:
    command: str = 'params'
    project: ProjectConfig = field(default_factory=ProjectConfig)
    exp: ExpConfig = field(default_factory=ExpConfig)
    paths: PathsConfig = field(default_factory=PathsConfig)


def _choice(value, name, allowed):
    if value not in allowed:
        raise ConfigError(f"{name}={value!r} is not one of {list(allowed)}")


def _at_least(value, name, low):
    if value < low:
        raise ConfigError(f"{name}={value!r} must be >= {low}")


def validate(run: RunConfig) -> RunConfig:
    exp = run.exp
    _choice(run.command, 'command', COMMANDS)
    _choice(exp.experiment, 'exp.experiment', EXPERIMENTS)
    _choice(exp.data.protocol, 'exp.data.protocol', PROTOCOLS)
    _choice(exp.data.input_mode, 'exp.data.input_mode', INPUT_MODES)
    _choice(exp.data.snr_band, 'exp.data.snr_band', BANDS)
    if exp.data.test_snr_band is not None:
        _choice(exp.data.test_snr_band, 'exp.data.test_snr_band', BANDS)
    _choice(exp.augment.train_band, 'exp.augment.train_band', BANDS)
    _choice(exp.augment.test_band, 'exp.augment.test_band', BANDS)
    for band in exp.id_robustness.snr_bands:
        _choice(band, 'exp.id_robustness.snr_bands', BANDS)
    _choice(exp.model.activation, 'exp.model.activation', ACTIVATIONS)
    _choice(exp.train.dtype, 'exp.train.dtype', DTYPES)
    _at_least(exp.seed, 'exp.seed', 0)
    _at_least(exp.train.seed, 'exp.train.seed', 0)
    _at_least(exp.repeats, 'exp.repeats', 1)
    _at_least(exp.jobs, 'exp.jobs', 1)
    _at_least(exp.data.num_devices, 'exp.data.num_devices', 2)
    _at_least(exp.data.n_train, 'exp.data.n_train', 1)
    _at_least(exp.data.n_test, 'exp.data.n_test', 1)
    _at_least(exp.train.epochs, 'exp.train.epochs', 1)
    _at_least(exp.train.batch_size, 'exp.train.batch_size', 1)
    _at_least(exp.train.l2_lambda, 'exp.train.l2_lambda', 0)
    _at_least(exp.visualize.steps, 'exp.visualize.steps', 0)
    if exp.data.protocol == 'wifi' and exp.data.input_mode != 'preamble':
        raise ConfigError(f"wifi records are preamble-only, got exp.data.input_mode={exp.data.input_mode!r}")
    if exp.model.architecture == 'custom' and not exp.model.layers:
        raise ConfigError("exp.model.architecture=custom needs exp.model.layers")
    return run


def load_config(cfg) -> RunConfig:
    """Merge a composed config into the schema and return the typed, validated RunConfig."""
    try:
        schema = OmegaConf.structured(RunConfig)
        if isinstance(cfg, DictConfig) and 'hydra' in cfg:
            cfg = OmegaConf.masked_copy(cfg, [k for k in cfg.keys() if k != 'hydra'])
        merged = OmegaConf.merge(schema, cfg)
        run = OmegaConf.to_object(merged)
    except OmegaConfBaseException as e:
        raise ConfigError(str(e).splitlines()[0]) from e
    return validate(run)


def to_yaml(run: RunConfig) -> str:
    return OmegaConf.to_yaml(OmegaConf.structured(run), sort_keys=True)
