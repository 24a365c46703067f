import os

import numpy as np
import pytest

from hydra import compose, initialize_config_dir

# torch
import torch

from pl_rffp.config import ImpairmentConfig, TrainConfig, load_config
from pl_rffp.data.datasets.rf import build_dataset
from pl_rffp.models.layers import (
    ComplexConv1D, NetworkSpec, OutputDense, RealConv1D, RealDense, SquaredModulus, TemporalAverage,
)
from pl_rffp.models.model import init_parameters

CFG_DIR = os.path.abspath(os.path.join(os.path.dirname(__file__), '..', 'cfg'))


def compose_config(overrides=()):
    with initialize_config_dir(config_dir=CFG_DIR, version_base=None):
        return compose(config_name='config', overrides=list(overrides))


@pytest.fixture(scope="session")
def compose_run():
    """Compose cfg/ with overrides and return the validated RunConfig."""
    def _compose(*overrides):
        return load_config(compose_config(overrides))
    return _compose


# networks
def toy_complex_net(activation='modrelu', num_classes=3, length=8):
    return NetworkSpec(layers=(
        ComplexConv1D(4, 3, 1, activation),
        ComplexConv1D(3, 2, 2, activation),
        SquaredModulus(),
        RealConv1D(3, 2, 1),
        TemporalAverage(),
        RealDense(5),
        OutputDense(num_classes),
    ), input_length=length)


def toy_real_net(num_classes=3, length=8):
    return NetworkSpec(layers=(
        RealConv1D(4, 3, 1),
        RealConv1D(3, 2, 2),
        TemporalAverage(),
        RealDense(5),
        OutputDense(num_classes),
    ), input_length=length, input_channels=2, mode='real2ch')


def toy_params(net, seed=0, dtype=torch.float64):
    """Initialized parameters with small nonzero biases so every bias gradient is exercised."""
    params = init_parameters(net, torch.Generator().manual_seed(seed), dtype)
    g = torch.Generator().manual_seed(seed + 1)
    for name in params:
        if name.endswith('_bias'):
            params[name] = (torch.rand(params[name].shape, generator=g, dtype=dtype) - 0.5) * 0.2
    return params


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(1234)


@pytest.fixture(scope="session")
def impairments():
    return ImpairmentConfig()


@pytest.fixture(scope="session")
def train_config():
    return TrainConfig(epochs=2, batch_size=4, seed=3)


@pytest.fixture(scope="session")
def tiny_datasets(impairments):
    """3 devices, 4 train and 2 test preamble records each."""
    train, test, _ = build_dataset('adsb', 3, (4, 2), 'high', 'preamble', 7, impairments)
    return train, test
