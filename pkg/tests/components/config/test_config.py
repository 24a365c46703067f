from dataclasses import replace
import math

import pytest
from omegaconf import OmegaConf

from pl_rffp.config import RunConfig, load_config, to_yaml, validate
from pl_rffp.errors import ConfigError
from tests.fixtures import compose_config


def test_default_preset(compose_run):
    run = compose_run()
    assert isinstance(run, RunConfig)
    assert run.command == 'params'
    assert run.exp.data.num_devices == 20
    assert (run.exp.data.n_train, run.exp.data.n_test) == (100, 50)
    assert run.exp.train.epochs == 50
    assert run.exp.train.seed == run.exp.seed
    assert math.isinf(run.exp.data.train_snr_aug_db)


def test_full_preset(compose_run):
    run = compose_run('exp=full')
    assert run.exp.data.num_devices == 100
    assert (run.exp.data.n_train, run.exp.data.n_test) == (400, 400)
    assert run.exp.train.epochs == 200
    # inherited from the default preset
    assert run.exp.model.architecture == 'adsb-complex'


def test_overrides_win(compose_run):
    run = compose_run('exp=tests', 'exp.seed=9', 'exp.data.snr_band=low', 'command=train')
    assert run.exp.seed == 9
    assert run.exp.train.seed == 9
    assert run.exp.data.snr_band == 'low'
    assert run.command == 'train'


def test_unknown_keys_are_rejected():
    cfg = compose_config(['exp=tests'])
    OmegaConf.set_struct(cfg, False)
    cfg.exp.data.colour = 'blue'
    with pytest.raises(ConfigError):
        load_config(cfg)


def test_bad_types_are_rejected():
    with pytest.raises(ConfigError):
        load_config(compose_config(['exp.data.num_devices=many']))


@pytest.mark.parametrize("override", [
    'command=fly',
    'exp.experiment=all',
    'exp.data.snr_band=extreme',
    'exp.data.input_mode=postamble',
    'exp.data.num_devices=1',
    'exp.repeats=0',
    'exp.model.activation=tanh',
    'exp.train.dtype=float16',
])
def test_invalid_values(override):
    with pytest.raises(ConfigError):
        load_config(compose_config([override]))


def test_wifi_needs_preamble_input(compose_run):
    run = compose_run('exp.data.protocol=wifi')
    with pytest.raises(ConfigError, match="preamble"):
        validate(replace(run, exp=replace(run.exp, data=replace(run.exp.data, input_mode='full_packet'))))


def test_custom_needs_layers():
    with pytest.raises(ConfigError):
        load_config(compose_config(['exp.model.architecture=custom']))


def test_to_yaml_is_stable(compose_run):
    run = compose_run('exp=tests')
    text = to_yaml(run)
    assert text == to_yaml(compose_run('exp=tests'))
    assert 'train_snr_aug_db: .inf' in text
