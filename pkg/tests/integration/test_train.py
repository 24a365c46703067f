from dataclasses import replace

import pytest
import torch

from pl_rffp.data.io import load_checkpoint, save_checkpoint
from pl_rffp.models.architectures import build_architecture
from pl_rffp.models.model import init_parameters
from pl_rffp.pl.trainer import evaluate, train


@pytest.fixture(scope="module")
def net():
    return build_architecture('adsb-complex', num_classes=3)


def test_train_save_load_evaluate(tmp_path, net, tiny_datasets, train_config):
    train_ds, test_ds = tiny_datasets
    params = init_parameters(net, torch.Generator().manual_seed(0))
    trained, history = train(net, params, train_ds, train_config, test_dataset=test_ds)
    assert history.epochs == 2
    save_checkpoint(net, trained, tmp_path / "checkpoint.rffp")
    loaded_net, loaded = load_checkpoint(tmp_path / "checkpoint.rffp")
    assert evaluate(loaded_net, loaded, test_ds).accuracy == evaluate(net, trained, test_ds).accuracy


def test_float64_training(net, tiny_datasets, train_config):
    config = replace(train_config, dtype='float64', epochs=1)
    trained, _ = train(net, init_parameters(net, torch.Generator().manual_seed(0)), tiny_datasets[0], config)
    assert all(t.dtype == torch.float64 for t in trained.values())


def test_real_network_trains(tiny_datasets, train_config):
    net = build_architecture('adsb-real', num_classes=3)
    trained, history = train(net, init_parameters(net, torch.Generator().manual_seed(0)), tiny_datasets[0],
                             train_config)
    assert history.epochs == 2
    assert set(trained) == set(init_parameters(net))
