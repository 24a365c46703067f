from dataclasses import replace
import math

import pytest

from pl_rffp.data.datasets.rf import build_from_config
from pl_rffp.experiments.noise_aug import run_noise_aug_grid
from pl_rffp.experiments.runner import Cell, make_net, run_cell, train_config

TRAIN_SNR = [10.0, 15.0, 20.0, 25.0, math.inf]
TEST_SNR = [20.0, 50.0, 100.0, math.inf]


@pytest.fixture(scope="module")
def grid_run(compose_run):
    run = compose_run('exp=tests', 'exp.train.epochs=1')
    run.exp.model = replace(run.exp.model, architecture='custom', layers=['8C40x20', '8C5x1', '|.|^2', 'Avg', '8D'])
    run.exp.augment = replace(run.exp.augment, train_snr_db=TRAIN_SNR, test_snr_db=TEST_SNR)
    return run


@pytest.fixture(scope="module")
def grid(grid_run):
    return run_noise_aug_grid(grid_run)


def test_grid_has_every_train_test_pair(grid):
    assert len(grid.rows) == len(TRAIN_SNR) * len(TEST_SNR)
    pairs = [(row['train_snr_aug_db'], row['test_snr_aug_db']) for row in grid.rows]
    assert pairs == [(tr, te) for tr in TRAIN_SNR for te in TEST_SNR]


def test_clean_cell_matches_the_unaugmented_run(grid, grid_run):
    exp = grid_run.exp
    aug = exp.augment
    data = replace(exp.data, input_mode='preamble', snr_band=aug.train_band, test_snr_band=aug.test_band)
    train, test, _ = build_from_config(data, exp.seed)
    net = make_net(exp.model, data.num_devices, train.input_length)
    baseline = run_cell(Cell(key={}, net=net, train=train, tests=[({}, test)], config=train_config(exp, exp.seed),
                             init_seed=exp.seed))[0]
    clean = next(row for row in grid.rows
                 if math.isinf(row['train_snr_aug_db']) and math.isinf(row['test_snr_aug_db']))
    for column in ('accuracy', 'train_accuracy', 'final_train_loss'):
        assert clean[column] == baseline[column], column
