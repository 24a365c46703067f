import logging
import os
import sys
import time

import hydra
import numpy as np
from omegaconf import DictConfig
import torch
import yaml

from pl_rffp.config import RunConfig, load_config, to_yaml
from pl_rffp.data.datasets.rf import augment_noise, augment_rng, build_from_config
from pl_rffp.data.io import load_checkpoint, load_dataset, save_checkpoint, save_dataset
from pl_rffp.errors import ConfigError, RffpError
from pl_rffp.experiments.complex_vs_real import run_complex_vs_real
from pl_rffp.experiments.id_robustness import run_id_robustness
from pl_rffp.experiments.noise_aug import run_noise_aug_grid
from pl_rffp.experiments.snr_matrix import run_snr_matrix
from pl_rffp.experiments.visualize import visualize_filters, write_waveforms
from pl_rffp.experiments.runner import make_net
from pl_rffp.models.architectures import build_architecture
from pl_rffp.models.layers import count_parameters
from pl_rffp.models.model import init_parameters
from pl_rffp.pl.modules.module import DTYPES
from pl_rffp.pl.trainer import evaluate, get_loggers, train
import pl_rffp.utils.utils as utils

log = logging.getLogger(__name__)

EXPERIMENTS = {
    'complex-vs-real': run_complex_vs_real,
    'id-robustness': run_id_robustness,
    'snr-matrix': run_snr_matrix,
    'noise-aug': run_noise_aug_grid,
}


def init(run: RunConfig):
    """Create the output directory and write the resolved config into it."""
    output_path = f"{run.project.root_dir}/{run.project.output_dir}"
    exp_path, run_name = utils.exp(output_path, run.exp.name, run.paths.output)
    with open(os.path.join(exp_path, 'config.yaml'), 'w') as f:
        f.write(to_yaml(run))
    utils.seed_everything(run.exp.seed)
    return {'output_path': output_path, 'exp_path': exp_path, 'run_name': run_name}


def _require(path, name):
    if not path:
        raise ConfigError(f"{name} is required for this command")
    if not os.path.exists(path):
        raise ConfigError(f"{name}={path} does not exist")
    return path


def _simulate(run: RunConfig):
    data, seed = run.exp.data, run.exp.seed
    train_ds, test_ds, _ = build_from_config(data, seed)
    train_ds = augment_noise(train_ds, data.train_snr_aug_db, augment_rng(seed, 'train', data.train_snr_aug_db))
    test_ds = augment_noise(test_ds, data.test_snr_aug_db, augment_rng(seed, 'test', data.test_snr_aug_db))
    return train_ds, test_ds


def _datasets(run: RunConfig):
    """Train/test splits from files when given, otherwise simulated from the config."""
    if run.paths.train_data:
        train_ds = load_dataset(_require(run.paths.train_data, 'paths.train_data'))
        test_ds = load_dataset(_require(run.paths.test_data, 'paths.test_data')) if run.paths.test_data else None
        return train_ds, test_ds
    log.info("paths.train_data not set, simulating the datasets from exp.data")
    return _simulate(run)


def cmd_gen_data(run: RunConfig):
    common = init(run)
    train_ds, test_ds = _simulate(run)
    paths = {split: os.path.join(common['exp_path'], f"{split}.rffp") for split in ('train', 'test')}
    save_dataset(train_ds, paths['train'])
    save_dataset(test_ds, paths['test'])
    with open(os.path.join(common['exp_path'], 'manifest.yaml'), 'w') as f:
        yaml.safe_dump({split: ds.manifest.to_dict() for split, ds in (('train', train_ds), ('test', test_ds))},
                       f, sort_keys=True)
    return paths


def cmd_train(run: RunConfig):
    common = init(run)
    train_ds, test_ds = _datasets(run)
    net = make_net(run.exp.model, train_ds.num_classes, train_ds.input_length)
    config = run.exp.train
    params = init_parameters(net, torch.Generator().manual_seed(config.seed), DTYPES[config.dtype])
    loggers = get_loggers(run.exp, run.project.name, common['output_path'], common['run_name'])
    trained, history = train(net, params, train_ds, config, test_dataset=test_ds, loggers=loggers,
                             progress=run.exp.progress, log_every_n_steps=run.exp.log_every_n_steps)
    paths = {
        'checkpoint': os.path.join(common['exp_path'], 'checkpoint.rffp'),
        'history': os.path.join(common['exp_path'], 'history.csv'),
    }
    save_checkpoint(net, trained, paths['checkpoint'])
    history.to_csv(paths['history'])
    return paths


def cmd_eval(run: RunConfig):
    common = init(run)
    net, params = load_checkpoint(_require(run.paths.checkpoint, 'paths.checkpoint'))
    dataset = load_dataset(_require(run.paths.test_data, 'paths.test_data'))
    result = evaluate(net, params, dataset)
    report = {'checkpoint': run.paths.checkpoint, 'dataset': run.paths.test_data,
              'digest': dataset.manifest.digest, **result.to_dict()}
    path = os.path.join(common['exp_path'], 'eval.yaml')
    with open(path, 'w') as f:
        yaml.safe_dump(report, f, sort_keys=False)
    log.info(f"accuracy {result.accuracy:.4f} on {result.count} records")
    return report


def cmd_experiment(run: RunConfig):
    common = init(run)
    start = time.perf_counter()
    report = EXPERIMENTS[run.exp.experiment](run)
    report.wall_clock_s = time.perf_counter() - start
    log.info(f"{report.name} finished in {report.wall_clock_s:.1f}s")
    report.write(common['exp_path'], record_timing=run.exp.record_timing)
    return report


def cmd_visualize(run: RunConfig):
    common = init(run)
    net, params = load_checkpoint(_require(run.paths.checkpoint, 'paths.checkpoint'))
    vis_cfg = run.exp.visualize
    vis = visualize_filters(net, params, vis_cfg.layer, vis_cfg.steps, np.random.default_rng(vis_cfg.seed),
                            vis_cfg.step_size)
    out_dir = os.path.join(common['exp_path'], f"layer_{vis_cfg.layer}")
    paths = write_waveforms(vis, out_dir)
    summary = {
        'layer': vis.layer,
        'receptive_field': vis.receptive_field,
        'output_lengths': net.output_lengths(),
        'objective_start': [float(v) for v in vis.objectives[0]],
        'objective_end': [float(v) for v in vis.objectives[-1]],
    }
    with open(os.path.join(out_dir, 'summary.yaml'), 'w') as f:
        yaml.safe_dump(summary, f, sort_keys=False)
    log.info(f"layer {vis.layer} receptive field {vis.receptive_field} samples, output lengths {net.output_lengths()}")
    return paths


def cmd_params(run: RunConfig):
    model = run.exp.model
    net = build_architecture(model.architecture, num_classes=model.num_classes, input_length=model.input_length,
                             activation=model.activation, layers=model.layers)
    count = count_parameters(net)
    print(count)
    return count


COMMANDS = {
    'gen_data': cmd_gen_data,
    'train': cmd_train,
    'eval': cmd_eval,
    'experiment': cmd_experiment,
    'visualize': cmd_visualize,
    'params': cmd_params,
}


def run_command(cfg):
    run = load_config(cfg)
    return COMMANDS[run.command](run)


@hydra.main(config_path="../cfg", config_name="config", version_base=None)
def main(cfg: DictConfig) -> None:
    utils.setup_logging()
    try:
        run_command(cfg)
    except RffpError as e:
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        sys.exit(1)


if __name__ == "__main__":
    main()
