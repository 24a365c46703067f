"""Grid of artificial AWGN levels injected into the training and test sets."""
from dataclasses import replace
import logging

from pl_rffp.data.datasets.rf import augment_noise, augment_rng, build_from_config
from pl_rffp.experiments.report import ExperimentReport, config_echo
from pl_rffp.experiments.runner import Cell, make_net, run_cells, seeds, train_config

log = logging.getLogger(__name__)


def run_noise_aug_grid(run) -> ExperimentReport:
    """One training per train SNR_aug level, scored on every augmented copy of the test set."""
    exp = run.exp
    aug = exp.augment
    report = ExperimentReport(name='noise-aug', config=config_echo(run), seeds=seeds(exp))
    cells = []
    for seed in report.seeds:
        data = replace(exp.data, input_mode='preamble', snr_band=aug.train_band, test_snr_band=aug.test_band)
        train, test, _ = build_from_config(data, seed)
        tests = []
        for test_snr in aug.test_snr_db:
            augmented = augment_noise(test, test_snr, augment_rng(seed, 'test', test_snr))
            tests.append(({'test_snr_aug_db': float(test_snr)}, augmented))
            report.digests.append(augmented.manifest.digest)
        net = make_net(exp.model, data.num_devices, train.input_length)
        for train_snr in aug.train_snr_db:
            augmented = augment_noise(train, train_snr, augment_rng(seed, 'train', train_snr))
            report.digests.append(augmented.manifest.digest)
            key = {'seed': seed, 'train_snr_aug_db': float(train_snr)}
            cells.append(Cell(key=key, net=net, train=augmented, tests=tests, config=train_config(exp, seed),
                              init_seed=seed))
    log.info(f"noise-aug: {len(cells)} trainings over seeds {report.seeds}")
    report.rows = run_cells(cells, exp.jobs)
    report.check_unique(('seed', 'train_snr_aug_db', 'test_snr_aug_db'))
    return report
