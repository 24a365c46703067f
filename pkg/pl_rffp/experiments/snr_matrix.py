"""Preamble-only accuracy across train/test natural-SNR band pairs."""
from dataclasses import replace
import logging

from pl_rffp.data.datasets.rf import build_from_config
from pl_rffp.experiments.report import ExperimentReport, config_echo
from pl_rffp.experiments.runner import Cell, make_net, run_cells, seeds, train_config

log = logging.getLogger(__name__)

# (train band, test band)
PAIRS = (
    ('high', 'low'),
    ('medium', 'low'),
    ('high', 'medium'),
    ('low', 'medium'),
    ('medium', 'high'),
    ('low', 'high'),
)


def run_snr_matrix(run) -> ExperimentReport:
    exp = run.exp
    report = ExperimentReport(name='snr-matrix', config=config_echo(run), seeds=seeds(exp))
    cells = []
    for seed in report.seeds:
        for train_band, test_band in PAIRS:
            data = replace(exp.data, input_mode='preamble', snr_band=train_band, test_snr_band=test_band)
            train, test, _ = build_from_config(data, seed)
            report.digests += [train.manifest.digest, test.manifest.digest]
            net = make_net(exp.model, data.num_devices, train.input_length)
            key = {'seed': seed, 'train_band': train_band, 'test_band': test_band}
            cells.append(Cell(key=key, net=net, train=train, tests=[({}, test)], config=train_config(exp, seed),
                              init_seed=seed))
    log.info(f"snr-matrix: {len(cells)} trainings over seeds {report.seeds}")
    report.rows = run_cells(cells, exp.jobs)
    report.check_unique(('seed', 'train_band', 'test_band'))
    return report
