"""Complex weights against real networks on stacked I/Q channels, on identical preamble data."""
from dataclasses import replace
import logging

from pl_rffp.data.datasets.rf import STREAM_CONTROL, build_from_config, derive_rng
from pl_rffp.experiments.report import ExperimentReport, config_echo
from pl_rffp.experiments.runner import Cell, run_cells, seeds, train_config
from pl_rffp.models.architectures import build_architecture
from pl_rffp.models.layers import count_parameters

log = logging.getLogger(__name__)

# row name, architecture suffix, activation, shuffled labels
ROWS = (
    ('complex-modrelu', 'complex', 'modrelu', False),
    ('complex-crelu', 'complex', 'crelu', False),
    ('real', 'real', 'relu', False),
    ('real-1.4x', 'real-1.4x', 'relu', False),
    ('real-2x', 'real-2x', 'relu', False),
    ('shuffled-control', 'complex', 'modrelu', True),
)


def cells_for_seed(exp, seed):
    data = replace(exp.data, input_mode='preamble')
    train, test, _ = build_from_config(data, seed)
    shuffled = None
    cells = []
    for name, suffix, activation, shuffle in ROWS:
        architecture = f"{data.protocol}-{suffix}"
        net = build_architecture(architecture, num_classes=data.num_devices, input_length=train.input_length,
                                 activation=activation)
        reference = build_architecture(architecture, activation=activation)
        train_set = train
        if shuffle:
            if shuffled is None:
                labels = train.labels().numpy()
                shuffled = train.with_labels(derive_rng(seed, STREAM_CONTROL).permutation(labels))
            train_set = shuffled
        key = {'seed': seed, 'row': name, 'architecture': architecture, 'activation': activation}
        extra = {'params_reference': count_parameters(reference), 'chance': 1.0 / data.num_devices}
        cells.append(Cell(key=key, net=net, train=train_set, tests=[({}, test)], config=train_config(exp, seed),
                          init_seed=seed, extra=extra))
    return cells, [train.manifest.digest, test.manifest.digest]


def run_complex_vs_real(run) -> ExperimentReport:
    exp = run.exp
    report = ExperimentReport(name='complex-vs-real', config=config_echo(run), seeds=seeds(exp))
    cells = []
    for seed in report.seeds:
        seed_cells, digests = cells_for_seed(exp, seed)
        cells += seed_cells
        report.digests += digests
    log.info(f"complex-vs-real: {len(cells)} trainings over seeds {report.seeds}")
    report.rows = run_cells(cells, exp.jobs)
    report.check_unique(('seed', 'row'))
    return report
