"""Accuracy when post-preamble data (ICAO address and parity) is exposed to the network."""
from dataclasses import replace
import logging

from pl_rffp.data.datasets.rf import build_from_config
from pl_rffp.errors import ConfigError
from pl_rffp.experiments.report import ExperimentReport, config_echo
from pl_rffp.experiments.runner import Cell, make_net, run_cells, seeds, train_config

log = logging.getLogger(__name__)

# scenario: (input mode, architecture)
SCENARIOS = {
    'no_offset': ('full_packet', 'postpreamble'),
    'random_offset': ('offset_random', 'postpreamble'),
    'last_offset': ('offset_last', 'postpreamble'),
    'preamble_only': ('preamble', 'adsb-complex'),
    'delete_symbols': ('delete_symbols', 'postpreamble'),
    'kernel2_full_packet': ('full_packet', 'postpreamble-kernel2'),
}


def run_id_robustness(run) -> ExperimentReport:
    exp = run.exp
    if exp.data.protocol != 'adsb':
        raise ConfigError("id-robustness needs exp.data.protocol=adsb")
    unknown = [s for s in exp.id_robustness.scenarios if s not in SCENARIOS]
    if unknown:
        raise ConfigError(f"unknown id-robustness scenarios {unknown}, expected a subset of {list(SCENARIOS)}")

    report = ExperimentReport(name='id-robustness', config=config_echo(run), seeds=seeds(exp))
    cells = []
    for seed in report.seeds:
        built = {}
        for band in exp.id_robustness.snr_bands:
            for scenario in exp.id_robustness.scenarios:
                input_mode, architecture = SCENARIOS[scenario]
                if (band, input_mode) not in built:
                    data = replace(exp.data, input_mode=input_mode, snr_band=band, test_snr_band=None)
                    built[(band, input_mode)] = build_from_config(data, seed)[:2]
                train, test = built[(band, input_mode)]
                report.digests += [train.manifest.digest, test.manifest.digest]
                net = make_net(exp.model, exp.data.num_devices, train.input_length, architecture=architecture)
                key = {'seed': seed, 'snr_band': band, 'scenario': scenario, 'input_mode': input_mode,
                       'architecture': architecture}
                cells.append(Cell(key=key, net=net, train=train, tests=[({}, test)],
                                  config=train_config(exp, seed), init_seed=seed))
    log.info(f"id-robustness: {len(cells)} trainings over seeds {report.seeds}")
    report.rows = run_cells(cells, exp.jobs)
    report.check_unique(('seed', 'snr_band', 'scenario'))
    return report
