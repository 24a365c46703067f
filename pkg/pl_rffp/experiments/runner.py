"""Independent training cells shared by every study."""
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
import logging
import multiprocessing
from typing import Dict, List, Tuple

import torch

from pl_rffp.data.datasets.rf import RFDataset
from pl_rffp.models.architectures import build_architecture
from pl_rffp.models.layers import NetworkSpec, count_parameters
from pl_rffp.models.model import init_parameters
from pl_rffp.pl.modules.module import DTYPES
from pl_rffp.pl.trainer import evaluate, train

log = logging.getLogger(__name__)


@dataclass
class Cell:
    """One training run: fit ``net`` on ``train`` and score it on every test set."""
    key: Dict
    net: NetworkSpec
    train: RFDataset
    tests: List[Tuple[Dict, RFDataset]]
    config: object
    init_seed: int
    extra: Dict = field(default_factory=dict)


def run_cell(cell: Cell) -> List[dict]:
    dtype = DTYPES[cell.config.dtype]
    params = init_parameters(cell.net, torch.Generator().manual_seed(cell.init_seed), dtype)
    trained, history = train(cell.net, params, cell.train, cell.config)
    train_acc = evaluate(cell.net, trained, cell.train).accuracy
    rows = []
    for test_key, test in cell.tests:
        result = evaluate(cell.net, trained, test, keys=('packet_type',))
        row = {**cell.key, **test_key, 'accuracy': result.accuracy, 'train_accuracy': train_acc}
        for packet_type, (acc, _) in result.breakdown['packet_type'].items():
            row[f"accuracy_{packet_type}"] = acc
        row['final_train_loss'] = history.train_loss[-1]
        row['params'] = count_parameters(cell.net)
        row.update(cell.extra)
        rows.append(row)
        log.info(f"{row}")
    return rows


def _worker_init():
    torch.set_num_threads(1)


def run_cells(cells: List[Cell], jobs=1) -> List[dict]:
    """Run cells serially, or in a spawn-based process pool when ``jobs > 1``; rows keep cell order."""
    if jobs <= 1 or len(cells) <= 1:
        results = [run_cell(cell) for cell in cells]
    else:
        context = multiprocessing.get_context('spawn')
        with ProcessPoolExecutor(max_workers=jobs, mp_context=context, initializer=_worker_init) as pool:
            results = list(pool.map(run_cell, cells))
    return [row for rows in results for row in rows]


def seeds(exp):
    return [exp.seed + r for r in range(exp.repeats)]


def train_config(exp, seed):
    return replace(exp.train, seed=seed)


def make_net(model, num_classes, input_length, architecture=None, activation=None) -> NetworkSpec:
    return build_architecture(
        architecture or model.architecture,
        num_classes=model.num_classes or num_classes,
        input_length=input_length,
        activation=activation or model.activation,
        layers=model.layers,
    )
