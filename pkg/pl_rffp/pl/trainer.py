"""Training and evaluation entry points on top of the Lightning module."""
import csv
from dataclasses import dataclass, field
import logging
from typing import Dict, List, Optional

from omegaconf import OmegaConf
import pytorch_lightning as pl
from pytorch_lightning.loggers import CSVLogger, WandbLogger
import torch
from torchmetrics.functional.classification import multiclass_accuracy

from pl_rffp.errors import RffpError
from pl_rffp.models.complex_tensor import ComplexTensor
from pl_rffp.models.layers import NetworkSpec
from pl_rffp.models.model import forward
from pl_rffp.pl.datasets.dataset import LitDataset
from pl_rffp.pl.modules.module import LitModule

log = logging.getLogger(__name__)


@dataclass
class TrainHistory:
    train_loss: List[float] = field(default_factory=list)
    train_acc: List[float] = field(default_factory=list)
    test_acc: Optional[List[float]] = None

    @property
    def epochs(self):
        return len(self.train_loss)

    def rows(self):
        for i in range(self.epochs):
            yield {
                'epoch': i + 1,
                'train_loss': self.train_loss[i],
                'train_acc': self.train_acc[i],
                'test_acc': '' if self.test_acc is None else self.test_acc[i],
            }

    def to_csv(self, path):
        with open(path, 'w', newline='') as f:
            writer = csv.DictWriter(f, fieldnames=['epoch', 'train_loss', 'train_acc', 'test_acc'])
            writer.writeheader()
            for row in self.rows():
                writer.writerow({k: repr(v) if isinstance(v, float) else v for k, v in row.items()})


@dataclass
class EvalResult:
    accuracy: float
    count: int
    # key -> value -> (accuracy, count)
    breakdown: Dict[str, Dict[str, tuple]]
    predictions: torch.Tensor

    def to_dict(self):
        return {
            'accuracy': self.accuracy,
            'count': self.count,
            'breakdown': {key: {value: {'accuracy': acc, 'count': n} for value, (acc, n) in groups.items()}
                          for key, groups in self.breakdown.items()},
        }


def get_trainer_kwargs(epochs, log_every_n_steps=50, progress=False):
    return {
        'max_epochs': epochs,
        'accelerator': 'cpu',
        'devices': 1,
        'deterministic': True,
        'num_sanity_val_steps': 0,
        'enable_checkpointing': False,
        'enable_model_summary': False,
        'enable_progress_bar': progress,
        'log_every_n_steps': log_every_n_steps,
        'logger': False,
    }


def get_loggers(exp, project_name, output_path, run_name):
    loggers = {}
    enabled = {}
    if exp.csv:
        csv_kwargs = {
            'save_dir': f"{output_path}/csv_logs",
            'name': run_name
        }
        enabled['csv'] = csv_kwargs
        loggers['csv'] = CSVLogger(**csv_kwargs)
    if exp.wandb:
        wandb_kwargs = {
            'project': project_name,
            'name': run_name,
            'save_dir': f"{output_path}"
        }
        enabled['wandb'] = wandb_kwargs
        loggers['wandb'] = WandbLogger(**wandb_kwargs)
    if enabled:
        log.info(f"Enabled loggers:\n{OmegaConf.to_yaml(enabled)}")
    return loggers


def train(net: NetworkSpec, params, dataset, config, test_dataset=None, loggers=None, progress=False,
          log_every_n_steps=50):
    """Train from ``params`` for ``config.epochs`` epochs; returns the trained ParameterSet and its history.

    ``config`` is a TrainConfig. Shuffle order is fixed by ``config.seed``; the last partial batch is kept.
    """
    if len(dataset) == 0:
        raise RffpError("cannot train on an empty dataset")
    labels = dataset.labels() if hasattr(dataset, 'labels') else None
    if labels is not None and int(labels.max()) >= net.num_classes:
        raise RffpError(f"dataset has label {int(labels.max())} but the network has {net.num_classes} classes")

    datamodule = LitDataset(dataset, test_dataset, batch_size=config.batch_size, shuffle=config.shuffle,
                            seed=config.seed)
    module = LitModule(net, params, config)
    trainer_kwargs = get_trainer_kwargs(config.epochs, log_every_n_steps, progress)
    if loggers:
        trainer_kwargs['logger'] = list(loggers.values())
    trainer = pl.Trainer(**trainer_kwargs)
    trainer.fit(module, train_dataloaders=datamodule.train_dataloader(),
                val_dataloaders=datamodule.val_dataloader())

    history = TrainHistory(
        train_loss=list(module.history['loss']['train']),
        train_acc=list(module.history['acc']['train']),
        test_acc=list(module.history['acc']['val']) if test_dataset is not None else None,
    )
    log.info(f"trained {config.epochs} epochs: train acc {history.train_acc[-1]:.4f}"
             + ('' if history.test_acc is None else f", test acc {history.test_acc[-1]:.4f}"))
    return module.export_parameters(), history


def predict(net: NetworkSpec, params, batch: ComplexTensor, batch_size=500):
    """Argmax class per example; ties go to the lowest class index."""
    preds = []
    n = batch.shape[0]
    for start in range(0, n, batch_size):
        chunk = ComplexTensor(batch.real[start:start + batch_size], batch.imag[start:start + batch_size])
        scores, _ = forward(net, params, chunk)
        preds.append(torch.argmax(scores, dim=1))
    return torch.cat(preds)


def evaluate(net: NetworkSpec, params, dataset, keys=('packet_type', 'snr_band'), batch_size=500) -> EvalResult:
    if len(dataset) == 0:
        raise RffpError("cannot evaluate on an empty dataset")
    dtype = next(iter(params.values())).dtype
    preds = predict(net, params, dataset.as_complex_tensor(dtype), batch_size)
    labels = dataset.labels()
    num_classes = max(net.num_classes, 2)
    accuracy = float(multiclass_accuracy(preds, labels, num_classes=num_classes, average='micro'))

    breakdown = {}
    for key in keys:
        values = dataset.metadata(key)
        groups = {}
        for value in sorted(set(values)):
            mask = torch.tensor([v == value for v in values])
            acc = float(multiclass_accuracy(preds[mask], labels[mask], num_classes=num_classes, average='micro'))
            groups[str(value)] = (acc, int(mask.sum()))
        breakdown[key] = groups
    return EvalResult(accuracy=accuracy, count=len(dataset), breakdown=breakdown, predictions=preds)
