# python
from collections import OrderedDict

# torch
import torch
import torch.nn as nn

# python lightning
import pytorch_lightning as pl
import torchmetrics

# modules
from pl_rffp.errors import NonFiniteError
from pl_rffp.models.complex_tensor import ComplexTensor
from pl_rffp.models.layers import NetworkSpec
from pl_rffp.models.model import ParameterSet, backward, forward
from pl_rffp.optim.adam import Adam
from pl_rffp.optim.loss import cross_entropy_loss

DTYPES = {'float32': torch.float32, 'float64': torch.float64}


class LitModule(pl.LightningModule):
    """Lightning wrapper around the complex network engine.

    Gradients come from the engine's analytic backward pass, so optimization is manual:
    every training step runs forward, loss, backward and one Adam step.
    """

    def __init__(self, net: NetworkSpec, params, train_config):
        super().__init__()
        self.automatic_optimization = False
        self.net = net
        self.train_config = train_config
        self.compute_dtype = DTYPES[train_config.dtype]
        self.params = nn.ParameterDict(OrderedDict(
            (name, nn.Parameter(t.detach().clone().to(self.compute_dtype))) for name, t in params.items()
        ))
        self.metric = {
            mode: torchmetrics.classification.MulticlassAccuracy(num_classes=net.num_classes, average='micro')
            for mode in ('train', 'val')
        }
        self.mean_loss = {mode: torchmetrics.MeanMetric() for mode in ('train', 'val')}
        self.history = {
            'acc': {
                'train': [],
                'val': []
            },
            'loss': {
                'train': [],
                'val': []
            }
        }

    def parameter_set(self) -> ParameterSet:
        return ParameterSet((name, p) for name, p in self.params.items())

    def export_parameters(self) -> ParameterSet:
        return self.parameter_set().clone()

    def forward(self, x):
        z = ComplexTensor.from_complex(x, dtype=self.compute_dtype)
        scores, _ = forward(self.net, self.parameter_set(), z)
        return scores

    def configure_optimizers(self):
        adam = self.train_config.adam
        return Adam(self.params, lr=adam.lr, betas=(adam.beta1, adam.beta2), eps=adam.eps,
                    l2_lambda=self.train_config.l2_lambda)

    # logging
    def logging_step(self, loss, mode):
        self.log(f"{mode}/step/loss", loss, on_step=True, on_epoch=False)

    def logging_epoch(self, mode):
        self.log(f"{mode}/epoch/loss", self.history['loss'][mode][-1], on_epoch=True, prog_bar=True)
        self.log(f"{mode}/epoch/acc", self.history['acc'][mode][-1], on_epoch=True, prog_bar=True)

    # update history
    def update_history(self, mode):
        loss = float(self.mean_loss[mode].compute())
        acc = float(self.metric[mode].compute())
        self.history['loss'][mode].append(loss)
        self.history['acc'][mode].append(acc)
        self.mean_loss[mode].reset()
        self.metric[mode].reset()
        return loss, acc

    # _step
    def _step(self, batch, batch_idx, mode):
        x, y = batch
        z = ComplexTensor.from_complex(x, dtype=self.compute_dtype)
        params = self.parameter_set()
        scores, cache = forward(self.net, params, z)
        loss, grad = cross_entropy_loss(scores, y)
        if not torch.isfinite(loss):
            raise NonFiniteError("non-finite loss", epoch=self.current_epoch, batch=batch_idx)
        if mode == 'train':
            grads = backward(self.net, params, cache, grad)
            opt = self.optimizers()
            opt.optimizer.context = {'epoch': self.current_epoch, 'batch': batch_idx}
            for name, p in self.params.items():
                p.grad = grads[name]
            opt.step()
            self.logging_step(loss, mode)
        self.metric[mode].update(scores.detach(), y)
        self.mean_loss[mode].update(loss.detach(), weight=y.shape[0])
        return loss
    def training_step(self, batch, batch_idx): return self._step(batch, batch_idx, 'train')
    def validation_step(self, batch, batch_idx): return self._step(batch, batch_idx, 'val')

    # _epoch_end
    def _epoch_end(self, mode):
        if self.local_rank != 0: return
        self.update_history(mode)
        self.logging_epoch(mode)
    def on_train_epoch_end(self): self._epoch_end('train')
    def on_validation_epoch_end(self):
        if not self.trainer.sanity_checking:
            self._epoch_end('val')
