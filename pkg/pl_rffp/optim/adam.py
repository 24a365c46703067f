from dataclasses import dataclass

import torch

from pl_rffp.errors import NonFiniteError
from pl_rffp.models.model import ParameterSet


@dataclass
class AdamState:
    step: int
    m: ParameterSet
    v: ParameterSet

    @classmethod
    def create(cls, params):
        return cls(step=0, m=ParameterSet(params).zeros_like(), v=ParameterSet(params).zeros_like())


def check_finite(name, grad, epoch=None, batch=None):
    if not bool(torch.isfinite(grad).all()):
        raise NonFiniteError("non-finite gradient", layer=name, epoch=epoch, batch=batch)


def param_groups(named_params, l2_lambda):
    """Weights get coupled l2 through ``weight_decay``, biases none."""
    groups = []
    for is_weight, decay in ((True, l2_lambda), (False, 0.0)):
        names = [n for n in named_params if ParameterSet.is_weight(n) == is_weight]
        if names:
            groups.append({'params': [named_params[n] for n in names], 'names': names, 'weight_decay': decay})
    return groups


class Adam(torch.optim.Adam):
    """``torch.optim.Adam`` over named engine parameters, driven by externally set ``.grad``.

    Gradients are checked before every step; ``context`` (epoch, batch) is attached to the error.
    """

    def __init__(self, named_params, lr=1e-3, betas=(0.9, 0.999), eps=1e-8, l2_lambda=0.0):
        super().__init__(param_groups(named_params, l2_lambda), lr=lr, betas=betas, eps=eps)
        self.context = {}

    @torch.no_grad()
    def step(self, closure=None):
        for group in self.param_groups:
            for name, p in zip(group['names'], group['params']):
                if p.grad is not None:
                    check_finite(name, p.grad, **self.context)
        return super().step(closure)


def adam_step(params, grads, state: AdamState, config):
    """One bias-corrected Adam step; returns new ``(params, state)`` and leaves the inputs untouched.

    ``config`` is a TrainConfig. l2 applies to weights only.
    """
    for name, g in grads.items():
        check_finite(name, g)
    params = ParameterSet(params).clone()
    adam = config.adam
    opt = Adam(params, lr=adam.lr, betas=(adam.beta1, adam.beta2), eps=adam.eps, l2_lambda=config.l2_lambda)
    for name, p in params.items():
        p.grad = grads[name].to(p.dtype)
        opt.state[p] = {
            'step': torch.tensor(float(state.step)),
            'exp_avg': state.m[name].clone(),
            'exp_avg_sq': state.v[name].clone(),
        }
    opt.step()
    m = ParameterSet((name, opt.state[p]['exp_avg']) for name, p in params.items())
    v = ParameterSet((name, opt.state[p]['exp_avg_sq']) for name, p in params.items())
    for p in params.values():
        p.grad = None
    return params, AdamState(step=state.step + 1, m=m, v=v)
