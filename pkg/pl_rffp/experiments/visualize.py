"""Input waveforms that maximally excite each filter of a complex conv layer."""
import csv
from dataclasses import dataclass
import logging
import os
from typing import List

import numpy as np
import torch

from pl_rffp.errors import ArchitectureError
from pl_rffp.models.complex_tensor import ComplexTensor
from pl_rffp.models.layers import ComplexConv1D, NetworkSpec, receptive_field
from pl_rffp.models.model import backward, forward

log = logging.getLogger(__name__)

MAX_HALVINGS = 30


@dataclass
class FilterVisualization:
    layer: int
    # (filters, length) complex128, each row unit power
    waveforms: np.ndarray
    # (accepted steps + 1, filters), non-decreasing down every column
    objectives: np.ndarray
    receptive_field: int


def _unit_power(x: ComplexTensor) -> ComplexTensor:
    power = x.abs2().mean(dim=(1, 2), keepdim=True)
    scale = torch.rsqrt(power)
    return ComplexTensor(x.real * scale, x.imag * scale)


def _objective(net, params, x, layer):
    """Mean |y_f|^2 of filter f on example f, with its gradient with respect to the layer output."""
    y, cache = forward(net, params, x, stop_at=layer)
    filters = y.shape[1]
    eye = torch.eye(filters, dtype=y.dtype).unsqueeze(-1)
    positions = y.shape[2]
    objective = (y.abs2() * eye).sum(dim=1).mean(dim=1)
    grad = ComplexTensor(2 * y.real * eye / positions, 2 * y.imag * eye / positions)
    return objective, grad, cache


def visualize_filters(net: NetworkSpec, params, layer_index: int, steps: int = 200, rng=None,
                      step_size: float = 0.1) -> FilterVisualization:
    """Projected gradient ascent from unit-power noise.

    A step that lowers a filter's objective is retried with half the step size; after
    ``MAX_HALVINGS`` failures that filter keeps its current input for the step.
    """
    if not 0 <= layer_index < len(net.layers) or not isinstance(net.layers[layer_index], ComplexConv1D):
        raise ArchitectureError("filter visualization needs a complex conv layer", layer=layer_index)
    rng = np.random.default_rng(0) if rng is None else rng
    params = params.to(torch.float64)
    filters = net.layers[layer_index].filters
    shape = (filters, net.input_channels, net.input_length)
    noise = rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
    x = _unit_power(ComplexTensor.from_complex(noise, dtype=torch.float64))

    objective, grad, cache = _objective(net, params, x, layer_index)
    history: List[torch.Tensor] = [objective.clone()]
    for _ in range(steps):
        _, g = backward(net, params, cache, grad, input_grad=True)
        lr = torch.full((filters, 1, 1), step_size, dtype=torch.float64)
        pending = torch.ones(filters, dtype=torch.bool)
        new_real, new_imag = x.real.clone(), x.imag.clone()
        new_objective = objective.clone()
        for _ in range(MAX_HALVINGS):
            candidate = _unit_power(ComplexTensor(x.real + lr * g.real, x.imag + lr * g.imag))
            value, _, _ = _objective(net, params, candidate, layer_index)
            accept = pending & (value >= objective)
            new_real[accept], new_imag[accept] = candidate.real[accept], candidate.imag[accept]
            new_objective[accept] = value[accept]
            pending &= ~accept
            if not bool(pending.any()):
                break
            lr[pending] /= 2
        x = ComplexTensor(new_real, new_imag)
        # accepted values are the baseline for the next step
        objective = new_objective
        _, grad, cache = _objective(net, params, x, layer_index)
        history.append(objective.clone())

    waveforms = x.to_complex()[:, 0].numpy()
    log.info(f"layer {layer_index}: objective {float(history[0].mean()):.4g} -> {float(history[-1].mean()):.4g}")
    return FilterVisualization(layer=layer_index, waveforms=waveforms, objectives=torch.stack(history).numpy(),
                               receptive_field=receptive_field(net, layer_index))


def write_waveforms(vis: FilterVisualization, out_dir):
    os.makedirs(out_dir, exist_ok=True)
    paths = []
    for k, w in enumerate(vis.waveforms):
        path = os.path.join(out_dir, f"filter_{k:03d}.csv")
        with open(path, 'w', newline='') as f:
            writer = csv.writer(f)
            writer.writerow(['index', 'I', 'Q', 'magnitude', 'phase'])
            for i, z in enumerate(w):
                # angle of 0 is 0
                writer.writerow([i, repr(float(z.real)), repr(float(z.imag)), repr(float(abs(z))),
                                 repr(float(np.angle(z)))])
        paths.append(path)
    return paths
