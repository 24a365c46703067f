import numpy as np
import torch

from pl_rffp.models.complex_tensor import ComplexTensor
from pl_rffp.models.model import forward
from pl_rffp.optim.loss import cross_entropy_loss

FD_STEP = 1e-6


def random_batch(batch, length, seed=0, channels=1):
    rng = np.random.default_rng(seed)
    z = rng.standard_normal((batch, channels, length)) + 1j * rng.standard_normal((batch, channels, length))
    return ComplexTensor.from_complex(z, dtype=torch.float64)


def loss_of(net, params, batch, labels):
    scores, _ = forward(net, params, batch)
    return float(cross_entropy_loss(scores, labels)[0])


def numeric_param_grads(net, params, batch, labels, step=FD_STEP):
    """Central differences of the mean cross-entropy with respect to every parameter scalar."""
    grads = {}
    for name, tensor in params.items():
        grad = torch.zeros_like(tensor)
        flat, gflat = tensor.view(-1), grad.view(-1)
        for k in range(flat.numel()):
            original = float(flat[k])
            flat[k] = original + step
            plus = loss_of(net, params, batch, labels)
            flat[k] = original - step
            minus = loss_of(net, params, batch, labels)
            flat[k] = original
            gflat[k] = (plus - minus) / (2 * step)
        grads[name] = grad
    return grads


def numeric_input_grad(fn, batch: ComplexTensor, step=FD_STEP):
    """Central differences of a scalar ``fn(batch)`` with respect to the real and imaginary planes."""
    planes = []
    for plane in ('real', 'imag'):
        grad = torch.zeros_like(batch.real)
        for k in range(grad.numel()):
            shifted = []
            for sign in (1, -1):
                real, imag = batch.real.clone(), batch.imag.clone()
                target = real if plane == 'real' else imag
                target.view(-1)[k] += sign * step
                shifted.append(fn(ComplexTensor(real, imag)))
            grad.view(-1)[k] = (shifted[0] - shifted[1]) / (2 * step)
        planes.append(grad)
    return ComplexTensor(*planes)


def relative_error(analytic, numeric):
    scale = max(float(analytic.norm()), float(numeric.norm()), 1e-12)
    return float((analytic - numeric).norm()) / scale
