"""Layer primitives of the complex network and their hand-derived adjoints.

Every ``*_backward`` takes the gradient of a real cost with respect to the real
and imaginary parts of the layer output and returns the gradients with respect
to the real and imaginary parts of the inputs and parameters.
"""
import torch
import torch.nn.functional as F
from torch.nn import grad as nn_grad

from pl_rffp.errors import ShapeError
from pl_rffp.models.complex_tensor import ComplexTensor


def _channel_bias(b, z):
    if b.dim() == 0:
        return b.view(1, 1, 1)
    if b.dim() != 1 or b.shape[0] != z.shape[1]:
        raise ShapeError("ModReLU bias must hold one value per channel",
                         expected=(z.shape[1],), got=tuple(b.shape))
    return b.view(1, -1, 1)


def _modrelu_terms(z, b):
    bb = _channel_bias(b, z).to(z.dtype)
    mag = torch.sqrt(z.abs2())
    # z = 0 always maps to 0, even for negative b
    active = (mag > bb) & (mag > 0)
    safe = torch.where(active, mag, torch.ones_like(mag))
    return bb, active, safe


# activations
def modrelu(z: ComplexTensor, b: torch.Tensor) -> ComplexTensor:
    """max(|z| - b, 0) * exp(j*angle(z)), with one real b per channel."""
    bb, active, safe = _modrelu_terms(z, b)
    scale = torch.where(active, (safe - bb) / safe, torch.zeros_like(safe))
    return ComplexTensor(z.real * scale, z.imag * scale)


def modrelu_backward(z: ComplexTensor, b: torch.Tensor, grad: ComplexTensor):
    bb, active, safe = _modrelu_terms(z, b)
    zero = torch.zeros_like(safe)
    r3 = safe ** 3
    cross = bb * z.real * z.imag / r3
    d_rr = 1 - bb * z.imag ** 2 / r3
    d_ii = 1 - bb * z.real ** 2 / r3
    dx = torch.where(active, grad.real * d_rr + grad.imag * cross, zero)
    dy = torch.where(active, grad.real * cross + grad.imag * d_ii, zero)
    db = torch.where(active, -(grad.real * z.real + grad.imag * z.imag) / safe, zero)
    db = db.sum() if b.dim() == 0 else db.sum(dim=(0, 2))
    return ComplexTensor(dx, dy), db


def crelu(z: ComplexTensor) -> ComplexTensor:
    return ComplexTensor(torch.clamp(z.real, min=0), torch.clamp(z.imag, min=0))


def crelu_backward(z: ComplexTensor, grad: ComplexTensor) -> ComplexTensor:
    return ComplexTensor(grad.real * (z.real > 0), grad.imag * (z.imag > 0))


def relu_backward(pre: torch.Tensor, grad: torch.Tensor) -> torch.Tensor:
    return grad * (pre > 0)


# complex convolution
def _check_window(length, kernel):
    if kernel > length:
        raise ShapeError(f"kernel of {kernel} samples exceeds input length {length}",
                         expected=f"<= {length}", got=kernel)


def _block_weight(w_real, w_imag):
    # [y_re; y_im] = [[Wr, -Wi], [Wi, Wr]] * [x_re; x_im]
    top = torch.cat([w_real, -w_imag], dim=1)
    bottom = torch.cat([w_imag, w_real], dim=1)
    return torch.cat([top, bottom], dim=0)


def complex_conv1d(x: ComplexTensor, w_real: torch.Tensor, w_imag: torch.Tensor, stride: int = 1) -> ComplexTensor:
    """Valid complex cross-correlation without bias: y[n] = sum_k w[k] * x[n*stride + k]."""
    filters, in_channels, kernel = w_real.shape
    if x.shape[1] != in_channels:
        raise ShapeError("input channels do not match the kernel", expected=in_channels, got=x.shape[1])
    _check_window(x.shape[2], kernel)
    y = F.conv1d(x.stacked(), _block_weight(w_real, w_imag), stride=stride)
    return ComplexTensor(y[:, :filters].contiguous(), y[:, filters:].contiguous())


def complex_conv1d_backward(x: ComplexTensor, w_real, w_imag, stride, grad: ComplexTensor):
    filters, in_channels, _ = w_real.shape
    g = grad.stacked()
    block = _block_weight(w_real, w_imag)
    dx = nn_grad.conv1d_input(tuple(x.stacked().shape), block, g, stride=stride)
    dblock = nn_grad.conv1d_weight(x.stacked(), tuple(block.shape), g, stride=stride)
    dw_real = dblock[:filters, :in_channels] + dblock[filters:, in_channels:]
    dw_imag = dblock[filters:, :in_channels] - dblock[:filters, in_channels:]
    return ComplexTensor(dx[:, :in_channels].contiguous(), dx[:, in_channels:].contiguous()), dw_real, dw_imag


# complex -> real boundary
def squared_modulus(z: ComplexTensor) -> torch.Tensor:
    return z.abs2()


def squared_modulus_backward(z: ComplexTensor, grad: torch.Tensor) -> ComplexTensor:
    return ComplexTensor(2 * z.real * grad, 2 * z.imag * grad)


def temporal_average(x: torch.Tensor) -> torch.Tensor:
    if x.shape[-1] < 1:
        raise ShapeError("temporal average needs at least one sample")
    return x.mean(dim=-1)


def temporal_average_backward(shape, grad: torch.Tensor) -> torch.Tensor:
    length = shape[-1]
    return (grad / length).unsqueeze(-1).expand(*shape).contiguous()


# real layers
def real_conv1d(x, weight, bias, stride=1):
    _check_window(x.shape[2], weight.shape[2])
    return F.conv1d(x, weight, bias, stride=stride)


def real_conv1d_backward(x, weight, stride, grad):
    dx = nn_grad.conv1d_input(tuple(x.shape), weight, grad, stride=stride)
    dw = nn_grad.conv1d_weight(x, tuple(weight.shape), grad, stride=stride)
    return dx, dw, grad.sum(dim=(0, 2))


def dense(x, weight, bias):
    return x @ weight.t() + bias


def dense_backward(x, weight, grad):
    return grad @ weight, grad.t() @ x, grad.sum(dim=0)
