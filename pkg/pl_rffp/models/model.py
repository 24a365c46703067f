from collections import OrderedDict
from dataclasses import dataclass, field
import math
from typing import List, Optional, Tuple

import torch

from pl_rffp.errors import ArchitectureError, CacheError, ShapeError
from pl_rffp.models import functional as CF
from pl_rffp.models.complex_tensor import ComplexTensor
from pl_rffp.models.layers import (
    ComplexConv1D, NetworkSpec, OutputDense, RealConv1D, RealDense, SquaredModulus, TemporalAverage, layer_inputs,
)


class ParameterSet(OrderedDict):
    """Named real-valued parameter arrays in declaration order.

    Complex weights are stored as two entries, ``<i>_weight_real`` then ``<i>_weight_imag``.
    """

    def num_scalars(self):
        return sum(t.numel() for t in self.values())

    def clone(self):
        return ParameterSet((k, v.detach().clone()) for k, v in self.items())

    def zeros_like(self):
        return ParameterSet((k, torch.zeros_like(v)) for k, v in self.items())

    def to(self, dtype):
        return ParameterSet((k, v.detach().to(dtype)) for k, v in self.items())

    @staticmethod
    def is_weight(name):
        return "_weight" in name


def parameter_shapes(net: NetworkSpec):
    shapes = OrderedDict()
    for i, (layer, fan_in) in enumerate(zip(net.layers, layer_inputs(net))):
        if isinstance(layer, ComplexConv1D):
            shapes[f"{i}_weight_real"] = (layer.filters, fan_in, layer.kernel)
            shapes[f"{i}_weight_imag"] = (layer.filters, fan_in, layer.kernel)
            if layer.activation == "modrelu":
                shapes[f"{i}_bias"] = (layer.filters,)
        elif isinstance(layer, RealConv1D):
            shapes[f"{i}_weight"] = (layer.filters, fan_in, layer.kernel)
            shapes[f"{i}_bias"] = (layer.filters,)
        elif isinstance(layer, RealDense):
            shapes[f"{i}_weight"] = (layer.units, fan_in)
            shapes[f"{i}_bias"] = (layer.units,)
        elif isinstance(layer, OutputDense):
            shapes[f"{i}_weight"] = (layer.classes, fan_in)
            shapes[f"{i}_bias"] = (layer.classes,)
    return shapes


def init_parameters(net: NetworkSpec, generator: Optional[torch.Generator] = None, dtype=torch.float32):
    """Complex weights: Rayleigh magnitude, uniform phase, Var(w) = 2/(fan_in + fan_out).
    Real weights: Glorot uniform. Every bias (ModReLU b included) starts at zero.
    """
    params = ParameterSet()
    shapes = parameter_shapes(net)
    for name, shape in shapes.items():
        if name.endswith("_weight_imag"):
            continue
        if name.endswith("_bias"):
            params[name] = torch.zeros(shape, dtype=dtype)
            continue
        receptive = shape[2] if len(shape) == 3 else 1
        fan_in, fan_out = shape[1] * receptive, shape[0] * receptive
        if name.endswith("_weight_real"):
            sigma = 1.0 / math.sqrt(fan_in + fan_out)
            u = torch.rand(shape, generator=generator, dtype=torch.float64)
            magnitude = sigma * torch.sqrt(-2.0 * torch.log1p(-u))
            phase = (torch.rand(shape, generator=generator, dtype=torch.float64) * 2 - 1) * math.pi
            params[name] = (magnitude * torch.cos(phase)).to(dtype)
            params[name.replace("_real", "_imag")] = (magnitude * torch.sin(phase)).to(dtype)
        else:
            limit = math.sqrt(6.0 / (fan_in + fan_out))
            w = (torch.rand(shape, generator=generator, dtype=torch.float64) * 2 - 1) * limit
            params[name] = w.to(dtype)
    return ParameterSet((name, params[name]) for name in shapes)


def check_parameters(net: NetworkSpec, params):
    shapes = parameter_shapes(net)
    if list(params.keys()) != list(shapes.keys()):
        raise ArchitectureError(f"parameter names {list(params.keys())} do not match {list(shapes.keys())}")
    for name, shape in shapes.items():
        if tuple(params[name].shape) != shape:
            raise ArchitectureError(f"parameter {name} has shape {tuple(params[name].shape)}, expected {shape}")


def _token(params):
    # torch bumps _version on every in-place write, so an optimizer step or add_ changes the token
    return tuple((name, t.data_ptr(), t._version) for name, t in params.items())


@dataclass
class ForwardCache:
    net: NetworkSpec
    token: tuple
    input_shape: Tuple[int, ...]
    stop_at: Optional[int]
    trace: List[tuple] = field(default_factory=list)
    consumed: bool = False


def forward(net: NetworkSpec, params, batch: ComplexTensor, stop_at: Optional[int] = None):
    """Run the network on a batch.

    Returns ``(scores, cache)``. With ``stop_at`` the pass ends at the pre-activation
    output of that ComplexConv1D layer, which is returned instead of the scores.
    """
    check_parameters(net, params)
    if batch.shape[2] != net.input_length:
        raise ShapeError("batch length does not match the network input", expected=net.input_length,
                         got=batch.shape[2])
    expected_channels = net.input_channels if net.mode == "complex" else net.input_channels // 2
    if batch.shape[1] != expected_channels:
        raise ShapeError("batch channels do not match the network input", expected=expected_channels,
                         got=batch.shape[1])
    if stop_at is not None and not isinstance(net.layers[stop_at], ComplexConv1D):
        raise ArchitectureError("can only stop at a complex conv layer", layer=stop_at)

    dtype = next(iter(params.values())).dtype
    cache = ForwardCache(net=net, token=_token(params), input_shape=batch.shape, stop_at=stop_at)
    trace = cache.trace
    with torch.no_grad():
        x = batch.to(dtype)
        if net.mode == "real2ch":
            x = x.stacked()
        for i, layer in enumerate(net.layers):
            if isinstance(layer, ComplexConv1D):
                w_re, w_im = params[f"{i}_weight_real"], params[f"{i}_weight_imag"]
                trace.append(("cconv", i, x))
                x = CF.complex_conv1d(x, w_re, w_im, layer.stride)
                if stop_at == i:
                    return x, cache
                if layer.activation == "modrelu":
                    trace.append(("modrelu", i, x))
                    x = CF.modrelu(x, params[f"{i}_bias"])
                elif layer.activation == "crelu":
                    trace.append(("crelu", i, x))
                    x = CF.crelu(x)
            elif isinstance(layer, SquaredModulus):
                trace.append(("abs2", i, x))
                x = CF.squared_modulus(x)
            elif isinstance(layer, TemporalAverage):
                trace.append(("avg", i, tuple(x.shape)))
                x = CF.temporal_average(x)
            elif isinstance(layer, RealConv1D):
                trace.append(("rconv", i, x))
                x = CF.real_conv1d(x, params[f"{i}_weight"], params[f"{i}_bias"], layer.stride)
                trace.append(("relu", i, x))
                x = torch.relu(x)
            elif isinstance(layer, RealDense):
                trace.append(("dense", i, x))
                x = CF.dense(x, params[f"{i}_weight"], params[f"{i}_bias"])
                trace.append(("relu", i, x))
                x = torch.relu(x)
            elif isinstance(layer, OutputDense):
                trace.append(("dense", i, x))
                x = CF.dense(x, params[f"{i}_weight"], params[f"{i}_bias"])
    return x, cache


def backward(net: NetworkSpec, params, cache: ForwardCache, grad_output, input_grad: bool = False):
    """Gradient of a real cost with respect to every real parameter scalar.

    ``grad_output`` holds d(cost)/d(scores), or a ComplexTensor of d(cost)/d(Re, Im)
    of the stop layer output when the forward pass used ``stop_at``.
    """
    if not isinstance(cache, ForwardCache) or cache.net != net:
        raise CacheError("cache was produced by a different network")
    if cache.token != _token(params):
        raise CacheError("parameters changed since the forward pass that produced this cache")
    if cache.consumed:
        raise CacheError("cache was already consumed by a backward pass")
    check_parameters(net, params)
    cache.consumed = True

    grads = params.zeros_like()
    g = grad_output
    with torch.no_grad():
        for kind, i, saved in reversed(cache.trace):
            if kind == "cconv":
                layer = net.layers[i]
                g, dw_re, dw_im = CF.complex_conv1d_backward(
                    saved, params[f"{i}_weight_real"], params[f"{i}_weight_imag"], layer.stride, g)
                grads[f"{i}_weight_real"] = dw_re
                grads[f"{i}_weight_imag"] = dw_im
            elif kind == "modrelu":
                g, db = CF.modrelu_backward(saved, params[f"{i}_bias"], g)
                grads[f"{i}_bias"] = db
            elif kind == "crelu":
                g = CF.crelu_backward(saved, g)
            elif kind == "abs2":
                g = CF.squared_modulus_backward(saved, g)
            elif kind == "avg":
                g = CF.temporal_average_backward(saved, g)
            elif kind == "rconv":
                g, dw, db = CF.real_conv1d_backward(saved, params[f"{i}_weight"], net.layers[i].stride, g)
                grads[f"{i}_weight"], grads[f"{i}_bias"] = dw, db
            elif kind == "relu":
                g = CF.relu_backward(saved, g)
            elif kind == "dense":
                g, dw, db = CF.dense_backward(saved, params[f"{i}_weight"], g)
                grads[f"{i}_weight"], grads[f"{i}_bias"] = dw, db
    if not input_grad:
        return grads
    if net.mode == "real2ch":
        half = g.shape[1] // 2
        g = ComplexTensor(g[:, :half].contiguous(), g[:, half:].contiguous())
    return grads, g
