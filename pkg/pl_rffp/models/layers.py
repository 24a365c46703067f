"""Declarative network description.

Architectures are written in the notation ``<filters>C<kernel>x<stride>`` for
convolutions and ``<units>D`` for dense layers, e.g.
``100C40x20 - 100C5x1 - |.|^2 - Avg - 100D``. Convolutions before ``|.|^2`` are
complex, convolutions after it are real.
"""
from dataclasses import dataclass, asdict
import re
from typing import List, Tuple, Union

from pl_rffp.errors import ArchitectureError

COMPLEX_ACTIVATIONS = ("modrelu", "crelu", "none")
MODES = ("complex", "real2ch")


@dataclass(frozen=True)
class ComplexConv1D:
    filters: int
    kernel: int
    stride: int = 1
    activation: str = "modrelu"

    def __str__(self):
        return f"{self.filters}C{self.kernel}x{self.stride}"


@dataclass(frozen=True)
class SquaredModulus:
    def __str__(self):
        return "|.|^2"


@dataclass(frozen=True)
class TemporalAverage:
    def __str__(self):
        return "Avg"


@dataclass(frozen=True)
class RealConv1D:
    filters: int
    kernel: int
    stride: int = 1
    activation: str = "relu"

    def __str__(self):
        return f"{self.filters}C{self.kernel}x{self.stride}"


@dataclass(frozen=True)
class RealDense:
    units: int
    activation: str = "relu"

    def __str__(self):
        return f"{self.units}D"


@dataclass(frozen=True)
class OutputDense:
    classes: int

    def __str__(self):
        return f"{self.classes}O"


LayerSpec = Union[ComplexConv1D, SquaredModulus, TemporalAverage, RealConv1D, RealDense, OutputDense]
LAYER_TYPES = {cls.__name__: cls for cls in (ComplexConv1D, SquaredModulus, TemporalAverage,
                                               RealConv1D, RealDense, OutputDense)}
CONV_TYPES = (ComplexConv1D, RealConv1D)


def conv_output_length(length, kernel, stride):
    return (length - kernel) // stride + 1


@dataclass(frozen=True)
class NetworkSpec:
    layers: Tuple[LayerSpec, ...]
    input_length: int
    input_channels: int = 1
    mode: str = "complex"

    def __post_init__(self):
        object.__setattr__(self, "layers", tuple(self.layers))
        validate(self)

    @property
    def num_classes(self):
        return self.layers[-1].classes

    def shapes(self):
        """(channels, length) after every layer; length is None once time is averaged out."""
        return _propagate(self)

    def output_lengths(self):
        """Input length followed by the output length of every conv layer."""
        lengths = [self.input_length]
        for layer, (_, length) in zip(self.layers, self.shapes()):
            if isinstance(layer, CONV_TYPES):
                lengths.append(length)
        return lengths

    def notation(self):
        return " - ".join(str(layer) for layer in self.layers)

    def to_dict(self):
        return {
            "mode": self.mode,
            "input_length": self.input_length,
            "input_channels": self.input_channels,
            "layers": [{"type": type(layer).__name__, **asdict(layer)} for layer in self.layers],
        }

    @classmethod
    def from_dict(cls, d):
        layers = []
        for entry in d["layers"]:
            entry = dict(entry)
            kind = entry.pop("type")
            if kind not in LAYER_TYPES:
                raise ArchitectureError(f"unknown layer type {kind!r}")
            layers.append(LAYER_TYPES[kind](**entry))
        return cls(layers=tuple(layers), input_length=int(d["input_length"]),
                   input_channels=int(d["input_channels"]), mode=d["mode"])


def _positive(i, name, value):
    if not isinstance(value, int) or value < 1:
        raise ArchitectureError(f"{name} must be a positive integer, got {value!r}", layer=i)


def validate(net: NetworkSpec):
    if net.mode not in MODES:
        raise ArchitectureError(f"unknown mode {net.mode!r}")
    _positive(None, "input_length", net.input_length)
    _positive(None, "input_channels", net.input_channels)
    layers = net.layers
    if not layers or not isinstance(layers[-1], OutputDense):
        raise ArchitectureError("network must end in OutputDense")
    kinds = [type(layer) for layer in layers]
    if kinds.count(OutputDense) != 1:
        raise ArchitectureError("exactly one OutputDense is allowed")
    if kinds.count(TemporalAverage) != 1:
        raise ArchitectureError("exactly one TemporalAverage is required")
    avg = kinds.index(TemporalAverage)

    if net.mode == "complex":
        if kinds.count(SquaredModulus) != 1:
            raise ArchitectureError("complex mode needs exactly one SquaredModulus")
        boundary = kinds.index(SquaredModulus)
        if any(k is not ComplexConv1D for k in kinds[:boundary]):
            raise ArchitectureError("only ComplexConv1D layers may precede SquaredModulus")
        if ComplexConv1D in kinds[boundary:]:
            raise ArchitectureError("ComplexConv1D after SquaredModulus")
        if avg < boundary:
            raise ArchitectureError("TemporalAverage must follow SquaredModulus")
        head = boundary + 1
    else:
        if ComplexConv1D in kinds or SquaredModulus in kinds:
            raise ArchitectureError("real2ch mode cannot hold complex layers")
        if net.input_channels != 2:
            raise ArchitectureError("real2ch mode takes real and imaginary parts as 2 input channels")
        head = 0
    if any(k is not RealConv1D for k in kinds[head:avg]):
        raise ArchitectureError("only RealConv1D layers may precede TemporalAverage on the real side")
    if any(k not in (RealDense, OutputDense) for k in kinds[avg + 1:]):
        raise ArchitectureError("only dense layers may follow TemporalAverage")

    for i, layer in enumerate(layers):
        if isinstance(layer, CONV_TYPES):
            _positive(i, "filters", layer.filters)
            _positive(i, "kernel", layer.kernel)
            _positive(i, "stride", layer.stride)
        if isinstance(layer, ComplexConv1D) and layer.activation not in COMPLEX_ACTIVATIONS:
            raise ArchitectureError(f"unknown complex activation {layer.activation!r}", layer=i)
        if isinstance(layer, (RealConv1D, RealDense)) and layer.activation != "relu":
            raise ArchitectureError(f"real layers use relu, got {layer.activation!r}", layer=i)
        if isinstance(layer, RealDense):
            _positive(i, "units", layer.units)
        if isinstance(layer, OutputDense):
            _positive(i, "classes", layer.classes)
    _propagate(net)


def _propagate(net):
    channels, length = net.input_channels, net.input_length
    shapes = []
    for i, layer in enumerate(net.layers):
        if isinstance(layer, CONV_TYPES):
            if layer.kernel > length:
                raise ArchitectureError(f"kernel {layer.kernel} exceeds incoming length {length}", layer=i)
            channels, length = layer.filters, conv_output_length(length, layer.kernel, layer.stride)
        elif isinstance(layer, TemporalAverage):
            length = None
        elif isinstance(layer, RealDense):
            channels = layer.units
        elif isinstance(layer, OutputDense):
            channels = layer.classes
        shapes.append((channels, length))
    return shapes


def layer_inputs(net):
    """Incoming channel (or feature) count of every layer."""
    incoming = [net.input_channels]
    incoming += [channels for channels, _ in net.shapes()[:-1]]
    return incoming


def count_parameters(net: NetworkSpec) -> int:
    total = 0
    for layer, fan_in in zip(net.layers, layer_inputs(net)):
        if isinstance(layer, ComplexConv1D):
            total += 2 * layer.filters * fan_in * layer.kernel
            if layer.activation == "modrelu":
                total += layer.filters
        elif isinstance(layer, RealConv1D):
            total += layer.filters * fan_in * layer.kernel + layer.filters
        elif isinstance(layer, RealDense):
            total += fan_in * layer.units + layer.units
        elif isinstance(layer, OutputDense):
            total += fan_in * layer.classes + layer.classes
    return total


def receptive_field(net: NetworkSpec, layer_index: int) -> int:
    """Number of input samples seen by one output position of a conv layer."""
    if not 0 <= layer_index < len(net.layers) or not isinstance(net.layers[layer_index], CONV_TYPES):
        raise ArchitectureError("receptive field is defined for conv layers only", layer=layer_index)
    rf, jump = 1, 1
    for layer in net.layers[:layer_index + 1]:
        if isinstance(layer, CONV_TYPES):
            rf += (layer.kernel - 1) * jump
            jump *= layer.stride
    return rf


_CONV = re.compile(r"^(\d+)\s*C\s*(\d+)\s*[x×]\s*(\d+)$")
_DENSE = re.compile(r"^(\d+)\s*D$")
_ABS2 = {"|.|^2", "|.|2", "abs2"}


def parse_layers(tokens: List[str], num_classes: int, activation: str = "modrelu"):
    """Parse the compact layer notation into layer specs plus the mode it implies.

    The output layer is appended from ``num_classes``.
    """
    tokens = [t.strip() for t in tokens if t.strip()]
    complex_side = any(t in _ABS2 for t in tokens)
    layers = []
    for token in tokens:
        conv, dense_ = _CONV.match(token), _DENSE.match(token)
        if conv:
            filters, kernel, stride = (int(v) for v in conv.groups())
            if complex_side:
                layers.append(ComplexConv1D(filters, kernel, stride, activation))
            else:
                layers.append(RealConv1D(filters, kernel, stride))
        elif dense_:
            layers.append(RealDense(int(dense_.group(1))))
        elif token in _ABS2:
            layers.append(SquaredModulus())
            complex_side = False
        elif token.lower() == "avg":
            layers.append(TemporalAverage())
        else:
            raise ArchitectureError(f"cannot parse layer token {token!r}")
    layers.append(OutputDense(num_classes))
    mode = "complex" if any(isinstance(l, SquaredModulus) for l in layers) else "real2ch"
    return tuple(layers), mode
