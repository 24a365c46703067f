from typing import List, Optional

from pl_rffp.errors import ArchitectureError
from pl_rffp.models.layers import NetworkSpec, parse_layers

# name: (layer tokens, input length, default classes)
PRESETS = {
    'adsb-complex': (["100C40x20", "100C5x1", "|.|^2", "Avg", "100D"], 320, 100),
    'wifi-complex': (["100C20x10", "100C10x1", "|.|^2", "Avg", "100D"], 320, 19),
    'adsb-real': (["100C40x20", "100C5x1", "Avg", "100D"], 320, 100),
    'adsb-real-1.4x': (["140C40x20", "140C5x1", "Avg", "100D"], 320, 100),
    'adsb-real-2x': (["200C40x20", "200C5x1", "Avg", "100D"], 320, 100),
    'wifi-real': (["100C20x10", "100C10x1", "Avg", "100D"], 320, 19),
    'wifi-real-1.4x': (["140C20x10", "140C10x1", "Avg", "100D"], 320, 19),
    'wifi-real-2x': (["200C20x10", "200C10x1", "Avg", "100D"], 320, 19),
    # post-preamble network on the 64-symbol window
    'postpreamble': (["100C100x50", "|.|^2", "100C10x2", "Avg", "100D"], 1280, 100),
    'postpreamble-kernel2': (["100C40x20", "|.|^2", "100C10x2", "Avg", "100D"], 1280, 100),
}


def build_architecture(name: str, num_classes: Optional[int] = None, input_length: Optional[int] = None,
                       activation: str = "modrelu", layers: Optional[List[str]] = None) -> NetworkSpec:
    """Build a NetworkSpec from a preset name, or from ``layers`` when name is ``custom``."""
    if name == 'custom':
        if not layers:
            raise ArchitectureError("custom architecture needs a layer list")
        if num_classes is None or input_length is None:
            raise ArchitectureError("custom architecture needs num_classes and input_length")
        tokens = list(layers)
    elif name in PRESETS:
        tokens, default_length, default_classes = PRESETS[name]
        num_classes = default_classes if num_classes is None else num_classes
        input_length = default_length if input_length is None else input_length
    else:
        raise ArchitectureError(f"unknown architecture {name!r}, expected one of {sorted(PRESETS)} or 'custom'")
    parsed, mode = parse_layers(tokens, num_classes, activation)
    return NetworkSpec(layers=parsed, input_length=int(input_length),
                       input_channels=1 if mode == 'complex' else 2, mode=mode)
