import pytest

from pl_rffp.errors import ArchitectureError
from pl_rffp.models.architectures import PRESETS, build_architecture
from pl_rffp.models.layers import (
    ComplexConv1D, NetworkSpec, OutputDense, SquaredModulus, TemporalAverage, count_parameters, parse_layers,
    receptive_field,
)

REAL_PARAMETERS = {
    'adsb-complex': 128400,
    'adsb-real': 78400,
    'adsb-real-1.4x': 133680,
    'adsb-real-2x': 246600,
    'wifi-complex': 216219,
    'wifi-real': 116219,
    'wifi-real-1.4x': 217899,
    'wifi-real-2x': 430419,
}


@pytest.mark.parametrize("name, expected", REAL_PARAMETERS.items())
def test_parameter_counts(name, expected):
    assert count_parameters(build_architecture(name)) == expected


def test_presets_are_all_buildable():
    for name in PRESETS:
        net = build_architecture(name)
        assert net.num_classes == PRESETS[name][2]


@pytest.mark.parametrize("name, lengths", [
    ('adsb-complex', [320, 15, 11]),
    ('wifi-complex', [320, 31, 22]),
    ('adsb-real', [320, 15, 11]),
    ('postpreamble', [1280, 24, 8]),
    ('postpreamble-kernel2', [1280, 63, 27]),
])
def test_output_lengths(name, lengths):
    assert build_architecture(name).output_lengths() == lengths


def test_delete_symbols_window_lengths():
    assert build_architecture('postpreamble', input_length=800).output_lengths() == [800, 15, 3]


def test_receptive_fields():
    net = build_architecture('adsb-complex')
    assert receptive_field(net, 0) == 40
    assert receptive_field(net, 1) == 120
    with pytest.raises(ArchitectureError):
        receptive_field(net, 2)


def test_real_presets_take_two_channels():
    net = build_architecture('adsb-real')
    assert net.mode == 'real2ch'
    assert net.input_channels == 2


def test_notation_round_trip():
    net = build_architecture('adsb-complex', num_classes=5)
    assert net.notation() == "100C40x20 - 100C5x1 - |.|^2 - Avg - 100D - 5O"
    assert NetworkSpec.from_dict(net.to_dict()) == net


def test_crelu_has_no_bias_parameters():
    modrelu = build_architecture('adsb-complex', activation='modrelu')
    crelu = build_architecture('adsb-complex', activation='crelu')
    assert count_parameters(modrelu) - count_parameters(crelu) == 200


def test_custom_architecture():
    net = build_architecture('custom', num_classes=3, input_length=16, layers=["4C4x2", "|.|^2", "Avg"])
    assert isinstance(net.layers[0], ComplexConv1D)
    assert net.output_lengths() == [16, 7]
    with pytest.raises(ArchitectureError):
        build_architecture('custom', num_classes=3, layers=["4C4x2", "|.|^2", "Avg"])


def test_unknown_architecture():
    with pytest.raises(ArchitectureError, match="unknown architecture"):
        build_architecture('resnet')


def test_unparsable_token():
    with pytest.raises(ArchitectureError, match="cannot parse"):
        parse_layers(["100C40x20", "maxpool"], 3)


@pytest.mark.parametrize("layers", [
    # no output layer
    (ComplexConv1D(2, 2), SquaredModulus(), TemporalAverage()),
    # no squared modulus
    (ComplexConv1D(2, 2), TemporalAverage(), OutputDense(3)),
    # complex conv after the boundary
    (SquaredModulus(), ComplexConv1D(2, 2), TemporalAverage(), OutputDense(3)),
    # kernel longer than the input
    (ComplexConv1D(2, 9), SquaredModulus(), TemporalAverage(), OutputDense(3)),
    # zero filters
    (ComplexConv1D(0, 2), SquaredModulus(), TemporalAverage(), OutputDense(3)),
])
def test_invalid_networks(layers):
    with pytest.raises(ArchitectureError):
        NetworkSpec(layers=layers, input_length=8)


def test_error_names_the_layer():
    with pytest.raises(ArchitectureError) as e:
        NetworkSpec(layers=(ComplexConv1D(2, 2), ComplexConv1D(2, 9), SquaredModulus(), TemporalAverage(),
                            OutputDense(3)), input_length=8)
    assert e.value.layer == 1
