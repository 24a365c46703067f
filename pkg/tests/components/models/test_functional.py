import math

import numpy as np
import pytest
import torch

from pl_rffp.errors import ShapeError
from pl_rffp.models import functional as CF
from pl_rffp.models.complex_tensor import ComplexTensor


def ct(values):
    return ComplexTensor.from_complex(np.asarray(values, dtype=np.complex128).reshape(1, 1, -1))


def test_complex_tensor_validation():
    with pytest.raises(ShapeError):
        ComplexTensor(torch.zeros(1, 1, 3), torch.zeros(1, 1, 4))
    with pytest.raises(ShapeError):
        ComplexTensor(torch.zeros(3), torch.zeros(3))
    z = ComplexTensor.from_complex(np.ones((2, 5)))
    assert z.shape == (2, 1, 5)
    assert torch.equal(z.imag, torch.zeros(2, 1, 5))


def test_rotate_preserves_modulus():
    z = ct([1 + 2j, -3j, 0.5])
    assert torch.allclose(z.rotate(0.7).abs2(), z.abs2(), atol=1e-12)


def test_modrelu_examples():
    z = ct([3 + 4j])
    out = CF.modrelu(z, torch.tensor([1.0], dtype=torch.float64)).to_complex()
    assert torch.allclose(out, torch.tensor([[[2.4 + 3.2j]]], dtype=torch.complex128))
    # inside the dead zone
    out = CF.modrelu(z, torch.tensor([6.0], dtype=torch.float64)).to_complex()
    assert torch.equal(out, torch.zeros_like(out))
    # negative b grows the modulus
    out = CF.modrelu(z, torch.tensor([-5.0], dtype=torch.float64)).to_complex()
    assert torch.allclose(out, torch.tensor([[[6 + 8j]]], dtype=torch.complex128))


def test_modrelu_zero_bias_is_identity():
    z = ct([1 + 1j, -2 + 0.5j, 0j, 3j])
    out = CF.modrelu(z, torch.zeros(1, dtype=torch.float64))
    assert torch.allclose(out.to_complex(), z.to_complex(), atol=1e-15)


def test_modrelu_preserves_phase_outside_the_disc():
    z = ct([1 + 1j, -2 + 0.5j, 3j, -4 - 1j])
    out = CF.modrelu(z, torch.tensor([0.5], dtype=torch.float64)).to_complex()
    assert torch.allclose(torch.angle(out), torch.angle(z.to_complex()), atol=1e-12)


def test_modrelu_zero_input_with_negative_bias():
    out = CF.modrelu(ct([0j]), torch.tensor([-1.0], dtype=torch.float64))
    assert float(out.abs2()) == 0.0


def test_modrelu_bias_shape():
    with pytest.raises(ShapeError):
        CF.modrelu(ct([1j]), torch.zeros(2, dtype=torch.float64))


def test_crelu_quadrants_and_idempotence():
    z = ct([1 + 1j, -1 + 2j, 1 - 2j, -1 - 1j])
    out = CF.crelu(z).to_complex()
    expected = torch.tensor([[[1 + 1j, 2j, 1, 0]]], dtype=torch.complex128)
    assert torch.equal(out, expected)
    assert torch.equal(CF.crelu(CF.crelu(z)).to_complex(), out)


def test_complex_conv_example():
    x = ct([1 + 1j])
    w_re, w_im = torch.ones(1, 1, 1, dtype=torch.float64), -torch.ones(1, 1, 1, dtype=torch.float64)
    y = CF.complex_conv1d(x, w_re, w_im).to_complex()
    assert torch.equal(y, torch.tensor([[[2 + 0j]]], dtype=torch.complex128))


def test_complex_conv_matches_complex_arithmetic():
    rng = np.random.default_rng(0)
    x = rng.standard_normal((2, 3, 12)) + 1j * rng.standard_normal((2, 3, 12))
    w = rng.standard_normal((4, 3, 5)) + 1j * rng.standard_normal((4, 3, 5))
    y = CF.complex_conv1d(ComplexTensor.from_complex(x), torch.from_numpy(w.real), torch.from_numpy(w.imag), 2)
    expected = np.zeros((2, 4, 4), dtype=np.complex128)
    for n in range(4):
        expected[:, :, n] = np.einsum('bck,fck->bf', x[:, :, 2 * n:2 * n + 5], w)
    assert np.allclose(y.to_complex().numpy(), expected, atol=1e-12)


def test_complex_conv_rejects_long_kernels():
    with pytest.raises(ShapeError):
        CF.complex_conv1d(ct([1j, 1j]), torch.zeros(1, 1, 3), torch.zeros(1, 1, 3))


def test_complex_conv_backward_matches_autograd():
    rng = np.random.default_rng(1)
    x = ComplexTensor.from_complex(rng.standard_normal((2, 2, 9)) + 1j * rng.standard_normal((2, 2, 9)))
    w_re = torch.from_numpy(rng.standard_normal((3, 2, 3)))
    w_im = torch.from_numpy(rng.standard_normal((3, 2, 3)))
    g = ComplexTensor.from_complex(rng.standard_normal((2, 3, 4)) + 1j * rng.standard_normal((2, 3, 4)))
    dx, dw_re, dw_im = CF.complex_conv1d_backward(x, w_re, w_im, 2, g)

    leaves = [t.clone().requires_grad_() for t in (x.real, x.imag, w_re, w_im)]
    y = CF.complex_conv1d(ComplexTensor(leaves[0], leaves[1]), leaves[2], leaves[3], 2)
    (y.real * g.real + y.imag * g.imag).sum().backward()
    for ours, leaf in zip((dx.real, dx.imag, dw_re, dw_im), leaves):
        assert torch.allclose(ours, leaf.grad, atol=1e-12)


def test_temporal_average_backward_spreads_evenly():
    grad = torch.tensor([[4.0, 8.0]], dtype=torch.float64)
    out = CF.temporal_average_backward((1, 2, 4), grad)
    assert torch.equal(out, torch.tensor([[[1.0] * 4, [2.0] * 4]], dtype=torch.float64))


def test_squared_modulus_is_phase_invariant():
    z = ct([1 + 2j, -0.5j])
    assert torch.allclose(CF.squared_modulus(z.rotate(math.pi / 3)), CF.squared_modulus(z), atol=1e-15)
