from dataclasses import dataclass
import math

import numpy as np
import torch

from pl_rffp.errors import ShapeError


@dataclass(frozen=True)
class ComplexTensor:
    """Batched complex signal kept as two real planes of shape (batch, channels, length)."""
    real: torch.Tensor
    imag: torch.Tensor

    def __post_init__(self):
        if self.real.shape != self.imag.shape:
            raise ShapeError("real and imaginary planes differ in shape",
                             expected=tuple(self.real.shape), got=tuple(self.imag.shape))
        if self.real.dim() != 3:
            raise ShapeError("expected (batch, channels, length)", got=tuple(self.real.shape))
        if any(d < 1 for d in self.real.shape):
            raise ShapeError("all dimensions must be positive", got=tuple(self.real.shape))

    @property
    def shape(self):
        return tuple(self.real.shape)

    @property
    def dtype(self):
        return self.real.dtype

    @classmethod
    def from_complex(cls, z, dtype=torch.float64):
        """Build from a complex array-like of shape (batch, channels, length) or (batch, length)."""
        z = torch.as_tensor(np.asarray(z)) if not torch.is_tensor(z) else z
        if not torch.is_complex(z):
            z = torch.complex(z.to(dtype), torch.zeros_like(z, dtype=dtype))
        if z.dim() == 2:
            z = z.unsqueeze(1)
        return cls(z.real.to(dtype).contiguous(), z.imag.to(dtype).contiguous())

    def to_complex(self):
        return torch.complex(self.real, self.imag)

    def to(self, dtype):
        return ComplexTensor(self.real.to(dtype), self.imag.to(dtype))

    def rotate(self, theta):
        """Multiply every sample by exp(j*theta)."""
        c, s = math.cos(theta), math.sin(theta)
        return ComplexTensor(self.real * c - self.imag * s, self.real * s + self.imag * c)

    def abs2(self):
        return self.real ** 2 + self.imag ** 2

    def stacked(self):
        """Real and imaginary planes as independent channels: (batch, 2*channels, length)."""
        return torch.cat([self.real, self.imag], dim=1)
