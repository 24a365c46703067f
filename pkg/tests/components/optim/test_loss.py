import math

import pytest
import torch

from pl_rffp.errors import LabelError
from pl_rffp.optim.loss import cross_entropy_loss


def test_uniform_scores():
    loss, grad = cross_entropy_loss(torch.zeros(1, 3, dtype=torch.float64), torch.tensor([0]))
    assert float(loss) == pytest.approx(math.log(3))
    assert torch.allclose(grad, torch.tensor([[-2 / 3, 1 / 3, 1 / 3]], dtype=torch.float64))


def test_gradient_is_averaged_over_the_batch():
    scores = torch.tensor([[2.0, 0.0], [0.0, 2.0]], dtype=torch.float64)
    loss, grad = cross_entropy_loss(scores, torch.tensor([0, 1]))
    p = 1 / (1 + math.exp(-2))
    assert float(loss) == pytest.approx(-math.log(p))
    assert float(grad[0, 0]) == pytest.approx((p - 1) / 2)
    assert torch.allclose(grad.sum(dim=1), torch.zeros(2, dtype=torch.float64), atol=1e-15)


def test_large_scores_stay_finite():
    loss, grad = cross_entropy_loss(torch.tensor([[1000.0, -1000.0]]), torch.tensor([1]))
    assert math.isfinite(float(loss))
    assert bool(torch.isfinite(grad).all())


@pytest.mark.parametrize("label", [3, -1])
def test_label_out_of_range(label):
    with pytest.raises(LabelError) as e:
        cross_entropy_loss(torch.zeros(1, 3), torch.tensor([label]))
    assert e.value.label == label
    assert e.value.num_classes == 3


def test_label_count_mismatch():
    with pytest.raises(LabelError):
        cross_entropy_loss(torch.zeros(2, 3), torch.tensor([0]))
