import torch

from pl_rffp.errors import LabelError


def cross_entropy_loss(scores: torch.Tensor, labels: torch.Tensor):
    """Mean softmax cross-entropy and its gradient with respect to the scores.

    Returns ``(loss, grad)`` with ``grad = (softmax - onehot) / batch``.
    """
    batch, classes = scores.shape
    labels = torch.as_tensor(labels, dtype=torch.long)
    if labels.shape != (batch,):
        raise LabelError(f"expected {batch} labels, got shape {tuple(labels.shape)}", num_classes=classes)
    bad = (labels < 0) | (labels >= classes)
    if bool(bad.any()):
        label = int(labels[bad][0])
        raise LabelError(f"label {label} outside [0, {classes})", label=label, num_classes=classes)
    with torch.no_grad():
        log_p = torch.log_softmax(scores, dim=1)
        loss = -log_p.gather(1, labels.view(-1, 1)).mean()
        grad = torch.exp(log_p)
        grad[torch.arange(batch), labels] -= 1
        grad /= batch
    return loss, grad
