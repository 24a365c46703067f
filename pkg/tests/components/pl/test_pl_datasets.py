import pytest
import torch

from pl_rffp.pl.datasets.dataset import LitDataset


@pytest.fixture(scope="session")
def dataset_kwargs():
    return {
        'batch_size': 5,
        'val_batch_size': 3,
        'num_workers': 0,
        'seed': 11,
    }


@pytest.fixture(scope="session")
def dataset(dataset_kwargs, tiny_datasets):
    return LitDataset(*tiny_datasets, **dataset_kwargs)


def test_dataset(dataset, dataset_kwargs):
    assert dataset_kwargs == dataset.kwargs
    assert dataset.batch_size == 5
    assert dataset.val_batch_size == 3
    assert dataset.shuffle


def test_train_batches(dataset):
    batches = list(dataset.train_dataloader())
    # the last partial batch is kept
    assert [len(y) for _, y in batches] == [5, 5, 2]
    x, _ = batches[0]
    assert x.shape == (5, 1, 320)
    assert x.dtype == torch.complex64


def test_shuffle_order_depends_on_seed(tiny_datasets):
    def order(seed):
        dm = LitDataset(tiny_datasets[0], batch_size=12, seed=seed)
        _, y = next(iter(dm.train_dataloader()))
        return y.tolist()

    assert order(1) == order(1)
    assert sorted(order(1)) == sorted(order(2))


def test_val_dataloader(dataset, tiny_datasets):
    assert sum(len(y) for _, y in dataset.val_dataloader()) == len(tiny_datasets[1])
    assert LitDataset(tiny_datasets[0]).val_dataloader() is None
