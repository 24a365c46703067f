from typing import Optional

# torch
import torch
from torch.utils.data import DataLoader, Dataset

# pl
import pytorch_lightning as pl


class LitDataset(pl.LightningDataModule):
    """Wraps prebuilt train/test splits; the shuffle order depends only on ``seed``."""

    def __init__(self, train_dataset: Dataset, test_dataset: Optional[Dataset] = None, **kwargs):
        super().__init__()
        self.train_dataset = train_dataset
        self.test_dataset = test_dataset
        self.kwargs = kwargs
        self.init()

    def init(self):
        self.num_workers = self.kwargs['num_workers'] if 'num_workers' in self.kwargs.keys() else 0
        self.batch_size = self.kwargs['batch_size'] if 'batch_size' in self.kwargs.keys() else 100
        self.val_batch_size = self.kwargs['val_batch_size'] if 'val_batch_size' in self.kwargs.keys() else self.batch_size
        self.shuffle = self.kwargs['shuffle'] if 'shuffle' in self.kwargs.keys() else True
        self.seed = self.kwargs['seed'] if 'seed' in self.kwargs.keys() else 0
        self.generator = torch.Generator().manual_seed(self.seed)

    def train_dataloader(self):
        return DataLoader(self.train_dataset, batch_size=self.batch_size, shuffle=self.shuffle,
                          generator=self.generator, num_workers=self.num_workers)

    def val_dataloader(self):
        if self.test_dataset is None:
            return None
        return DataLoader(self.test_dataset, batch_size=self.val_batch_size, num_workers=self.num_workers)
