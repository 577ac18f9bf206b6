from .datasets import (
    HELDOUT, TRAIN, Dataset, generate_gaussian_mixture, sample_tiny, sample_tiny_pair, standardize,
)
from .csv_io import manifest_path, read_csv, write_csv

__all__ = [
    'HELDOUT', 'TRAIN', 'Dataset', 'generate_gaussian_mixture', 'sample_tiny',
    'sample_tiny_pair', 'standardize', 'manifest_path', 'read_csv', 'write_csv',
]
