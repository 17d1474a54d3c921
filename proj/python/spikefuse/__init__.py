"""Spike-based fusion of multisensory norms and text embeddings."""

from ._core import (
    ConfigError,
    DataError,
    Error,
    EvalEmptyError,
    diversity,
    expected_output_dims,
    fuse,
    hamming_similarity,
    poisson_encode,
    spearman,
)

__all__ = [
    "ConfigError",
    "DataError",
    "Error",
    "EvalEmptyError",
    "diversity",
    "expected_output_dims",
    "fuse",
    "hamming_similarity",
    "poisson_encode",
    "spearman",
]
