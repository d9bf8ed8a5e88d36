"""Pathology image corruptions and robustness metrics."""

import json

import numpy as np

from ._core import (
    PathrobustError,
    ValidationError,
    cec,
    derive_seed,
    kendall_swaps,
    kind_names,
    pearson_r,
    psnr,
    relative_ce,
)
from ._core import apply_corruption as _apply
from ._core import severity_table_json as _severity_table_json

__all__ = [
    "Corrupt",
    "PathrobustError",
    "ValidationError",
    "apply_corruption",
    "cec",
    "derive_seed",
    "kendall_swaps",
    "kind_names",
    "pearson_r",
    "psnr",
    "relative_ce",
    "severity_table",
]

KINDS = tuple(kind_names())


def _table_json(table):
    return "" if table is None else json.dumps(table)


def severity_table(overrides=None):
    """Effective severity table as a dict, optionally merged with overrides."""
    return json.loads(_severity_table_json(_table_json(overrides)))


def apply_corruption(image, kind, severity, seed, table=None):
    """Corrupt an (H, W, 3) uint8 array. Severity 0 returns an exact copy."""
    return _apply(image, kind, int(severity), int(seed), _table_json(table))


class Corrupt:
    """Callable transform for data loaders.

    seed_policy:
      "fixed"     every call uses ``seed``
      "counter"   call i uses ``seed + i``
      "sample_id" ``derive_seed(seed, sample_id, kind, severity)``; pass
                  ``sample_id=`` when calling, matching the batch generator
    """

    def __init__(self, kind, severity, seed=0, seed_policy="fixed", table=None):
        if kind not in KINDS:
            raise ValueError(f"unknown corruption kind {kind!r}; expected one of {', '.join(KINDS)}")
        if seed_policy not in ("fixed", "counter", "sample_id"):
            raise ValueError(f"unknown seed policy {seed_policy!r}")
        self.kind = kind
        self.severity = int(severity)
        self.seed = int(seed)
        self.seed_policy = seed_policy
        self._table = _table_json(table)
        self._calls = 0
        severity_table(table)  # validate eagerly

    def seed_for(self, sample_id=None):
        if self.seed_policy == "fixed":
            return self.seed
        if self.seed_policy == "counter":
            return (self.seed + self._calls) % (1 << 64)
        if sample_id is None:
            raise ValueError("seed_policy 'sample_id' requires a sample_id argument")
        return derive_seed(self.seed, str(sample_id), self.kind, self.severity)

    def __call__(self, image, sample_id=None):
        image = np.asarray(image)
        seed = self.seed_for(sample_id)
        self._calls += 1
        return _apply(image, self.kind, self.severity, seed, self._table)

    def __repr__(self):
        return f"Corrupt(kind={self.kind!r}, severity={self.severity}, seed={self.seed}, seed_policy={self.seed_policy!r})"
