"""Design-matrix construction shared by the matrix-based classifiers.

Numeric features pass through as single columns; categorical features expand
to one indicator column per value observed in training, so an unseen value at
prediction time encodes as all zeros. Optional standardization (used by the
linear model and the neural net) centers and scales every expanded column
with training statistics; constant columns are centered and left unscaled.
"""

from __future__ import annotations

import numpy as np

from .. import dataio


class FeatureEncoder:
    """Maps raw feature cell tuples to a float design matrix."""

    def __init__(self, names, kinds, categories, standardize, means=None, scales=None):
        self.names = tuple(names)
        self.kinds = tuple(kinds)
        self.categories = {k: tuple(v) for k, v in categories.items()}
        self.standardize = bool(standardize)
        self.means = None if means is None else np.asarray(means, dtype=float)
        self.scales = None if scales is None else np.asarray(scales, dtype=float)

    @classmethod
    def build(cls, names, kinds, cells, standardize: bool) -> "FeatureEncoder":
        categories = {}
        for j, (name, kind) in enumerate(zip(names, kinds)):
            if kind == dataio.CATEGORICAL:
                categories[name] = tuple(sorted({row[j] for row in cells}))
        enc = cls(names, kinds, categories, standardize)
        if standardize:
            raw = enc._expand(cells)
            means = raw.mean(axis=0)
            scales = raw.std(axis=0)
            scales[scales == 0.0] = 1.0
            enc.means, enc.scales = means, scales
        return enc

    @property
    def expanded_names(self) -> tuple[str, ...]:
        out = []
        for name, kind in zip(self.names, self.kinds):
            if kind == dataio.NUMERIC:
                out.append(name)
            else:
                out.extend(f"{name}={v}" for v in self.categories[name])
        return tuple(out)

    def _expand(self, cells) -> np.ndarray:
        n = len(cells)
        cols = []
        for j, (name, kind) in enumerate(zip(self.names, self.kinds)):
            if kind == dataio.NUMERIC:
                cols.append(np.asarray([row[j] for row in cells], dtype=float)[:, None])
            else:
                cats = self.categories[name]
                index = {v: i for i, v in enumerate(cats)}
                codes = np.asarray([index.get(row[j], -1) for row in cells])
                block = np.zeros((n, len(cats)))
                seen = codes >= 0
                block[np.nonzero(seen)[0], codes[seen]] = 1.0
                cols.append(block)
        return np.hstack(cols) if cols else np.zeros((n, 0))

    def transform(self, cells) -> np.ndarray:
        x = self._expand(cells)
        if self.standardize:
            x = (x - self.means) / self.scales
        return x

    def to_dict(self) -> dict:
        return {
            "names": list(self.names),
            "kinds": list(self.kinds),
            "categories": {k: list(v) for k, v in self.categories.items()},
            "standardize": self.standardize,
            "means": None if self.means is None else [float(v) for v in self.means],
            "scales": None if self.scales is None else [float(v) for v in self.scales],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "FeatureEncoder":
        return cls(
            d["names"], d["kinds"], d["categories"], d["standardize"], d["means"], d["scales"]
        )
