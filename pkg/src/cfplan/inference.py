"""Gain prediction for unseen scenes by nearest neighbors over a compact
point-cloud descriptor.

The descriptor is an 8x8x8 occupancy histogram over the workspace box
(fractions, so clouds of different sizes compare), concatenated with the
cloud centroid and its axis-aligned extent: 512 + 3 + 3 = 518 numbers.
Points outside the workspace are clipped into the boundary cells.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .labeling import LabeledSample
from .scene import PointCloud, WorkspaceBounds

GRID = 8


class EmptyDatasetError(ValueError):
    """Raised when a prediction is requested against an empty dataset."""


@dataclass(frozen=True)
class SceneDescriptor:
    histogram: np.ndarray  # (GRID**3,) cell fractions
    centroid: np.ndarray  # (3,)
    extent: np.ndarray  # (3,)

    def vector(self) -> np.ndarray:
        return np.concatenate([self.histogram, self.centroid, self.extent])


def featurize(cloud: PointCloud, workspace: WorkspaceBounds) -> SceneDescriptor:
    pts = cloud.points
    if pts.shape[0] == 0:
        return SceneDescriptor(np.zeros(GRID**3), np.zeros(3), np.zeros(3))
    rel = (pts - workspace.min) / workspace.widths
    cells = np.clip((rel * GRID).astype(int), 0, GRID - 1)
    flat = (cells[:, 0] * GRID + cells[:, 1]) * GRID + cells[:, 2]
    hist = np.bincount(flat, minlength=GRID**3).astype(float) / pts.shape[0]
    centroid = pts.mean(axis=0)
    extent = pts.max(axis=0) - pts.min(axis=0)
    return SceneDescriptor(hist, centroid, extent)


def knn_predict(
    query: SceneDescriptor,
    dataset: list[LabeledSample],
    workspace: WorkspaceBounds,
    k: int = 3,
) -> np.ndarray:
    """Inverse-distance-weighted average of the k nearest stored parameter
    vectors in descriptor space.

    ``k`` is clamped to the dataset size; distance ties resolve toward lower
    dataset indices, and an exact descriptor match (distance zero) returns
    that sample's parameters outright (lowest index among exact matches).
    """
    if not dataset:
        raise EmptyDatasetError("cannot predict from an empty dataset")
    if k < 1:
        raise ValueError("k must be >= 1")
    qv = query.vector()
    vectors = np.stack(
        [featurize(PointCloud(s.points), workspace).vector() for s in dataset]
    )
    dists = np.linalg.norm(vectors - qv, axis=1)
    exact = np.flatnonzero(dists == 0.0)
    if exact.size:
        return np.asarray(dataset[int(exact[0])].p_star, dtype=float).copy()
    k = min(k, len(dataset))
    order = np.argsort(dists, kind="stable")[:k]
    weights = 1.0 / (dists[order] + 1e-9)
    weights /= weights.sum()
    labels = np.stack([np.asarray(dataset[int(i)].p_star, dtype=float) for i in order])
    return weights @ labels
