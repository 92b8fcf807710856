"""Chebyshev node families and Berrut's barycentric rational interpolant.

Berrut's interpolant uses the weights ``(-1)**j`` on ordered nodes, which
makes it pole-free on the real line for any node distribution. Samples may
be scalars or matrices; the weights are computed once per evaluation point
and applied entrywise.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np


class NodeKind(enum.Enum):
    CHEBYSHEV_FIRST = "chebyshev_first"
    CHEBYSHEV_SECOND = "chebyshev_second"
    SUBSET = "subset"


@dataclass(frozen=True)
class NodeSet:
    """Ordered interpolation / evaluation points.

    ``indices`` are positions in the generating family of size
    ``source_count``; for a full family they are ``0..n-1``.
    """

    points: np.ndarray
    kind: NodeKind
    source_count: int
    indices: np.ndarray = field(default=None)  # type: ignore[assignment]
    parent_kind: NodeKind | None = None

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)
        idx = self.indices
        if idx is None:
            idx = np.arange(len(pts))
        idx = np.asarray(idx, dtype=int)
        idx.setflags(write=False)
        object.__setattr__(self, "indices", idx)
        if len(idx) != len(pts):
            raise ValueError("indices and points differ in length")
        if len(idx) > 1 and np.any(np.diff(idx) <= 0):
            raise ValueError("subset indices must be strictly increasing")
        if len(idx) and (idx[0] < 0 or idx[-1] >= self.source_count):
            raise ValueError("subset index out of range of the generating family")
        if len(np.unique(pts)) != len(pts):
            raise ValueError("points must be pairwise distinct")

    def __len__(self) -> int:
        return len(self.points)

    def subset(self, indices: Sequence[int]) -> "NodeSet":
        """Select positions of this (full) family, keeping the original order."""
        idx = np.asarray(sorted(int(i) for i in indices), dtype=int)
        if len(set(idx.tolist())) != len(idx):
            raise ValueError("duplicate subset index")
        if len(idx) and (idx[0] < 0 or idx[-1] >= len(self.points)):
            raise ValueError("subset index out of range")
        return NodeSet(
            points=self.points[idx],
            kind=NodeKind.SUBSET,
            source_count=len(self.points),
            indices=self.indices[idx],
            parent_kind=self.kind if self.kind is not NodeKind.SUBSET else self.parent_kind,
        )


def cheb_first_kind(n: int) -> NodeSet:
    """Chebyshev points of the first kind ``cos((2i+1)pi/(2n))``, decreasing."""
    if n < 1:
        raise ValueError(f"need at least one node, got n={n}")
    i = np.arange(n)
    pts = np.cos((2 * i + 1) * np.pi / (2 * n))
    # cos(pi/2) is not exactly zero in floating point
    if n % 2 == 1:
        pts[n // 2] = 0.0
    return NodeSet(pts, NodeKind.CHEBYSHEV_FIRST, n)


def cheb_second_kind(n: int) -> NodeSet:
    """Points ``cos(i*pi/n)`` for ``i = 0..n-1`` (the BACC evaluation points)."""
    if n < 1:
        raise ValueError(f"need at least one node, got n={n}")
    i = np.arange(n)
    pts = np.cos(i * np.pi / n)
    if n % 2 == 0:
        pts[n // 2] = 0.0
    return NodeSet(pts, NodeKind.CHEBYSHEV_SECOND, n)


def berrut_weights(points: np.ndarray, z: float) -> np.ndarray | int:
    """Normalized Berrut weights at ``z``.

    Returns the node index instead when ``z`` coincides with a node (or lies
    so close that the weights overflow).
    """
    w = berrut_weight_matrix(points, np.array([z]))[0]
    hit = np.flatnonzero(w == 1.0)
    if hit.size and np.count_nonzero(w) == 1:
        return int(hit[0])
    return w


def berrut_weight_matrix(points: np.ndarray, z: np.ndarray) -> np.ndarray:
    """Berrut weights for many evaluation points, shape ``(len(z), len(points))``.

    Rows for evaluation points that hit a node are unit vectors.
    """
    points = np.asarray(points, dtype=float)
    z = np.atleast_1d(np.asarray(z, dtype=float))
    diff = z[:, None] - points[None, :]
    exact = diff == 0.0
    signs = np.where(np.arange(len(points)) % 2 == 0, 1.0, -1.0)
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        terms = signs / diff
        w = terms / terms.sum(axis=1, keepdims=True)
    rows = exact.any(axis=1)
    if rows.any():
        w[rows] = exact[rows].astype(float)
        # several identical nodes are rejected by NodeSet, so one hit per row
    # z within ~1e-308 of a node overflows 1/diff; the nearest node wins there
    bad = ~np.isfinite(w).all(axis=1)
    if bad.any():
        w[bad] = np.eye(len(points))[np.abs(diff[bad]).argmin(axis=1)]
    return w


@dataclass(frozen=True)
class BerrutInterpolant:
    """Berrut rational interpolant through matrix-valued samples."""

    nodes: NodeSet
    samples: np.ndarray

    def __post_init__(self):
        s = np.asarray(self.samples, dtype=float)
        if s.ndim == 1:
            s = s[:, None, None]
        if s.ndim != 3:
            raise ValueError("samples must be a stack of matrices (M, m, n) or scalars (M,)")
        if s.shape[0] != len(self.nodes):
            raise ValueError(f"{s.shape[0]} samples for {len(self.nodes)} nodes")
        s.setflags(write=False)
        object.__setattr__(self, "samples", s)

    @property
    def weights(self) -> np.ndarray:
        return np.where(np.arange(len(self.nodes)) % 2 == 0, 1.0, -1.0)

    def __call__(self, z: float) -> np.ndarray:
        return berrut_eval(self, z)

    def eval_many(self, z: np.ndarray) -> np.ndarray:
        """Evaluate at each point of ``z``; returns shape ``(len(z), m, n)``."""
        w = berrut_weight_matrix(self.nodes.points, z)
        return np.einsum("zj,jmn->zmn", w, self.samples)


def berrut_eval(itp: BerrutInterpolant, z: float) -> np.ndarray:
    w = berrut_weights(itp.nodes.points, float(z))
    if isinstance(w, int):
        return itp.samples[w].copy()
    return np.tensordot(w, itp.samples, axes=1)


def lebesgue_function(points: np.ndarray, z: np.ndarray) -> np.ndarray:
    """Sum of absolute Berrut cardinal functions at each ``z``."""
    return np.abs(berrut_weight_matrix(points, z)).sum(axis=1)


def lebesgue_constant(nodes: NodeSet, grid_resolution: int = 10_001) -> float:
    """Grid estimate of the Lebesgue constant of Berrut's interpolant on [-1, 1]."""
    if len(nodes) < 2:
        raise ValueError("Lebesgue constant needs at least 2 nodes")
    if grid_resolution < 10:
        raise ValueError("grid_resolution must be at least 10")
    z = np.linspace(-1.0, 1.0, grid_resolution)
    z = z[~np.isin(z, nodes.points)]
    return float(lebesgue_function(nodes.points, z).max())
