"""Positive-weight quadrature grids on the unit sphere.

The grid is a Gauss-Legendre x uniform-azimuth product rule: ``order`` polar
rings at the Legendre nodes of cos(theta) and ``2 * order`` equispaced
azimuths per ring. Weights are strictly positive and sum to 4 pi to machine
precision, and the rule integrates spherical harmonics exactly up to degree
min(2 * order - 1, 2 * order - 1) in the polar index. Points are stored
ring-major (slow index: ring from the +z pole outward), which the cone
profile code relies on.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = ["DirectionGrid", "build_direction_grid"]

FOUR_PI = 4.0 * math.pi


@dataclass(frozen=True)
class DirectionGrid:
    """Unit vectors and quadrature weights on S^2."""

    vectors: np.ndarray  # (N, 3) unit vectors, ring-major
    weights: np.ndarray  # (N,), positive, sum = 4 pi
    polar_angles: np.ndarray  # (n_rings,) theta of each ring, ascending
    azimuth_count: int
    order: int

    @property
    def size(self) -> int:
        return self.vectors.shape[0]

    def integrate(self, values: np.ndarray) -> float | complex:
        """Quadrature sum of a sampled field."""
        return np.asarray(values) @ self.weights

    def ring_values(self, values: np.ndarray) -> np.ndarray:
        """Per-ring azimuthal means of a sampled field, ring order."""
        return np.asarray(values).reshape(len(self.polar_angles), self.azimuth_count).mean(axis=1)


def build_direction_grid(order: int) -> DirectionGrid:
    """Build the product grid with ``order`` rings and ``2*order`` azimuths."""
    if order < 2:
        raise ValueError("grid order must be at least 2")
    x, w = np.polynomial.legendre.leggauss(order)
    # leggauss returns ascending cos(theta); flip so theta ascends from +z
    theta = np.arccos(x[::-1])
    wpol = w[::-1]
    m = 2 * order
    phi = 2.0 * math.pi * np.arange(m) / m
    st, ct = np.sin(theta), np.cos(theta)
    vecs = np.empty((order, m, 3))
    vecs[..., 0] = st[:, None] * np.cos(phi)[None, :]
    vecs[..., 1] = st[:, None] * np.sin(phi)[None, :]
    vecs[..., 2] = ct[:, None] * np.ones(m)[None, :]
    weights = np.repeat(wpol * (2.0 * math.pi / m), m)
    return DirectionGrid(
        vectors=vecs.reshape(-1, 3),
        weights=weights,
        polar_angles=theta,
        azimuth_count=m,
        order=order,
    )
