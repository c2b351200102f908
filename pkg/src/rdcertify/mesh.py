"""1-D uniform grid with no-flux (homogeneous Neumann) boundaries.

A grid places n_nodes nodes at x_j = j*h on the interval [0, length],
h = length/(n_nodes - 1).  Fields are float64 arrays with one value per
node.  The discrete Laplacian is the three-point stencil closed at both
ends by ghost-node reflection (ghost[-1] = f[1], ghost[n] = f[n-2]), so
the endpoints see 2*(f[1] - f[0])/h^2 and 2*(f[n-2] - f[n-1])/h^2.  With
trapezoid quadrature this makes the discrete flux balance exact: the
integral of any Laplacian is zero to round-off.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class Grid:
    """Uniform node-centered grid on [0, length]."""

    n_nodes: int
    length: float

    def __post_init__(self):
        if self.n_nodes < 3:
            raise ValueError(f"n_nodes must be >= 3, got {self.n_nodes}")
        if not self.length > 0:
            raise ValueError(f"length must be > 0, got {self.length}")

    @property
    def spacing(self) -> float:
        return self.length / (self.n_nodes - 1)

    def nodes(self) -> np.ndarray:
        """Node coordinates x_j = j*spacing."""
        return np.linspace(0.0, self.length, self.n_nodes)


def as_field(values, grid: Grid) -> np.ndarray:
    """Coerce to a float64 nodal array and check it matches the grid."""
    f = np.asarray(values, dtype=float)
    if f.shape != (grid.n_nodes,):
        raise ValueError(
            f"field has shape {f.shape}, expected ({grid.n_nodes},)"
        )
    return f


def laplacian(f, grid: Grid) -> np.ndarray:
    """Three-point Laplacian with reflected ghost nodes at both ends."""
    f = as_field(f, grid)
    h2 = grid.spacing ** 2
    out = np.empty_like(f)
    out[1:-1] = (f[:-2] - 2.0 * f[1:-1] + f[2:]) / h2
    out[0] = 2.0 * (f[1] - f[0]) / h2
    out[-1] = 2.0 * (f[-2] - f[-1]) / h2
    return out


def sup_norm(f) -> float:
    """Maximum absolute nodal value (discrete L-infinity norm)."""
    return float(np.max(np.abs(np.asarray(f, dtype=float))))


def trapezoid_weights(grid: Grid) -> np.ndarray:
    """Quadrature weights: h/2 at the ends, h inside."""
    w = np.full(grid.n_nodes, grid.spacing)
    w[0] *= 0.5
    w[-1] *= 0.5
    return w


def integrate(f, grid: Grid) -> float:
    """Trapezoid-rule integral of a nodal field over [0, length]."""
    f = as_field(f, grid)
    h = grid.spacing
    return float(h * (0.5 * (f[0] + f[-1]) + f[1:-1].sum()))
