"""Graded velocity grids on truncated half-intervals.

A half-grid carries quadrature nodes and weights for one sign of the
velocity variable, |v| in (v_min, 1).  Panels are placed by the map
u -> v_min + (1 - v_min) * u**q on a uniform partition of [0, 1], so node
density increases toward the truncation threshold, where kernels vanish
and the transfer-operator exponentials oscillate.  Each panel carries a
fixed-order Gauss-Legendre rule.

All weighted L^1 norms in the package are plain weighted sums over these
nodes; the truncation v_min > 0 keeps every |v|^-j moment finite.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import GridMismatchError, ParameterError

DEFAULT_V_MIN = 1e-4
DEFAULT_GRADING = 3.0
PANEL_ORDER = 8


@dataclass(frozen=True)
class HalfGrid:
    """Quadrature grid on one velocity half-interval.

    nodes are signed velocities ordered by increasing |v|; speeds is the
    matching |v| array.  weights are positive and sum to (1 - v_min).
    """

    sign: int
    nodes: np.ndarray
    weights: np.ndarray
    v_min: float
    grading_q: float
    panel_edges: np.ndarray = field(repr=False, default=None)

    @property
    def n(self) -> int:
        return self.nodes.size

    @property
    def speeds(self) -> np.ndarray:
        return np.abs(self.nodes)

    def mirror(self) -> "HalfGrid":
        """Node-wise reflection onto the opposite half, identical weights."""
        return HalfGrid(
            sign=-self.sign,
            nodes=-self.nodes,
            weights=self.weights,
            v_min=self.v_min,
            grading_q=self.grading_q,
            panel_edges=self.panel_edges,
        )

    def is_mirror_of(self, other: "HalfGrid") -> bool:
        return (
            self.sign == -other.sign
            and self.n == other.n
            and np.array_equal(self.speeds, other.speeds)
            and np.array_equal(self.weights, other.weights)
        )


@dataclass(frozen=True)
class HalfGridVector:
    """Scalar values (real or complex) sampled on a half-grid."""

    grid: HalfGrid
    values: np.ndarray

    def __post_init__(self):
        if self.values.shape != (self.grid.n,):
            raise GridMismatchError(
                f"vector length {self.values.shape} does not match grid n={self.grid.n}"
            )

    def integral(self) -> complex:
        return np.sum(self.grid.weights * self.values)


def build_grid(sign, n, v_min=DEFAULT_V_MIN, grading_q=DEFAULT_GRADING, order=PANEL_ORDER):
    """Build a graded half-grid with ~n nodes on sign*(v_min, 1).

    n is rounded up to a whole number of panels of the given Gauss order
    (panels of lower order are used when n < order).
    """
    if n < 2:
        raise ParameterError(f"need n >= 2 nodes, got {n}")
    if not 0.0 < v_min < 1.0:
        raise ParameterError(f"v_min must lie in (0, 1), got {v_min}")
    if grading_q < 1.0:
        raise ParameterError(f"grading_q must be >= 1, got {grading_q}")
    if sign not in (+1, -1):
        raise ParameterError(f"sign must be +1 or -1, got {sign!r}")

    order = min(order, n)
    panels = -(-n // order)  # ceil division
    u = np.linspace(0.0, 1.0, panels + 1)
    edges = v_min + (1.0 - v_min) * u**grading_q
    xg, wg = np.polynomial.legendre.leggauss(order)

    mid = 0.5 * (edges[1:] + edges[:-1])
    half = 0.5 * (edges[1:] - edges[:-1])
    speeds = (mid[:, None] + half[:, None] * xg[None, :]).ravel()
    weights = (half[:, None] * wg[None, :]).ravel()

    return HalfGrid(
        sign=sign,
        nodes=sign * speeds,
        weights=weights,
        v_min=v_min,
        grading_q=float(grading_q),
        panel_edges=edges,
    )


def weighted_norm(f: HalfGridVector, j: int = 0) -> float:
    """L^1(|v|^-j dv) norm of a half-grid vector: sum_i w_i |f_i| / |v_i|^j."""
    if j < 0:
        raise ParameterError(f"weight exponent must be >= 0, got {j}")
    g = f.grid
    return float(np.sum(g.weights * np.abs(f.values) / g.speeds**j))


def grid_integrate(grid: HalfGrid, values: np.ndarray) -> complex:
    """Plain quadrature sum over the grid."""
    return np.sum(grid.weights * values)
