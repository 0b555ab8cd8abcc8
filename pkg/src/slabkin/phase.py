"""Phase-space densities on the tensor grid (-a, a) x (-1, 1).

Values are sampled at uniform x nodes (wall points included, so traces
can be read off the grid) times the two velocity half-grids.  The x
quadrature is the trapezoid rule, consistent with the piecewise-linear
data model used throughout the resolvent and evolution code.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import GridMismatchError, ParameterError
from .vgrid import HalfGrid


def x_nodes(a: float, n_x: int) -> np.ndarray:
    if n_x < 3:
        raise ParameterError(f"need n_x >= 3 spatial nodes, got {n_x}")
    return np.linspace(-a, a, n_x)


def trapezoid_weights(x: np.ndarray) -> np.ndarray:
    w = np.full(x.size, x[1] - x[0])
    w[0] *= 0.5
    w[-1] *= 0.5
    return w


@dataclass
class PhaseDensity:
    """f(x, v) sampled on x nodes times mirror velocity half-grids.

    pos[i, j] = f(x_i, +speeds[j]); neg[i, j] = f(x_i, -speeds[j]).
    """

    x: np.ndarray
    pos_grid: HalfGrid
    neg_grid: HalfGrid
    pos: np.ndarray
    neg: np.ndarray
    wx: np.ndarray = field(repr=False, default=None)

    def __post_init__(self):
        if not self.pos_grid.is_mirror_of(self.neg_grid):
            raise GridMismatchError("pos/neg grids must be mirrors")
        shape = (self.x.size, self.pos_grid.n)
        if self.pos.shape != shape or self.neg.shape != shape:
            raise GridMismatchError(
                f"value arrays must have shape {shape}, got {self.pos.shape}/{self.neg.shape}"
            )
        if self.wx is None:
            self.wx = trapezoid_weights(self.x)

    # -- constructors -------------------------------------------------------

    @classmethod
    def from_function(cls, fn, x, pos_grid, neg_grid):
        """Sample f(x, v) given as a vectorized callable fn(x, v)."""
        xx = x[:, None]
        return cls(
            x=x,
            pos_grid=pos_grid,
            neg_grid=neg_grid,
            pos=np.asarray(fn(xx, pos_grid.nodes[None, :]), dtype=float) + np.zeros((x.size, pos_grid.n)),
            neg=np.asarray(fn(xx, neg_grid.nodes[None, :]), dtype=float) + np.zeros((x.size, pos_grid.n)),
        )

    @classmethod
    def zeros(cls, x, pos_grid, neg_grid, dtype=float):
        shape = (x.size, pos_grid.n)
        return cls(x, pos_grid, neg_grid, np.zeros(shape, dtype), np.zeros(shape, dtype))

    def copy(self) -> "PhaseDensity":
        return PhaseDensity(self.x, self.pos_grid, self.neg_grid,
                            self.pos.copy(), self.neg.copy(), self.wx)

    # -- algebra ------------------------------------------------------------

    def scaled(self, c) -> "PhaseDensity":
        return PhaseDensity(self.x, self.pos_grid, self.neg_grid,
                            c * self.pos, c * self.neg, self.wx)

    def minus(self, other: "PhaseDensity") -> "PhaseDensity":
        self._check_same(other)
        return PhaseDensity(self.x, self.pos_grid, self.neg_grid,
                            self.pos - other.pos, self.neg - other.neg, self.wx)

    def plus(self, other: "PhaseDensity") -> "PhaseDensity":
        self._check_same(other)
        return PhaseDensity(self.x, self.pos_grid, self.neg_grid,
                            self.pos + other.pos, self.neg + other.neg, self.wx)

    def _check_same(self, other):
        if self.x.size != other.x.size or self.pos_grid.n != other.pos_grid.n:
            raise GridMismatchError("phase densities live on different grids")

    # -- functionals ---------------------------------------------------------

    def mass(self) -> complex:
        """Signed integral over the whole phase space."""
        wv = self.pos_grid.weights
        tot = self.wx @ self.pos @ wv + self.wx @ self.neg @ wv
        return complex(tot) if np.iscomplexobj(self.pos) else float(tot)

    def l1_norm(self) -> float:
        wv = self.pos_grid.weights
        return float(self.wx @ np.abs(self.pos) @ wv + self.wx @ np.abs(self.neg) @ wv)

    def weighted_l1(self, j: int) -> float:
        """Norm with velocity weight |v|^-j (the space Z uses j = k+1)."""
        wv = self.pos_grid.weights / self.pos_grid.speeds**j
        return float(self.wx @ np.abs(self.pos) @ wv + self.wx @ np.abs(self.neg) @ wv)

    # -- traces --------------------------------------------------------------

    def trace_flux(self, wall: str):
        """Wall fluxes |v| f(wall, v) split by sign, read off the grid.

        Returns (outgoing, incoming) value arrays for the given wall:
        at the left wall outgoing means v > 0, at the right wall v < 0.
        """
        i = 0 if wall == "left" else -1
        sp = self.pos_grid.speeds
        if wall == "left":
            return sp * self.pos[i], sp * self.neg[i]
        return sp * self.neg[i], sp * self.pos[i]
