"""Two-LSA rectangular cell grid with buffer columns.

Cells are squares of side ``isd`` with one omnidirectional tower at the
center of each cell.  Columns ``[0, lsa1_cols)`` belong to LSA1, the rest to
LSA2.  The rightmost LSA1 column(s) form the left buffer (LB), the leftmost
LSA2 column(s) the right buffer (RB).  All data is immutable after
construction and safe for concurrent read.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from sfn_lsi_sim.errors import ConfigurationError

# Propagation models diverge as d -> 0; below tower height the models are
# not valid anyway, so distances are clamped here.
D_MIN_M = 20.0


class Lsa(Enum):
    LSA1 = 1
    LSA2 = 2


class Zone(Enum):
    SFN_INTERIOR = "sfn_interior"
    LEFT_BUFFER = "left_buffer"
    RIGHT_BUFFER = "right_buffer"


class AreaKind(Enum):
    A1 = "A1"
    A2 = "A2"
    CUSTOM = "custom"


@dataclass(frozen=True)
class GridSpec:
    """Geometry of the cell grid and its LSA / buffer split."""

    rows: int = 8
    cols: int = 10
    isd: float = 1700.0
    lsa1_cols: int = 5
    buffer_cols_per_side: int = 1

    def __post_init__(self):
        if self.rows < 1:
            raise ConfigurationError(f"rows must satisfy rows >= 1 (got {self.rows})")
        if self.cols < 2:
            raise ConfigurationError(f"cols must satisfy cols >= 2 (got {self.cols})")
        if not 1 <= self.lsa1_cols < self.cols:
            raise ConfigurationError(
                f"lsa1_cols must satisfy 1 <= lsa1_cols < cols "
                f"(got {self.lsa1_cols}, cols={self.cols})"
            )
        if self.isd <= 0:
            raise ConfigurationError(f"isd must be positive (got {self.isd})")
        max_buffer = min(self.lsa1_cols, self.cols - self.lsa1_cols)
        if not 1 <= self.buffer_cols_per_side <= max_buffer:
            raise ConfigurationError(
                f"buffer_cols_per_side must satisfy 1 <= buffer_cols_per_side <= "
                f"min(lsa1_cols, cols - lsa1_cols) = {max_buffer} "
                f"(got {self.buffer_cols_per_side})"
            )

    @property
    def width_m(self) -> float:
        return self.cols * self.isd

    @property
    def height_m(self) -> float:
        return self.rows * self.isd


@dataclass(frozen=True)
class Cell:
    """One grid cell: location, service-area membership and buffer zone."""

    index: int
    row: int
    col: int
    lsa: Lsa
    zone: Zone
    tower_xy: tuple[float, float]


@dataclass(frozen=True)
class EvalArea:
    """Rectangular evaluation area sampled on a regular lattice.

    ``A1`` covers exactly the LSA1 columns, ``A2`` the whole grid; a CUSTOM
    area carries explicit x/y ranges in meters.  ``resolution`` is the number
    of samples per cell edge, so each cell footprint holds resolution^2
    points.
    """

    kind: AreaKind
    x_range: tuple[float, float] | None = None
    y_range: tuple[float, float] | None = None
    resolution: int = 10

    def __post_init__(self):
        if self.resolution < 1:
            raise ConfigurationError(
                f"resolution must satisfy resolution >= 1 (got {self.resolution})"
            )
        if self.kind is AreaKind.CUSTOM and (self.x_range is None or self.y_range is None):
            raise ConfigurationError("CUSTOM area requires explicit x_range and y_range")

    def bounds(self, spec: GridSpec) -> tuple[tuple[float, float], tuple[float, float]]:
        """Concrete (x_range, y_range) in meters for this area on ``spec``."""
        if self.kind is AreaKind.A1:
            return (0.0, spec.lsa1_cols * spec.isd), (0.0, spec.height_m)
        if self.kind is AreaKind.A2:
            return (0.0, spec.width_m), (0.0, spec.height_m)
        return self.x_range, self.y_range


def build_grid(spec: GridSpec) -> list[Cell]:
    """Build the rows x cols cell list, row-major, indices dense from 0."""
    lb_lo = spec.lsa1_cols - spec.buffer_cols_per_side
    rb_hi = spec.lsa1_cols + spec.buffer_cols_per_side
    cells = []
    for row in range(spec.rows):
        for col in range(spec.cols):
            lsa = Lsa.LSA1 if col < spec.lsa1_cols else Lsa.LSA2
            if lb_lo <= col < spec.lsa1_cols:
                zone = Zone.LEFT_BUFFER
            elif spec.lsa1_cols <= col < rb_hi:
                zone = Zone.RIGHT_BUFFER
            else:
                zone = Zone.SFN_INTERIOR
            cells.append(
                Cell(
                    index=row * spec.cols + col,
                    row=row,
                    col=col,
                    lsa=lsa,
                    zone=zone,
                    tower_xy=((col + 0.5) * spec.isd, (row + 0.5) * spec.isd),
                )
            )
    return cells


@dataclass(frozen=True)
class Grid:
    """A GridSpec together with its built cells, plus membership queries."""

    spec: GridSpec
    cells: tuple[Cell, ...]

    @classmethod
    def from_spec(cls, spec: GridSpec) -> "Grid":
        return cls(spec=spec, cells=tuple(build_grid(spec)))

    def cells_in_lsa(self, lsa: Lsa) -> list[Cell]:
        return [c for c in self.cells if c.lsa is lsa]

    def cells_in_zone(self, zone: Zone) -> list[Cell]:
        return [c for c in self.cells if c.zone is zone]

    def buffer_cells(self) -> list[Cell]:
        return [c for c in self.cells if c.zone is not Zone.SFN_INTERIOR]

    def towers(self) -> np.ndarray:
        """Tower coordinates, shape (n_cells, 2), in cell-index order."""
        return np.array([c.tower_xy for c in self.cells], dtype=float)

    def lsa1_mask(self) -> np.ndarray:
        return np.array([c.lsa is Lsa.LSA1 for c in self.cells], dtype=bool)


def lsa_of_points(points: np.ndarray, spec: GridSpec) -> np.ndarray:
    """Boolean mask, True where a point lies in an LSA1 column.

    Membership is geometric: the LSA of the column containing the point.
    Points outside the grid snap to the nearest column.
    """
    pts = np.asarray(points, dtype=float)
    col = np.clip(np.floor(pts[..., 0] / spec.isd), 0, spec.cols - 1)
    return col < spec.lsa1_cols


def sample_points(area: EvalArea, spec: GridSpec) -> np.ndarray:
    """Deterministic row-major lattice over ``area``, shape (n, 2).

    Each cell footprint receives resolution^2 points placed at sub-square
    midpoints, so a one-cell area at resolution 1 samples the cell center.
    The ordering never depends on how the evaluation is parallelized.
    """
    (ny, nx), (x0, x1), (y0, y1) = _lattice(area, spec)
    xs = x0 + (np.arange(nx) + 0.5) * (x1 - x0) / nx
    ys = y0 + (np.arange(ny) + 0.5) * (y1 - y0) / ny
    gx, gy = np.meshgrid(xs, ys)  # row-major: y varies slowest
    return np.column_stack([gx.ravel(), gy.ravel()])


def sample_shape(area: EvalArea, spec: GridSpec) -> tuple[int, int]:
    """(ny, nx) lattice shape matching ``sample_points`` ordering."""
    return _lattice(area, spec)[0]


def _lattice(area, spec):
    (x0, x1), (y0, y1) = area.bounds(spec)
    nx = int(round((x1 - x0) / spec.isd * area.resolution))
    ny = int(round((y1 - y0) / spec.isd * area.resolution))
    if nx < 1 or ny < 1:
        raise ConfigurationError(
            f"evaluation area is empty: x_range={x0, x1}, y_range={y0, y1} "
            f"at resolution {area.resolution}"
        )
    return (ny, nx), (x0, x1), (y0, y1)


def distance(tower_xy, point, d_min: float = D_MIN_M) -> float:
    """2-D Euclidean tower-to-point distance, clamped below by ``d_min``."""
    d = math.hypot(point[0] - tower_xy[0], point[1] - tower_xy[1])
    return max(d, d_min)
