"""Per-content SINR evaluation over the cell grid.

For a receiver point and content m, every cell of the point's own LSA that
transmits content m contributes signal, and every cell of the other LSA that
transmits the same subcarriers contributes interference.  The global content
is carried synchronously by all cells, so it sees no cross-LSA interference,
only noise.  SINR is evaluated on midpoint sampling lattices; evaluation
order and chunking are fixed so results are identical regardless of the
worker count.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from sfn_lsi_sim.allocation import ContentPlan, TransmitPlan
from sfn_lsi_sim.errors import ConfigurationError
from sfn_lsi_sim.grid import (
    D_MIN_M,
    EvalArea,
    Grid,
    GridSpec,
    lsa_of_points,
    sample_points,
    sample_shape,
)
from sfn_lsi_sim.propagation import PathLossModel, gain

SINR_FLOOR_DB = -400.0
"""dB value reported when the received signal power is exactly zero."""

_CHUNK = 16384
"""Points per evaluation chunk; fixed so chunk boundaries never depend on
the worker count."""


@dataclass(frozen=True)
class RadioEnv:
    """Receiver-side radio constants: noise PSD (W/Hz) and path-loss model."""

    n0: float
    pathloss: PathLossModel

    def __post_init__(self):
        if self.n0 <= 0:
            raise ConfigurationError(f"n0 must be positive (got {self.n0})")


class SinrValue(NamedTuple):
    linear: float
    db: float


@dataclass(frozen=True)
class SinrField:
    """SINR in dB at every lattice point of an evaluation area.

    ``values`` is 1-D in sampling order (rows of constant y, increasing x,
    bottom row first); ``shape`` is (ny, nx).  All values are finite: points
    with zero received signal carry ``SINR_FLOOR_DB``.
    """

    content_id: int
    scheme_label: str
    area: EvalArea
    values: np.ndarray
    shape: tuple[int, int]

    def __post_init__(self):
        self.values.flags.writeable = False
        if self.values.ndim != 1 or self.values.size != self.shape[0] * self.shape[1]:
            raise ValueError(
                f"values length {self.values.size} does not match shape {self.shape}"
            )
        if not np.isfinite(self.values).all():
            raise ValueError("SINR field contains non-finite values")

    def as_image(self) -> np.ndarray:
        """(ny, nx) view, row index increasing with y."""
        return self.values.reshape(self.shape)


def _db(linear: np.ndarray) -> np.ndarray:
    out = np.full(linear.shape, SINR_FLOOR_DB)
    pos = linear > 0.0
    np.log10(linear, out=out, where=pos)
    out[pos] *= 10.0
    return out


class SinrEvaluator:
    """Evaluates SINR fields for one grid and radio environment.

    Tower-to-point gain matrices are cached per evaluation area so that all
    contents and all transmit plans on the same grid reuse them.  ``workers``
    sets the thread count for chunked evaluation; chunk boundaries and the
    per-chunk reductions are identical for any worker count.
    """

    def __init__(self, grid: Grid, env: RadioEnv, workers: int | None = None):
        self.grid = grid
        self.env = env
        if workers is None:
            workers = int(os.environ.get("SFN_LSI_THREADS", "1"))
        self.workers = max(1, workers)
        self._towers = grid.towers()
        self._lsa1_rows = grid.lsa1_mask()
        self._gains: dict[EvalArea, np.ndarray] = {}
        self._lattices: dict[EvalArea, tuple[np.ndarray, np.ndarray]] = {}

    def _lattice(self, area: EvalArea) -> tuple[np.ndarray, np.ndarray]:
        cached = self._lattices.get(area)
        if cached is None:
            points = sample_points(area, self.grid.spec)
            in_lsa1 = lsa_of_points(points, self.grid.spec)
            cached = (points, in_lsa1)
            self._lattices[area] = cached
        return cached

    def _run_chunks(self, n: int, fn) -> None:
        spans = [(lo, min(lo + _CHUNK, n)) for lo in range(0, n, _CHUNK)]
        if self.workers == 1 or len(spans) == 1:
            for lo, hi in spans:
                fn(lo, hi)
            return
        with ThreadPoolExecutor(max_workers=self.workers) as pool:
            for future in [pool.submit(fn, lo, hi) for lo, hi in spans]:
                future.result()

    def gains_for(self, area: EvalArea) -> np.ndarray:
        """(n_cells, n_points) channel gain matrix for the area's lattice."""
        cached = self._gains.get(area)
        if cached is not None:
            return cached
        points, _ = self._lattice(area)
        n = points.shape[0]
        g = np.empty((self._towers.shape[0], n))

        def fill(lo: int, hi: int) -> None:
            dx = self._towers[:, 0:1] - points[lo:hi, 0]
            dy = self._towers[:, 1:2] - points[lo:hi, 1]
            d = np.hypot(dx, dy)
            np.maximum(d, D_MIN_M, out=d)
            g[:, lo:hi] = gain(self.env.pathloss, d)

        self._run_chunks(n, fill)
        g.flags.writeable = False
        self._gains[area] = g
        return g

    def field(
        self, area: EvalArea, content_id: int, tp: TransmitPlan, plan: ContentPlan
    ) -> SinrField:
        if not 1 <= content_id <= plan.m_count:
            raise ValueError(f"content_id must be in 1..{plan.m_count} (got {content_id})")
        if tp.grid.spec != self.grid.spec:
            raise ConfigurationError("transmit plan was allocated on a different grid")
        g = self.gains_for(area)
        n = g.shape[1]
        p = tp.power[:, content_id - 1]
        noise = self.env.n0 * plan.bandwidth_of(content_id)
        lin = np.empty(n)
        if content_id == 1:
            def reduce_chunk(lo: int, hi: int) -> None:
                total = (p[:, None] * g[:, lo:hi]).sum(axis=0)
                lin[lo:hi] = total / noise
        else:
            _, in_lsa1 = self._lattice(area)
            p1 = p[self._lsa1_rows]
            p2 = p[~self._lsa1_rows]
            g1_rows = self._lsa1_rows

            def reduce_chunk(lo: int, hi: int) -> None:
                from1 = (p1[:, None] * g[g1_rows, lo:hi]).sum(axis=0)
                from2 = (p2[:, None] * g[~g1_rows, lo:hi]).sum(axis=0)
                own = np.where(in_lsa1[lo:hi], from1, from2)
                other = np.where(in_lsa1[lo:hi], from2, from1)
                lin[lo:hi] = own / (other + noise)
        self._run_chunks(n, reduce_chunk)
        return SinrField(
            content_id=content_id,
            scheme_label=tp.scheme.label,
            area=area,
            values=_db(lin),
            shape=sample_shape(area, self.grid.spec),
        )


def sinr_at(
    point: tuple[float, float],
    content_id: int,
    tp: TransmitPlan,
    env: RadioEnv,
    plan: ContentPlan,
) -> SinrValue:
    """SINR at a single receiver point, as (linear, dB)."""
    if not 1 <= content_id <= plan.m_count:
        raise ValueError(f"content_id must be in 1..{plan.m_count} (got {content_id})")
    spec = tp.grid.spec
    towers = tp.grid.towers()
    d = np.hypot(towers[:, 0] - point[0], towers[:, 1] - point[1])
    np.maximum(d, D_MIN_M, out=d)
    g = gain(env.pathloss, d)
    p = tp.power[:, content_id - 1]
    noise = env.n0 * plan.bandwidth_of(content_id)
    if content_id == 1:
        lin = float((p * g).sum() / noise)
    else:
        lsa1_rows = tp.grid.lsa1_mask()
        from1 = float((p[lsa1_rows] * g[lsa1_rows]).sum())
        from2 = float((p[~lsa1_rows] * g[~lsa1_rows]).sum())
        if bool(lsa_of_points(np.asarray([point]), spec)[0]):
            own, other = from1, from2
        else:
            own, other = from2, from1
        lin = own / (other + noise)
    db = 10.0 * np.log10(lin) if lin > 0.0 else SINR_FLOOR_DB
    return SinrValue(linear=lin, db=float(db))


def sinr_field(
    area: EvalArea,
    content_id: int,
    tp: TransmitPlan,
    env: RadioEnv,
    plan: ContentPlan,
    spec: GridSpec | None = None,
    workers: int | None = None,
) -> SinrField:
    """One-shot field evaluation; ``spec``, if given, must match the plan's grid."""
    if spec is not None and spec != tp.grid.spec:
        raise ConfigurationError("spec does not match the transmit plan's grid")
    return SinrEvaluator(tp.grid, env, workers=workers).field(area, content_id, tp, plan)
