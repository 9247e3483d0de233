"""Brute-force SINR reference for cross-checking the vectorized engine.

Everything here is computed with plain Python floats, explicit loops and
math.fsum: tower positions from row/column arithmetic, both path-loss
formulas inlined, signal/interference split by column index.  It shares no
numerics with the engine on purpose; keep it dumb.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import product

import numpy as np

from sfn_lsi_sim.allocation import ContentPlan, SchemeConfig, SchemeKind, TransmitPlan, allocate
from sfn_lsi_sim.grid import Grid, GridSpec
from sfn_lsi_sim.propagation import HataEnvironment, PathLossKind, PathLossModel
from sfn_lsi_sim.sinr import RadioEnv, sinr_at


def _oracle_gain(model: PathLossModel, d_m: float) -> float:
    if model.kind is PathLossKind.POWER_LAW:
        return d_m ** (-model.eta)
    log_f = math.log10(model.f_mhz)
    a_hm = (1.1 * log_f - 0.7) * model.hm_m - (1.56 * log_f - 0.8)
    loss_db = (
        69.55
        + 26.16 * log_f
        - 13.82 * math.log10(model.hb_m)
        - a_hm
        + (44.9 - 6.55 * math.log10(model.hb_m)) * math.log10(d_m / 1000.0)
    )
    return 10.0 ** (-loss_db / 10.0)


def oracle_sinr(
    point: tuple[float, float],
    content_id: int,
    tp: TransmitPlan,
    env: RadioEnv,
    plan: ContentPlan,
) -> float:
    """Linear SINR at one point, summed cell by cell with math.fsum."""
    spec = tp.grid.spec
    px, py = point
    point_in_lsa1 = px < spec.lsa1_cols * spec.isd
    own_terms: list[float] = []
    other_terms: list[float] = []
    for row in range(spec.rows):
        for col in range(spec.cols):
            index = row * spec.cols + col
            tx = (col + 0.5) * spec.isd
            ty = (row + 0.5) * spec.isd
            d = math.hypot(tx - px, ty - py)
            if d < 20.0:
                d = 20.0
            p = float(tp.power[index, content_id - 1])
            term = p * _oracle_gain(env.pathloss, d)
            cell_in_lsa1 = col < spec.lsa1_cols
            if content_id == 1 or cell_in_lsa1 == point_in_lsa1:
                own_terms.append(term)
            else:
                other_terms.append(term)
    noise = env.n0 * plan.bandwidth_hz[content_id - 1]
    return math.fsum(own_terms) / (math.fsum(other_terms) + noise)


@dataclass(frozen=True)
class OracleCase:
    """Outcome of one engine-vs-oracle comparison sweep."""

    rows: int
    cols: int
    lsa1_cols: int
    m_count: int
    scheme: str
    model: str
    n_points: int
    max_rel_err: float

    @property
    def ok(self) -> bool:
        return self.max_rel_err <= 1e-9


_GRID_SHAPES = ((1, 2, 1), (1, 3, 2), (1, 4, 2), (2, 2, 1), (2, 3, 2), (2, 4, 2))
_BETAS = (0.0, 0.25, 0.5, 1.0)


def _content_plan(m_count: int) -> ContentPlan:
    powers = {2: ((24.0, 16.0), (24.0, 12.0)), 3: ((18.0, 13.0, 9.0), (18.0, 10.0, 12.0))}
    base, prime = powers[m_count]
    return ContentPlan(
        m_count=m_count,
        bandwidth_hz=(2.4e6,) * m_count,
        subcarriers=(1200,) * m_count,
        mod_order=(64,) * m_count,
        t_sym=1e-3,
        base_power=base,
        base_power_prime=prime,
    )


def _scheme_configs() -> list[SchemeConfig]:
    configs = [SchemeConfig(SchemeKind.OLSI)]
    for beta in _BETAS:
        configs.append(SchemeConfig(SchemeKind.IMLSI_PS, beta=beta))
        configs.append(SchemeConfig(SchemeKind.IMLSI_O, beta=beta))
    return configs


def run_oracle_suite(n_points: int = 50, seed: int = 20260814) -> list[OracleCase]:
    """Compare engine SINR to the brute-force reference on small grids.

    Covers every grid up to 2x4 cells, M in {2, 3}, all schemes with
    beta in {0, 0.25, 0.5, 1}, both path-loss models, at ``n_points``
    uniformly random receiver points per case.
    """
    models = (
        PathLossModel(kind=PathLossKind.POWER_LAW, eta=3.5),
        PathLossModel(kind=PathLossKind.HATA, f_mhz=700.0, hb_m=30.0, hm_m=1.5,
                      environment=HataEnvironment.URBAN_SMALL_MEDIUM),
    )
    rng = np.random.default_rng(seed)
    cases: list[OracleCase] = []
    for (rows, cols, lsa1_cols), m_count, model in product(_GRID_SHAPES, (2, 3), models):
        spec = GridSpec(rows=rows, cols=cols, lsa1_cols=lsa1_cols, buffer_cols_per_side=1)
        grid = Grid.from_spec(spec)
        plan = _content_plan(m_count)
        env = RadioEnv(n0=4e-21, pathloss=model)
        points = np.column_stack(
            (rng.uniform(0.0, cols * spec.isd, n_points),
             rng.uniform(0.0, rows * spec.isd, n_points))
        )
        for scheme in _scheme_configs():
            tp = allocate(grid, plan, scheme)
            worst = 0.0
            for px, py in points:
                for content_id in plan.content_ids:
                    expected = oracle_sinr((px, py), content_id, tp, env, plan)
                    got = sinr_at((px, py), content_id, tp, env, plan).linear
                    if expected == 0.0:
                        err = 0.0 if got == 0.0 else math.inf
                    else:
                        err = abs(got - expected) / abs(expected)
                    if err > worst:
                        worst = err
            cases.append(
                OracleCase(
                    rows=rows, cols=cols, lsa1_cols=lsa1_cols, m_count=m_count,
                    scheme=scheme.label, model=model.kind.value,
                    n_points=n_points, max_rel_err=worst,
                )
            )
    return cases
