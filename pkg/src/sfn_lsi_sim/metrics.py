"""Coverage, content-count and spectral-efficiency metrics over SINR fields.

Coverage is the fraction of lattice points whose SINR clears a threshold
(ties count as covered).  Content-count maps count, per point, how many
contents clear the threshold simultaneously.  Spectral efficiency weights
each content's subcarrier rate by the fraction of all cells transmitting it,
so scheme ratios are exact rationals whenever modulation orders are powers
of two.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from sfn_lsi_sim.allocation import (
    ContentPlan,
    SchemeConfig,
    SchemeKind,
    TransmitPlan,
    lsa1_local_contents,
)
from sfn_lsi_sim.errors import ConfigurationError
from sfn_lsi_sim.grid import EvalArea, Grid, GridSpec
from sfn_lsi_sim.sinr import SinrField


@dataclass(frozen=True)
class CoverageReport:
    """Covered fraction per threshold for one scheme/content/area."""

    scheme_label: str
    content_id: int
    area_kind: str
    n_points: int
    thresholds_db: tuple[float, ...]
    fractions: tuple[float, ...]

    def fraction_at(self, threshold_db: float) -> float:
        return self.fractions[self.thresholds_db.index(threshold_db)]

    def percent_at(self, threshold_db: float) -> float:
        return 100.0 * self.fraction_at(threshold_db)


def coverage(
    field: SinrField, thresholds_db: tuple[float, ...] | list[float], scheme: str = ""
) -> CoverageReport:
    """Fraction of sample points with SINR >= threshold, per threshold."""
    if field.values.size == 0:
        raise ValueError("cannot compute coverage of an empty field")
    n = field.values.size
    fractions = tuple(
        np.count_nonzero(field.values >= t) / n for t in thresholds_db
    )
    return CoverageReport(
        scheme_label=scheme or field.scheme_label,
        content_id=field.content_id,
        area_kind=field.area.kind.value,
        n_points=n,
        thresholds_db=tuple(float(t) for t in thresholds_db),
        fractions=fractions,
    )


@dataclass(frozen=True)
class ContentCountMap:
    """Per-point count of contents clearing a threshold, over one lattice.

    ``counts`` is 1-D in sampling order with values 0..m_count.
    """

    scheme_label: str
    threshold_db: float
    area: EvalArea
    m_count: int
    counts: np.ndarray
    shape: tuple[int, int]

    def __post_init__(self):
        self.counts.flags.writeable = False
        if self.counts.min(initial=0) < 0 or self.counts.max(initial=0) > self.m_count:
            raise ValueError("counts must lie in 0..m_count")

    def as_image(self) -> np.ndarray:
        return self.counts.reshape(self.shape)

    def histogram(self) -> tuple[float, ...]:
        """Fraction of points with count exactly k, for k = 0..m_count."""
        n = self.counts.size
        return tuple(
            int(np.count_nonzero(self.counts == k)) / n for k in range(self.m_count + 1)
        )

    def fraction_with_count(self, k: int) -> float:
        return int(np.count_nonzero(self.counts == k)) / self.counts.size

    def fraction_at_least(self, k: int) -> float:
        return int(np.count_nonzero(self.counts >= k)) / self.counts.size

    def mean_count(self) -> float:
        return float(self.counts.mean())


def content_count_map(fields: list[SinrField], threshold_db: float) -> ContentCountMap:
    """Combine one field per content (same scheme, same lattice) into a map."""
    if not fields:
        raise ValueError("content_count_map requires at least one field")
    first = fields[0]
    ids = sorted(f.content_id for f in fields)
    if ids != list(range(1, len(fields) + 1)):
        raise ValueError(f"fields must cover contents 1..M exactly once (got {ids})")
    for f in fields:
        if f.area != first.area or f.shape != first.shape:
            raise ValueError("all fields must share the same sampling lattice")
        if f.scheme_label != first.scheme_label:
            raise ValueError("all fields must come from the same scheme")
    counts = np.zeros(first.values.size, dtype=np.int64)
    for f in sorted(fields, key=lambda f: f.content_id):
        counts += f.values >= threshold_db
    return ContentCountMap(
        scheme_label=first.scheme_label,
        threshold_db=float(threshold_db),
        area=first.area,
        m_count=len(fields),
        counts=counts,
        shape=first.shape,
    )


def bits_per_symbol(mod_order: int) -> int:
    """Exact log2 of the modulation order; orders must be powers of two."""
    if mod_order < 2 or mod_order & (mod_order - 1):
        raise ConfigurationError(
            f"mod_order must be a power of two >= 2 (got {mod_order})"
        )
    return mod_order.bit_length() - 1


def _spec_of(grid: Grid | GridSpec) -> GridSpec:
    return grid.spec if isinstance(grid, Grid) else grid


def scheme_weights(
    scheme: SchemeConfig | SchemeKind, grid: Grid | GridSpec, m_count: int
) -> tuple[Fraction, ...]:
    """Per-content transmitting-cell fractions, over all cells of both LSAs.

    The global content is transmitted everywhere (weight 1).  Under the
    orthogonal scheme each local content is carried by exactly one LSA;
    under power scaling by every cell; under buffer orthogonality by every
    cell except the other LSA's buffer column(s).
    """
    kind = scheme.kind if isinstance(scheme, SchemeConfig) else scheme
    spec = _spec_of(grid)
    n_cells = spec.rows * spec.cols
    n_lsa1 = spec.rows * spec.lsa1_cols
    n_lsa2 = n_cells - n_lsa1
    n_buf_side = spec.rows * spec.buffer_cols_per_side
    lsa1_half = set(lsa1_local_contents(m_count))
    weights = [Fraction(1)]
    for m in range(2, m_count + 1):
        if kind is SchemeKind.OLSI:
            own = n_lsa1 if m in lsa1_half else n_lsa2
            weights.append(Fraction(own, n_cells))
        elif kind is SchemeKind.IMLSI_PS:
            weights.append(Fraction(1))
        else:
            weights.append(Fraction(n_cells - n_buf_side, n_cells))
    return tuple(weights)


def plan_weights(tp: TransmitPlan) -> tuple[Fraction, ...]:
    """Same fractions, counted from a realized plan's active flags."""
    totals = tp.active.sum(axis=0)
    if totals[0] != len(tp.grid.cells):
        raise ValueError("global content must be active in every cell")
    return tuple(Fraction(int(t), int(totals[0])) for t in totals)


def _se_numerator(weights: tuple[Fraction, ...], plan: ContentPlan) -> Fraction:
    return sum(
        (w * plan.subcarriers[j] * bits_per_symbol(plan.mod_order[j])
         for j, w in enumerate(weights)),
        Fraction(0),
    )


def _xi(numerator: Fraction, plan: ContentPlan) -> float:
    total_bw = sum(plan.bandwidth_hz)
    if total_bw <= 0:
        raise ConfigurationError("total bandwidth must be positive")
    return float(numerator) / (plan.t_sym * total_bw)


def spectral_efficiency(
    scheme: SchemeConfig | SchemeKind, grid: Grid | GridSpec, plan: ContentPlan
) -> float:
    """Scheme spectral efficiency in bits/s/Hz.

    xi = sum_m w_m * |S_m| * log2(mu_m) / T_sym, divided by sum_m B_m,
    with w_m the transmitting-cell fraction for content m.
    """
    return _xi(_se_numerator(scheme_weights(scheme, grid, plan.m_count), plan), plan)


def spectral_efficiency_from_plan(tp: TransmitPlan, plan: ContentPlan) -> float:
    """Same quantity, with weights counted from the plan's active flags."""
    return _xi(_se_numerator(plan_weights(tp), plan), plan)


@dataclass(frozen=True)
class SEReport:
    """Spectral efficiencies of the three schemes plus their exact ratios."""

    xi_olsi: float
    xi_ps: float
    xi_imo: float
    ratio_olsi_ps: Fraction
    ratio_olsi_imo: Fraction
    ratio_ps_imo: Fraction


def se_report(grid: Grid | GridSpec, plan: ContentPlan) -> SEReport:
    """SE of all three schemes on one grid/content plan, ratios as Fractions."""
    spec = _spec_of(grid)
    nums = {
        kind: _se_numerator(scheme_weights(kind, spec, plan.m_count), plan)
        for kind in SchemeKind
    }
    return SEReport(
        xi_olsi=_xi(nums[SchemeKind.OLSI], plan),
        xi_ps=_xi(nums[SchemeKind.IMLSI_PS], plan),
        xi_imo=_xi(nums[SchemeKind.IMLSI_O], plan),
        ratio_olsi_ps=nums[SchemeKind.OLSI] / nums[SchemeKind.IMLSI_PS],
        ratio_olsi_imo=nums[SchemeKind.OLSI] / nums[SchemeKind.IMLSI_O],
        ratio_ps_imo=nums[SchemeKind.IMLSI_PS] / nums[SchemeKind.IMLSI_O],
    )


def se_ratio_general(m_count: int) -> Fraction:
    """Orthogonal-to-power-scaling SE ratio for M contents under equal
    bandwidths, subcarrier counts and modulations: (1 + (M-1)/2) / M.

    Each local content is carried by exactly half the cells under the
    orthogonal split, so the ratio is (M+1)/(2M) for every M >= 2 and
    approaches 1/2 from above as M grows.
    """
    if m_count < 2:
        raise ValueError(f"m_count must be >= 2 (got {m_count})")
    return Fraction(m_count + 1, 2 * m_count)
