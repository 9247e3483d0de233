"""SINR engine tests: point/field agreement, floors, determinism."""

from __future__ import annotations

import numpy as np
import pytest

from sfn_lsi_sim.allocation import ContentPlan, SchemeConfig, SchemeKind, allocate
from sfn_lsi_sim.errors import ConfigurationError
from sfn_lsi_sim.grid import AreaKind, EvalArea, Grid, GridSpec, sample_points
from sfn_lsi_sim.propagation import PathLossKind, PathLossModel
from sfn_lsi_sim.sinr import (
    SINR_FLOOR_DB,
    RadioEnv,
    SinrEvaluator,
    sinr_at,
    sinr_field,
)


def make_env(kind=PathLossKind.POWER_LAW) -> RadioEnv:
    return RadioEnv(n0=4e-21, pathloss=PathLossModel(kind=kind, eta=3.5))


def make_setup(scheme=None, m_count=3, spec=None):
    spec = spec or GridSpec()
    grid = Grid.from_spec(spec)
    plan = ContentPlan.equal_split(m_count, 40.0, m_count * 2.4e6)
    scheme = scheme or SchemeConfig(SchemeKind.IMLSI_PS, beta=0.5)
    return grid, plan, allocate(grid, plan, scheme)


class TestRadioEnv:
    def test_noise_must_be_positive(self):
        with pytest.raises(ConfigurationError, match="n0"):
            RadioEnv(n0=0.0, pathloss=PathLossModel())


class TestSinrAt:
    def test_global_content_has_no_interference(self):
        grid, plan, tp = make_setup()
        env = make_env()
        # with equal powers everywhere the global SINR is signal over noise only,
        # so it must exceed any single local content's SINR at every point
        for point in [(850.0, 850.0), (8000.0, 6800.0), (16000.0, 1000.0)]:
            g1 = sinr_at(point, 1, tp, env, plan)
            g2 = sinr_at(point, 2, tp, env, plan)
            assert g1.linear > g2.linear

    def test_db_matches_linear(self):
        grid, plan, tp = make_setup()
        env = make_env()
        value = sinr_at((4000.0, 4000.0), 2, tp, env, plan)
        assert value.db == pytest.approx(10 * np.log10(value.linear), abs=1e-12)

    def test_zero_signal_reports_floor(self):
        # under the orthogonal scheme a point in LSA1 has no serving cell for
        # the other LSA's local content
        grid, plan, tp = make_setup(SchemeConfig(SchemeKind.OLSI))
        env = make_env()
        value = sinr_at((850.0, 850.0), 3, tp, env, plan)
        assert value.linear == 0.0
        assert value.db == SINR_FLOOR_DB

    def test_content_id_bounds(self):
        grid, plan, tp = make_setup()
        with pytest.raises(ValueError, match="content_id"):
            sinr_at((0.0, 0.0), 4, tp, make_env(), plan)

    def test_symmetry_of_mirror_points(self):
        # reuse-1 with equal powers: the grid is mirror-symmetric about the
        # LSA boundary, so content 2 at x equals content 3 at width-x
        grid, plan, tp = make_setup(SchemeConfig(SchemeKind.IMLSI_PS, beta=1.0))
        env = make_env()
        width = grid.spec.width_m
        for x, y in [(850.0, 850.0), (4000.0, 5000.0), (8200.0, 12000.0)]:
            left = sinr_at((x, y), 2, tp, env, plan)
            right = sinr_at((width - x, y), 3, tp, env, plan)
            assert left.linear == pytest.approx(right.linear, rel=1e-12)


class TestSinrField:
    def test_field_matches_point_evaluation(self):
        grid, plan, tp = make_setup()
        env = make_env()
        area = EvalArea(kind=AreaKind.A1, resolution=2)
        field = sinr_field(area, 2, tp, env, plan)
        points = sample_points(area, grid.spec)
        for i in (0, 7, 63, 159):
            expected = sinr_at(tuple(points[i]), 2, tp, env, plan)
            assert field.values[i] == pytest.approx(expected.db, rel=1e-12, abs=1e-12)

    def test_all_values_finite_even_with_zero_signal(self):
        grid, plan, tp = make_setup(SchemeConfig(SchemeKind.OLSI))
        env = make_env()
        area = EvalArea(kind=AreaKind.A1, resolution=3)
        field = sinr_field(area, 3, tp, env, plan)
        assert np.isfinite(field.values).all()
        assert (field.values == SINR_FLOOR_DB).all()

    def test_field_shape_and_image(self):
        grid, plan, tp = make_setup()
        env = make_env()
        # the map area spans the full grid: 8 rows x 10 cols at 3 samples/isd
        area = EvalArea(kind=AreaKind.A2, resolution=3)
        field = sinr_field(area, 1, tp, env, plan)
        assert field.shape == (24, 30)
        assert field.as_image().shape == (24, 30)
        assert field.values.size == 720

    def test_values_read_only(self):
        grid, plan, tp = make_setup()
        field = sinr_field(EvalArea(kind=AreaKind.A1, resolution=2), 1, tp,
                           make_env(), plan)
        with pytest.raises(ValueError):
            field.values[0] = 0.0

    def test_spec_mismatch_rejected(self):
        grid, plan, tp = make_setup()
        with pytest.raises(ConfigurationError, match="spec"):
            sinr_field(
                EvalArea(kind=AreaKind.A1, resolution=2), 1, tp, make_env(), plan,
                spec=GridSpec(rows=2, cols=4, lsa1_cols=2),
            )

    def test_evaluator_rejects_foreign_plan(self):
        grid, plan, tp = make_setup()
        other = Grid.from_spec(GridSpec(rows=2, cols=4, lsa1_cols=2))
        evaluator = SinrEvaluator(other, make_env())
        with pytest.raises(ConfigurationError, match="different grid"):
            evaluator.field(EvalArea(kind=AreaKind.A1, resolution=2), 1, tp, plan)

    @pytest.mark.parametrize("kind", [PathLossKind.POWER_LAW, PathLossKind.HATA])
    def test_worker_count_does_not_change_bytes(self, kind):
        grid, plan, tp = make_setup()
        env = make_env(kind)
        # 120 x 150 = 18000 points spans more than one evaluation chunk
        area = EvalArea(kind=AreaKind.A2, resolution=15)
        fields = {
            workers: SinrEvaluator(grid, env, workers=workers)
            .field(area, 2, tp, plan).values.tobytes()
            for workers in (1, 2, 7)
        }
        assert fields[1] == fields[2] == fields[7]

    def test_repeated_evaluation_identical(self):
        grid, plan, tp = make_setup()
        env = make_env()
        evaluator = SinrEvaluator(grid, env)
        area = EvalArea(kind=AreaKind.A1, resolution=5)
        a = evaluator.field(area, 2, tp, plan).values.tobytes()
        b = evaluator.field(area, 2, tp, plan).values.tobytes()
        assert a == b

    def test_scheme_label_carried(self):
        grid, plan, tp = make_setup(SchemeConfig(SchemeKind.IMLSI_O, beta=0.5))
        field = sinr_field(EvalArea(kind=AreaKind.A1, resolution=2), 2, tp,
                           make_env(), plan)
        assert field.scheme_label == "imo_beta0.5"


class TestSchemeEffects:
    def test_power_scaling_improves_local_sinr_inside_lsa1(self):
        grid, plan, _ = make_setup()
        env = make_env()
        point = (850.0, 6800.0)  # deep inside LSA1
        values = {}
        for beta in (1.0, 0.5, 0.25):
            tp = allocate(grid, plan, SchemeConfig(SchemeKind.IMLSI_PS, beta=beta))
            values[beta] = sinr_at(point, 2, tp, env, plan).linear
        assert values[0.25] > values[0.5] > values[1.0]

    def test_global_boost_monotone_in_beta(self):
        grid, plan, _ = make_setup()
        env = make_env()
        point = (7600.0, 850.0)  # inside the left buffer column
        values = []
        for beta in (1.0, 0.5, 0.25, 0.0):
            tp = allocate(grid, plan, SchemeConfig(SchemeKind.IMLSI_PS, beta=beta))
            values.append(sinr_at(point, 1, tp, env, plan).linear)
        assert values == sorted(values)

    def test_imo_removes_cross_interference_in_buffer(self):
        grid, plan, _ = make_setup()
        env = make_env()
        point = (7600.0, 6800.0)  # left buffer, next to the boundary
        ps = allocate(grid, plan, SchemeConfig(SchemeKind.IMLSI_PS, beta=1.0))
        imo = allocate(grid, plan, SchemeConfig(SchemeKind.IMLSI_O, beta=1.0))
        # the orthogonal buffer silences the nearest interferers of content 2
        assert (
            sinr_at(point, 2, imo, env, plan).linear
            > sinr_at(point, 2, ps, env, plan).linear
        )
