"""Experiment orchestration and artifact emission.

One run evaluates every configured scheme on the configured grid and writes:

* ``manifest.json``     resolved config; parses back to an identical run
* ``coverage.csv``      covered fraction per scheme x content x threshold
* ``content_counts_<scheme>.json`` / ``.pgm``  per-point decodable-content
  counts over the map area at the map threshold
* ``spectral_efficiency.json``  scheme SE values and exact ratios
* ``summary.json``      coverage percentages, map quantifications, SE
* ``sinr_<scheme>_content<m>.pgm`` + ``.hdr.txt``  optional dB rasters

All numeric output is printed with 9 significant digits and every
collection is emitted in a fixed order, so repeated runs produce
byte-identical files regardless of worker count.
"""

from __future__ import annotations

import csv
import json
import os
from dataclasses import dataclass

import numpy as np

from sfn_lsi_sim.allocation import TransmitPlan, allocate
from sfn_lsi_sim.config import MANIFEST_FORMAT, ExperimentConfig
from sfn_lsi_sim.grid import Grid
from sfn_lsi_sim.metrics import (
    ContentCountMap,
    content_count_map,
    coverage,
    se_report,
    spectral_efficiency_from_plan,
)
from sfn_lsi_sim.sinr import SinrEvaluator, SinrField

SUMMARY_FORMAT = "sfn-lsi-sim/summary-v1"
SINR_DB_RANGE = (-10.0, 40.0)
"""Default dB window quantized into SINR rasters."""


def fmt9(value: float) -> str:
    """Fixed 9-significant-digit decimal form used in all emitted files."""
    return f"{float(value):.9g}"


def round9(value: float) -> float:
    return float(fmt9(value))


def _write_json(path: str, document: dict) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        json.dump(document, handle, sort_keys=True, indent=2)
        handle.write("\n")


def _raster_rows(image: np.ndarray) -> list[str]:
    # PNM rows run top to bottom; the lattice's first row is the smallest y.
    return [" ".join(str(int(v)) for v in row) for row in image[::-1]]


def _write_pgm(path: str, image: np.ndarray, maxval: int) -> None:
    ny, nx = image.shape
    lines = ["P2", f"{nx} {ny}", str(maxval)]
    lines.extend(_raster_rows(image))
    with open(path, "w", encoding="ascii", newline="\n") as handle:
        handle.write("\n".join(lines) + "\n")


def emit_heatmap(
    obj: ContentCountMap | SinrField, path: str, db_range: tuple[float, float] = SINR_DB_RANGE
) -> list[str]:
    """Write a plain P2 raster for a count map or SINR field.

    Count maps use gray levels 0..M directly.  SINR fields quantize
    ``db_range`` linearly onto 0..255 and record the window in a sidecar
    ``<path>.hdr.txt``.  Returns the list of files written.
    """
    if isinstance(obj, ContentCountMap):
        _write_pgm(path, obj.as_image(), maxval=max(obj.m_count, 1))
        return [path]
    lo, hi = db_range
    if not hi > lo:
        raise ValueError(f"db_range must be increasing (got {db_range})")
    scaled = (np.clip(obj.as_image(), lo, hi) - lo) * (255.0 / (hi - lo))
    _write_pgm(path, np.rint(scaled).astype(int), maxval=255)
    sidecar = path + ".hdr.txt"
    with open(sidecar, "w", encoding="ascii", newline="\n") as handle:
        handle.write(
            "kind sinr_db\n"
            f"db_min {fmt9(lo)}\n"
            f"db_max {fmt9(hi)}\n"
            "levels 256\n"
            f"scheme {obj.scheme_label}\n"
            f"content {obj.content_id}\n"
            f"area {obj.area.kind.value}\n"
        )
    return [path, sidecar]


@dataclass(frozen=True)
class RunResult:
    """Artifacts written by one experiment run."""

    out_dir: str
    files: tuple[str, ...]
    summary: dict


def _coverage_rows(cfg, label, fields) -> list[list[str]]:
    rows = []
    for field in fields:
        report = coverage(field, cfg.thresholds_db)
        for threshold, fraction in zip(report.thresholds_db, report.fractions):
            rows.append(
                [label, str(field.content_id), report.area_kind,
                 fmt9(threshold), fmt9(fraction), fmt9(100.0 * fraction)]
            )
    return rows


def _coverage_pct(cfg, fields) -> dict:
    """Per-content and local-average coverage percent, keyed by threshold."""
    reports = [coverage(f, cfg.thresholds_db) for f in fields]
    out: dict[str, dict[str, float]] = {}
    for report in reports:
        out[f"content_{report.content_id}"] = {
            fmt9(t): round9(100.0 * frac)
            for t, frac in zip(report.thresholds_db, report.fractions)
        }
    locals_ = [r for r in reports if r.content_id >= 2]
    out["locals_avg"] = {
        fmt9(t): round9(
            100.0 * sum(r.fractions[i] for r in locals_) / len(locals_)
        )
        for i, t in enumerate(cfg.thresholds_db)
    }
    return out


def run_experiment(cfg: ExperimentConfig, workers: int | None = None) -> RunResult:
    """Run every configured scheme and write all artifacts to cfg.out_dir."""
    grid = Grid.from_spec(cfg.grid)
    env = cfg.env()
    evaluator = SinrEvaluator(grid, env, workers=workers)
    coverage_area = cfg.coverage_area()
    map_area = cfg.map_area()
    contents = list(cfg.plan.content_ids)

    os.makedirs(cfg.out_dir, exist_ok=True)
    files: list[str] = []

    def out_path(name: str) -> str:
        files.append(name)
        return os.path.join(cfg.out_dir, name)

    _write_json(out_path("manifest.json"),
                {"format": MANIFEST_FORMAT, "config": cfg.to_mapping()})

    csv_rows: list[list[str]] = []
    summary_coverage: dict[str, dict] = {}
    summary_maps: dict[str, dict] = {}
    per_scheme_xi: dict[str, float] = {}

    for scheme in cfg.schemes:
        tp: TransmitPlan = allocate(grid, cfg.plan, scheme)
        per_scheme_xi[scheme.label] = round9(
            spectral_efficiency_from_plan(tp, cfg.plan)
        )

        cov_fields = [
            evaluator.field(coverage_area, m, tp, cfg.plan) for m in contents
        ]
        csv_rows.extend(_coverage_rows(cfg, scheme.label, cov_fields))
        summary_coverage[scheme.label] = _coverage_pct(cfg, cov_fields)

        map_fields = [evaluator.field(map_area, m, tp, cfg.plan) for m in contents]
        count_map = content_count_map(map_fields, cfg.content_map_threshold_db)
        histogram = count_map.histogram()
        map_doc = {
            "scheme": scheme.label,
            "area": map_area.kind.value,
            "threshold_db": round9(cfg.content_map_threshold_db),
            "n_points": int(count_map.counts.size),
            "histogram_pct": {
                str(k): round9(100.0 * histogram[k]) for k in range(cfg.plan.m_count + 1)
            },
            "at_least_pct": {
                str(k): round9(100.0 * count_map.fraction_at_least(k))
                for k in range(1, cfg.plan.m_count + 1)
            },
            "mean_count": round9(count_map.mean_count()),
            "pct_global": round9(
                100.0 * coverage(map_fields[0], (cfg.content_map_threshold_db,)).fractions[0]
            ),
        }
        _write_json(out_path(f"content_counts_{scheme.label}.json"), map_doc)
        emit_heatmap(count_map, out_path(f"content_counts_{scheme.label}.pgm"))
        summary_maps[scheme.label] = map_doc

        if cfg.emit_sinr_maps:
            for field in map_fields:
                name = f"sinr_{scheme.label}_content{field.content_id}.pgm"
                emit_heatmap(field, out_path(name))
                files.append(name + ".hdr.txt")

    with open(os.path.join(cfg.out_dir, "coverage.csv"), "w",
              encoding="utf-8", newline="") as handle:
        files.append("coverage.csv")
        writer = csv.writer(handle)
        writer.writerow(
            ["scheme", "content", "area", "threshold_db", "covered_fraction", "percent"]
        )
        writer.writerows(csv_rows)

    se = se_report(grid, cfg.plan)
    se_doc = {
        "xi_olsi": round9(se.xi_olsi),
        "xi_ps": round9(se.xi_ps),
        "xi_imo": round9(se.xi_imo),
        "ratio_olsi_ps": str(se.ratio_olsi_ps),
        "ratio_olsi_imo": str(se.ratio_olsi_imo),
        "ratio_ps_imo": str(se.ratio_ps_imo),
        "ratio_olsi_ps_float": round9(float(se.ratio_olsi_ps)),
        "ratio_olsi_imo_float": round9(float(se.ratio_olsi_imo)),
        "ratio_ps_imo_float": round9(float(se.ratio_ps_imo)),
        "per_scheme_xi": per_scheme_xi,
    }
    _write_json(out_path("spectral_efficiency.json"), se_doc)

    summary = {
        "format": SUMMARY_FORMAT,
        "coverage_area": coverage_area.kind.value,
        "map_area": map_area.kind.value,
        "resolution": cfg.resolution,
        "thresholds_db": [round9(t) for t in cfg.thresholds_db],
        "coverage_pct": summary_coverage,
        "content_maps": summary_maps,
        "spectral_efficiency": se_doc,
    }
    _write_json(out_path("summary.json"), summary)

    return RunResult(out_dir=cfg.out_dir, files=tuple(sorted(set(files))), summary=summary)
