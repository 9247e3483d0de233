"""Experiment configuration: INI files, JSON manifests, flag overrides.

A config file fully determines a run.  Parsing validates every field and
reports all problems at once, each message naming the offending key and the
accepted range.  The JSON manifest written by a run contains the resolved
configuration in the same schema and parses back to an identical
ExperimentConfig, so a manifest alone reproduces its run.
"""

from __future__ import annotations

import configparser
import json
import os
from dataclasses import dataclass, replace
from typing import Any, Callable

from sfn_lsi_sim.allocation import ContentPlan, SchemeConfig, SchemeKind
from sfn_lsi_sim.errors import ConfigurationError, ConfigValidationError
from sfn_lsi_sim.grid import AreaKind, EvalArea, GridSpec
from sfn_lsi_sim.propagation import HataEnvironment, PathLossKind, PathLossModel
from sfn_lsi_sim.sinr import RadioEnv

MANIFEST_FORMAT = "sfn-lsi-sim/manifest-v1"

_SCHEMA: dict[str, dict[str, bool]] = {
    # section -> key -> required
    "grid": {"rows": True, "cols": True, "isd_m": True, "lsa1_cols": True,
             "buffer_cols_per_side": False},
    "contents": {"count": True, "bandwidth_hz": True, "subcarriers": True,
                 "mod_order": True, "t_sym_s": True, "power_w": True,
                 "power_prime_w": False},
    "propagation": {"model": True, "eta": False, "f_mhz": False, "hb_m": False,
                    "hm_m": False},
    "radio": {"n0_w_per_hz": True},
    "schemes": {"list": True, "imo_buffer_reallocation": False},
    "eval": {"resolution": True, "thresholds_db": True, "coverage_area": False,
             "map_area": False, "content_map_threshold_db": False},
    "output": {"dir": True, "emit_sinr_maps": False, "seed": False},
}


@dataclass(frozen=True)
class ExperimentConfig:
    """Fully validated run description."""

    grid: GridSpec
    plan: ContentPlan
    schemes: tuple[SchemeConfig, ...]
    pathloss: PathLossModel
    n0: float
    resolution: int
    thresholds_db: tuple[float, ...]
    coverage_area_kind: AreaKind
    map_area_kind: AreaKind
    content_map_threshold_db: float
    out_dir: str
    emit_sinr_maps: bool
    seed: int

    def env(self) -> RadioEnv:
        return RadioEnv(n0=self.n0, pathloss=self.pathloss)

    def coverage_area(self) -> EvalArea:
        return EvalArea(kind=self.coverage_area_kind, resolution=self.resolution)

    def map_area(self) -> EvalArea:
        return EvalArea(kind=self.map_area_kind, resolution=self.resolution)

    def to_mapping(self) -> dict[str, dict[str, Any]]:
        """Schema-shaped mapping of the resolved config (manifest payload)."""
        scheme_entries = []
        for s in self.schemes:
            if s.label == "reuse1":
                scheme_entries.append("reuse1")
            elif s.kind is SchemeKind.OLSI:
                scheme_entries.append("olsi")
            else:
                scheme_entries.append(f"{s.kind.value}:{s.beta!r}")
        imo_realloc = next(
            (s.buffer_reallocation for s in self.schemes if s.kind is SchemeKind.IMLSI_O),
            "global",
        )
        return {
            "grid": {
                "rows": self.grid.rows,
                "cols": self.grid.cols,
                "isd_m": self.grid.isd,
                "lsa1_cols": self.grid.lsa1_cols,
                "buffer_cols_per_side": self.grid.buffer_cols_per_side,
            },
            "contents": {
                "count": self.plan.m_count,
                "bandwidth_hz": list(self.plan.bandwidth_hz),
                "subcarriers": list(self.plan.subcarriers),
                "mod_order": list(self.plan.mod_order),
                "t_sym_s": self.plan.t_sym,
                "power_w": list(self.plan.base_power),
                "power_prime_w": list(self.plan.base_power_prime),
            },
            "propagation": {
                "model": self.pathloss.kind.value,
                "eta": self.pathloss.eta,
                "f_mhz": self.pathloss.f_mhz,
                "hb_m": self.pathloss.hb_m,
                "hm_m": self.pathloss.hm_m,
            },
            "radio": {"n0_w_per_hz": self.n0},
            "schemes": {
                "list": ", ".join(scheme_entries),
                "imo_buffer_reallocation": imo_realloc,
            },
            "eval": {
                "resolution": self.resolution,
                "thresholds_db": list(self.thresholds_db),
                "coverage_area": self.coverage_area_kind.value,
                "map_area": self.map_area_kind.value,
                "content_map_threshold_db": self.content_map_threshold_db,
            },
            "output": {
                "dir": self.out_dir,
                "emit_sinr_maps": self.emit_sinr_maps,
                "seed": self.seed,
            },
        }


class _Source:
    """Raw section/key strings plus error accumulation."""

    def __init__(self, mapping: dict[str, dict[str, str]]):
        self.mapping = mapping
        self.errors: list[str] = []
        self.used: set[tuple[str, str]] = set()

    def error(self, message: str) -> None:
        self.errors.append(message)

    def raw(self, section: str, key: str) -> str | None:
        self.used.add((section, key))
        return self.mapping.get(section, {}).get(key)

    def get(self, section: str, key: str, parse: Callable[[str], Any],
            expect: str, default: Any = None, required: bool = False) -> Any:
        text = self.raw(section, key)
        if text is None or text.strip() == "":
            if required:
                self.error(f"{section}.{key}: required key is missing; expected {expect}")
            return default
        try:
            return parse(text.strip())
        except (ValueError, ConfigurationError) as exc:
            self.error(f"{section}.{key}: {exc}; expected {expect}")
            return default

    def check_unknown(self) -> None:
        for section, entries in self.mapping.items():
            if section not in _SCHEMA:
                self.error(
                    f"{section}: unknown section (known: {', '.join(sorted(_SCHEMA))})"
                )
                continue
            for key in entries:
                if key not in _SCHEMA[section]:
                    self.error(
                        f"{section}.{key}: unknown key "
                        f"(known: {', '.join(sorted(_SCHEMA[section]))})"
                    )


def _parse_bool(text: str) -> bool:
    lowered = text.lower()
    if lowered in ("1", "true", "yes", "on"):
        return True
    if lowered in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def _parse_float_list(text: str) -> tuple[float, ...]:
    parts = text.replace(",", " ").split()
    if not parts:
        raise ValueError("empty list")
    return tuple(float(p) for p in parts)


def _parse_int_list(text: str) -> tuple[int, ...]:
    parts = text.replace(",", " ").split()
    if not parts:
        raise ValueError("empty list")
    return tuple(int(p) for p in parts)


def _broadcast(values, m_count: int, section: str, key: str, src: _Source):
    if values is None:
        return None
    if len(values) == 1:
        return values * m_count
    if len(values) != m_count:
        src.error(
            f"{section}.{key}: expected 1 or {m_count} values (got {len(values)})"
        )
        return None
    return values


def _parse_scheme_entry(entry: str, imo_realloc: str) -> SchemeConfig:
    name, _, beta_text = entry.partition(":")
    name = name.strip().lower()
    beta = 1.0
    if beta_text.strip():
        beta = float(beta_text)
    if name == "reuse1":
        return SchemeConfig(SchemeKind.IMLSI_PS, beta=1.0, label="reuse1")
    if name == "olsi":
        return SchemeConfig(SchemeKind.OLSI)
    if name == "ps":
        return SchemeConfig(SchemeKind.IMLSI_PS, beta=beta)
    if name == "imo":
        return SchemeConfig(SchemeKind.IMLSI_O, beta=beta, buffer_reallocation=imo_realloc)
    raise ValueError(
        f"unknown scheme {entry!r} (use olsi, reuse1, ps:<beta>, imo:<beta>)"
    )


def _area_kind(text: str) -> AreaKind:
    upper = text.upper()
    if upper in ("A1", "A2"):
        return AreaKind(upper)
    raise ValueError(f"unknown area {text!r} (use a1 or a2)")


def _load_ini(path: str) -> dict[str, dict[str, str]]:
    parser = configparser.ConfigParser(interpolation=None)
    with open(path, encoding="utf-8") as handle:
        parser.read_file(handle, source=path)
    return {section: dict(parser.items(section)) for section in parser.sections()}


def _stringify(value: Any) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (list, tuple)):
        return " ".join(_stringify(v) for v in value)
    return repr(value) if isinstance(value, float) else str(value)


def _load_manifest(path: str) -> dict[str, dict[str, str]]:
    with open(path, encoding="utf-8") as handle:
        document = json.load(handle)
    if not isinstance(document, dict) or "config" not in document:
        raise ConfigValidationError([f"{path}: manifest must be an object with a 'config' key"])
    config = document["config"]
    return {
        section: {key: _stringify(value) for key, value in entries.items()}
        for section, entries in config.items()
    }


def config_from_mapping(mapping: dict[str, dict[str, str]]) -> ExperimentConfig:
    """Validate a raw section/key/string mapping into an ExperimentConfig.

    Collects every validation problem and raises one ConfigValidationError
    listing them all.
    """
    src = _Source(mapping)
    src.check_unknown()

    rows = src.get("grid", "rows", int, "integer >= 1", required=True)
    cols = src.get("grid", "cols", int, "integer >= 2", required=True)
    isd = src.get("grid", "isd_m", float, "positive meters", required=True)
    lsa1_cols = src.get("grid", "lsa1_cols", int, "integer in [1, cols-1]", required=True)
    buffer_cols = src.get("grid", "buffer_cols_per_side", int,
                          "integer in [1, min(lsa1_cols, cols-lsa1_cols)]", default=1)

    m_count = src.get("contents", "count", int, "integer >= 2", required=True)
    bandwidth = src.get("contents", "bandwidth_hz", _parse_float_list,
                        "positive Hz, 1 or M values", required=True)
    subcarriers = src.get("contents", "subcarriers", _parse_int_list,
                          "positive integers, 1 or M values", required=True)
    mod_order = src.get("contents", "mod_order", _parse_int_list,
                        "powers of two >= 2, 1 or M values", required=True)
    t_sym = src.get("contents", "t_sym_s", float, "positive seconds", required=True)
    power = src.get("contents", "power_w", _parse_float_list,
                    "non-negative watts, 1 or M values", required=True)
    power_prime = src.get("contents", "power_prime_w", _parse_float_list,
                          "non-negative watts, 1 or M values")

    model_name = src.get("propagation", "model", str.lower,
                         "power_law or hata", required=True)
    eta = src.get("propagation", "eta", float, "2 <= eta <= 6", default=3.5)
    f_mhz = src.get("propagation", "f_mhz", float, "150 <= f_mhz <= 1500", default=700.0)
    hb_m = src.get("propagation", "hb_m", float, "30 <= hb_m <= 200", default=30.0)
    hm_m = src.get("propagation", "hm_m", float, "1 <= hm_m <= 10", default=1.5)

    n0 = src.get("radio", "n0_w_per_hz", float, "positive W/Hz", required=True)

    schemes_text = src.get("schemes", "list", str,
                           "comma list of olsi|reuse1|ps:<beta>|imo:<beta>", required=True)
    imo_realloc = src.get("schemes", "imo_buffer_reallocation", str.lower,
                          "global or none", default="global")

    resolution = src.get("eval", "resolution", int, "integer in [1, 200]", required=True)
    thresholds = src.get("eval", "thresholds_db", _parse_float_list,
                         "one or more dB values", required=True)
    coverage_area = src.get("eval", "coverage_area", _area_kind, "a1 or a2",
                            default=AreaKind.A1)
    map_area = src.get("eval", "map_area", _area_kind, "a1 or a2", default=AreaKind.A2)
    map_threshold = src.get("eval", "content_map_threshold_db", float, "dB value",
                            default=15.0)

    out_dir = src.get("output", "dir", str, "directory path", required=True)
    emit_sinr = src.get("output", "emit_sinr_maps", _parse_bool, "true or false",
                        default=False)
    seed = src.get("output", "seed", int, "integer", default=0)

    grid_spec = None
    if None not in (rows, cols, isd, lsa1_cols, buffer_cols):
        try:
            grid_spec = GridSpec(rows=rows, cols=cols, isd=isd, lsa1_cols=lsa1_cols,
                                 buffer_cols_per_side=buffer_cols)
        except ConfigurationError as exc:
            src.error(f"grid: {exc}")

    plan = None
    if m_count is not None:
        bandwidth = _broadcast(bandwidth, m_count, "contents", "bandwidth_hz", src)
        subcarriers = _broadcast(subcarriers, m_count, "contents", "subcarriers", src)
        mod_order = _broadcast(mod_order, m_count, "contents", "mod_order", src)
        power = _broadcast(power, m_count, "contents", "power_w", src)
        power_prime = _broadcast(power_prime, m_count, "contents", "power_prime_w", src)
        if mod_order is not None:
            for mu in mod_order:
                if mu < 2 or mu & (mu - 1):
                    src.error(
                        f"contents.mod_order: entries must be powers of two >= 2 (got {mu})"
                    )
                    break
        if None not in (bandwidth, subcarriers, mod_order, t_sym, power):
            try:
                plan = ContentPlan(
                    m_count=m_count, bandwidth_hz=bandwidth, subcarriers=subcarriers,
                    mod_order=mod_order, t_sym=t_sym, base_power=power,
                    base_power_prime=power_prime,
                )
            except ConfigurationError as exc:
                src.error(f"contents: {exc}")

    pathloss = None
    if model_name is not None:
        try:
            kind = PathLossKind(model_name)
        except ValueError:
            src.error(
                f"propagation.model: unknown model {model_name!r} "
                "(use power_law or hata)"
            )
            kind = None
        if kind is not None and None not in (eta, f_mhz, hb_m, hm_m):
            try:
                pathloss = PathLossModel(
                    kind=kind, eta=eta, f_mhz=f_mhz, hb_m=hb_m, hm_m=hm_m,
                    environment=HataEnvironment.URBAN_SMALL_MEDIUM,
                )
            except ConfigurationError as exc:
                src.error(f"propagation: {exc}")

    if n0 is not None and n0 <= 0:
        src.error(f"radio.n0_w_per_hz: must be positive (got {n0})")
        n0 = None

    schemes: list[SchemeConfig] = []
    if imo_realloc is not None and imo_realloc not in ("global", "none"):
        src.error(
            f"schemes.imo_buffer_reallocation: must be 'global' or 'none' "
            f"(got {imo_realloc!r})"
        )
        imo_realloc = "global"
    if schemes_text is not None:
        entries = [e.strip() for e in schemes_text.split(",") if e.strip()]
        if not entries:
            src.error("schemes.list: must name at least one scheme")
        for entry in entries:
            try:
                schemes.append(_parse_scheme_entry(entry, imo_realloc))
            except (ValueError, ConfigurationError) as exc:
                src.error(f"schemes.list: {exc}")
        labels = [s.label for s in schemes]
        if len(set(labels)) != len(labels):
            src.error(f"schemes.list: duplicate scheme labels in {labels}")

    if resolution is not None and not 1 <= resolution <= 200:
        src.error(f"eval.resolution: must satisfy 1 <= resolution <= 200 (got {resolution})")
        resolution = None
    if thresholds is not None and len(thresholds) == 0:
        src.error("eval.thresholds_db: must list at least one threshold")
        thresholds = None

    if src.errors:
        raise ConfigValidationError(sorted(src.errors))

    return ExperimentConfig(
        grid=grid_spec,
        plan=plan,
        schemes=tuple(schemes),
        pathloss=pathloss,
        n0=n0,
        resolution=resolution,
        thresholds_db=tuple(thresholds),
        coverage_area_kind=coverage_area,
        map_area_kind=map_area,
        content_map_threshold_db=map_threshold,
        out_dir=out_dir,
        emit_sinr_maps=emit_sinr,
        seed=seed,
    )


def parse_config(path: str) -> ExperimentConfig:
    """Parse an INI config file or a JSON run manifest."""
    if not os.path.isfile(path):
        raise ConfigValidationError([f"{path}: config file not found"])
    if path.endswith(".json"):
        mapping = _load_manifest(path)
    else:
        try:
            mapping = _load_ini(path)
        except configparser.Error as exc:
            raise ConfigValidationError([f"{path}: {exc}"]) from exc
    return config_from_mapping(mapping)


def apply_overrides(
    cfg: ExperimentConfig,
    out_dir: str | None = None,
    scheme: str | None = None,
    beta: float | None = None,
    resolution: int | None = None,
) -> ExperimentConfig:
    """Apply command-line overrides on top of a parsed config."""
    if beta is not None and scheme is None:
        raise ConfigValidationError(["--beta requires --scheme"])
    if scheme is not None:
        imo_realloc = next(
            (s.buffer_reallocation for s in cfg.schemes if s.kind is SchemeKind.IMLSI_O),
            "global",
        )
        entry = scheme if beta is None else f"{scheme}:{beta!r}"
        try:
            cfg = replace(cfg, schemes=(_parse_scheme_entry(entry, imo_realloc),))
        except (ValueError, ConfigurationError) as exc:
            raise ConfigValidationError([f"--scheme: {exc}"]) from exc
    if resolution is not None:
        if not 1 <= resolution <= 200:
            raise ConfigValidationError(
                [f"--resolution: must satisfy 1 <= resolution <= 200 (got {resolution})"]
            )
        cfg = replace(cfg, resolution=resolution)
    if out_dir is not None:
        cfg = replace(cfg, out_dir=out_dir)
    return cfg
