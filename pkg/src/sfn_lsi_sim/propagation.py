"""Distance-to-gain conversion: power-law exponent model and Hata model.

Both models are exposed behind one ``gain`` function returning linear power
gain, so analytic checks (power law) and calibrated coverage runs (Hata)
share a single evaluation engine.  Functions accept scalars or numpy arrays
and are pure; instances are immutable and reentrant.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from sfn_lsi_sim.errors import ConfigurationError


class PathLossKind(Enum):
    POWER_LAW = "power_law"
    HATA = "hata"


class HataEnvironment(Enum):
    URBAN_SMALL_MEDIUM = "urban_small_medium"


@dataclass(frozen=True)
class PathLossModel:
    """Path loss model selection and parameters.

    POWER_LAW uses the dimensionless exponent ``eta`` only.  HATA uses the
    small/medium-city urban form and is valid for 150-1500 MHz, base antenna
    30-200 m, mobile antenna 1-10 m.
    """

    kind: PathLossKind = PathLossKind.HATA
    eta: float = 3.5
    f_mhz: float = 700.0
    hb_m: float = 30.0
    hm_m: float = 1.5
    environment: HataEnvironment = HataEnvironment.URBAN_SMALL_MEDIUM

    def __post_init__(self):
        if self.kind is PathLossKind.POWER_LAW:
            if not 2.0 <= self.eta <= 6.0:
                raise ConfigurationError(
                    f"eta must satisfy 2 <= eta <= 6 (got {self.eta})"
                )
        else:
            if not 150.0 <= self.f_mhz <= 1500.0:
                raise ConfigurationError(
                    f"f_mhz must satisfy 150 <= f_mhz <= 1500 (got {self.f_mhz})"
                )
            if not 30.0 <= self.hb_m <= 200.0:
                raise ConfigurationError(
                    f"hb_m must satisfy 30 <= hb_m <= 200 (got {self.hb_m})"
                )
            if not 1.0 <= self.hm_m <= 10.0:
                raise ConfigurationError(
                    f"hm_m must satisfy 1 <= hm_m <= 10 (got {self.hm_m})"
                )


def hata_coefficients(model: PathLossModel) -> tuple[float, float]:
    """(fixed_db, slope_db) such that L(d) = fixed_db + slope_db*log10(d_km)."""
    lf = np.log10(model.f_mhz)
    a_hm = (1.1 * lf - 0.7) * model.hm_m - (1.56 * lf - 0.8)
    fixed = 69.55 + 26.16 * lf - 13.82 * np.log10(model.hb_m) - a_hm
    slope = 44.9 - 6.55 * np.log10(model.hb_m)
    return float(fixed), float(slope)


def path_loss_db(model: PathLossModel, d_m):
    """Path loss in dB at distance ``d_m`` (meters; scalar or array)."""
    d = np.asarray(d_m, dtype=float)
    if np.any(d <= 0):
        raise ValueError("distance must be positive; clamp via grid.distance first")
    if model.kind is PathLossKind.POWER_LAW:
        out = 10.0 * model.eta * np.log10(d)
    else:
        fixed, slope = hata_coefficients(model)
        out = fixed + slope * np.log10(d / 1000.0)
    return float(out) if np.isscalar(d_m) else out


def gain(model: PathLossModel, d_m):
    """Linear power gain at distance ``d_m`` (meters; scalar or array).

    POWER_LAW returns d^(-eta); HATA returns 10^(-L/10).  Both are strictly
    decreasing in d.  Callers are responsible for clamping distances to the
    model's validity floor (see ``grid.D_MIN_M``).
    """
    d = np.asarray(d_m, dtype=float)
    if np.any(d <= 0):
        raise ValueError("distance must be positive; clamp via grid.distance first")
    if model.kind is PathLossKind.POWER_LAW:
        out = d ** (-model.eta)
    else:
        fixed, slope = hata_coefficients(model)
        out = 10.0 ** (-(fixed + slope * np.log10(d / 1000.0)) / 10.0)
    return float(out) if np.isscalar(d_m) else out
