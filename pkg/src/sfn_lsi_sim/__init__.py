"""System-level simulator for local service insertion in 5G broadcast SFNs.

Models a two-service-area cell grid with a buffer region at the boundary,
evaluates per-content SINR under three insertion schemes (orthogonal,
power-scaled buffer, buffer-orthogonal), and reduces the fields to coverage
curves, content-count maps, and spectral-efficiency reports.
"""

from sfn_lsi_sim.errors import ConfigurationError, ConfigValidationError

__all__ = ["ConfigurationError", "ConfigValidationError"]
__version__ = "0.1.0"
