"""Exception types shared across the simulator."""

from __future__ import annotations


class ConfigurationError(ValueError):
    """A configuration value violates one of its documented bounds."""


class ConfigValidationError(ConfigurationError):
    """Every validation failure found while parsing a config file."""

    def __init__(self, errors: list[str]):
        self.errors = list(errors)
        super().__init__("; ".join(self.errors))
