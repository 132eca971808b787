"""Run configuration shared by the verification harness and the CLI."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field, fields

from .errors import ConfigError

COMMANDS = ("eval-psi", "eval-phi-quad", "eval-phi-closed", "verify", "calibrate", "tabulate")
FORMATS = ("json", "csv", "text")
TABULATE_TARGETS = ("psi", "phi-closed", "phi-quad")
QUADRATURE_KEYS = ("truncation_L", "panels", "nodes_per_panel", "target_tol")


@dataclass
class RunConfig:
    """Flat run configuration; config-file keys are exactly these field names."""

    command: str
    a: float | None = None
    m: int | None = None
    N: int | None = None
    x: list[complex] | None = None
    y: list[complex] | None = None
    suite: str | None = None
    seed: int = 0
    probes: int | None = None
    tolerances: dict[str, float] = field(default_factory=dict)
    quadrature: dict[str, float] = field(default_factory=dict)
    output: str | None = None
    format: str = "json"
    workers: int = 1
    target: str = "psi"
    grid: int = 5

    def validate(self) -> "RunConfig":
        if self.command not in COMMANDS:
            raise ConfigError(f"command: unknown command {self.command!r}")
        if self.format not in FORMATS:
            raise ConfigError(f"format: must be one of {FORMATS}, got {self.format!r}")
        if self.command == "verify" and not self.suite:
            raise ConfigError("suite: required for command verify")
        if self.command in ("eval-psi", "eval-phi-quad", "eval-phi-closed", "calibrate", "tabulate"):
            for key in ("a", "m"):
                if getattr(self, key) is None:
                    raise ConfigError(f"{key}: required for command {self.command}")
        if self.command.startswith("eval-"):
            if self.N is None and self.x is None:
                raise ConfigError(f"N: required for command {self.command} (or give points x, y)")
            if (self.x is None) != (self.y is None):
                raise ConfigError("x: points x and y must be given together")
            if self.x is not None:
                if self.N is not None and len(self.x) != self.N:
                    raise ConfigError(f"x: expected {self.N} coordinates, got {len(self.x)}")
                if len(self.x) != len(self.y):
                    raise ConfigError("y: x and y must have the same length")
        if self.m is not None and self.m < 1:
            raise ConfigError(f"m: must be >= 1, got {self.m}")
        if self.a is not None and self.m is not None and not (math.isfinite(self.a) and self.a > self.m - 1):
            raise ConfigError(f"a: need a > m - 1, got a={self.a}, m={self.m}")
        if self.N is not None and self.N < 1:
            raise ConfigError("N: must be >= 1")
        if self.probes is not None and self.probes < 0:
            raise ConfigError("probes: must be >= 0")
        if self.workers < 1:
            raise ConfigError("workers: must be >= 1")
        if self.grid < 1:
            raise ConfigError("grid: must be >= 1")
        if self.target not in TABULATE_TARGETS:
            raise ConfigError(f"target: must be one of {TABULATE_TARGETS}, got {self.target!r}")
        for key in self.quadrature:
            if key not in QUADRATURE_KEYS:
                raise ConfigError(f"quadrature.{key}: unknown quadrature field")
            if not self.quadrature[key] > 0:
                raise ConfigError(f"quadrature.{key}: must be positive")
        for key, tol in self.tolerances.items():
            if not (isinstance(tol, (int, float)) and tol > 0):
                raise ConfigError(f"tolerances.{key}: must be a positive number")
        return self

    def to_dict(self) -> dict:
        return asdict(self)


FIELD_NAMES = tuple(f.name for f in fields(RunConfig))
