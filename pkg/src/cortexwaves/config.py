"""Experiment configuration: a flat ``key=value`` text format."""
from __future__ import annotations

import dataclasses
import os
from dataclasses import dataclass

__all__ = ["ConfigError", "ExperimentConfig", "CATALOG_KEYWORD"]

CATALOG_KEYWORD = "catalog"


class ConfigError(ValueError):
    pass


def _parse_bool(text: str) -> bool:
    low = text.strip().lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise ConfigError(f"not a boolean: {text!r}")


@dataclass(frozen=True)
class ExperimentConfig:
    # V1
    sigma: float = 2.8
    wavelength: float = 3.5
    gamma: float = 0.3
    kernel_size: int = 7
    zero_mean: bool = False
    blank_fraction: float = 0.1
    # V4
    novelty_fraction: float = 0.1
    var_fraction: float = 0.1
    global_beta: bool = False
    stride: int = 3
    # waves and IT
    epsilon: float = 0.1
    alpha: float = 0.67
    radius: int = 5
    indicator_metric: bool = False
    # predictive coding
    coherence_threshold: float = 0.5
    feedback: bool = True
    # development
    reset_counters: bool = False
    # stimuli
    height: int = 100
    width: int = 100
    resize: bool = False
    seed: int = 0
    epochs: int = 1
    stimuli: tuple[str, ...] = (CATALOG_KEYWORD,)

    def __post_init__(self):
        self.validate()

    def validate(self):
        if self.kernel_size < 1 or self.kernel_size % 2 == 0:
            raise ConfigError("kernel_size must be a positive odd integer")
        for name in ("sigma", "wavelength", "var_fraction"):
            if not getattr(self, name) > 0:
                raise ConfigError(f"{name} must be positive")
        for name in ("epsilon", "alpha"):
            if not 0 < getattr(self, name) < 1:
                raise ConfigError(f"{name} must lie in (0, 1)")
        for name in ("blank_fraction", "coherence_threshold"):
            if not 0 <= getattr(self, name) <= 1:
                raise ConfigError(f"{name} must lie in [0, 1]")
        if self.novelty_fraction < 0:
            raise ConfigError("novelty_fraction must be non-negative")
        if self.radius < 0 or self.stride < 1 or self.epochs < 1:
            raise ConfigError("radius >= 0, stride >= 1 and epochs >= 1 are required")
        if min(self.height, self.width) < self.kernel_size + 2:
            raise ConfigError("retina too small for one V4 tile")
        if not self.stimuli:
            raise ConfigError("at least one stimulus is required")

    def to_text(self) -> str:
        lines = []
        for f in dataclasses.fields(self):
            value = getattr(self, f.name)
            if f.name == "stimuli":
                text = ",".join(value)
            elif isinstance(value, bool):
                text = "true" if value else "false"
            elif isinstance(value, float):
                text = repr(value)
            else:
                text = str(value)
            lines.append(f"{f.name}={text}")
        return "\n".join(lines) + "\n"

    @classmethod
    def coerce(cls, name: str, text: str):
        """Turn the text of one field into its typed value."""
        fields = {f.name: f for f in dataclasses.fields(cls)}
        if name not in fields:
            raise ConfigError(f"unknown config key {name!r}")
        default = fields[name].default
        try:
            if name == "stimuli":
                return tuple(t.strip() for t in text.split(",") if t.strip())
            if isinstance(default, bool):
                return _parse_bool(text)
            if isinstance(default, int):
                return int(text)
            return float(text)
        except ValueError as exc:
            raise ConfigError(f"bad value for {name}: {text!r}") from exc

    @classmethod
    def from_text(cls, text: str, **overrides) -> "ExperimentConfig":
        values = {}
        for lineno, line in enumerate(text.splitlines(), start=1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            key, sep, value = line.partition("=")
            if not sep:
                raise ConfigError(f"line {lineno}: expected key=value")
            values[key.strip()] = cls.coerce(key.strip(), value.strip())
        values.update(overrides)
        return cls(**values)

    @classmethod
    def load(cls, path: str | os.PathLike, **overrides) -> "ExperimentConfig":
        with open(path, encoding="utf-8") as fh:
            return cls.from_text(fh.read(), **overrides)

    def save(self, path: str | os.PathLike) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(self.to_text())
