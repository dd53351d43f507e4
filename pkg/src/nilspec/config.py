"""Run configuration shared by the CLI commands.

Precedence, least to most binding: built-in defaults, command-line
flags, config file.  The file is TOML (flat key = value), located via
--config or the NILSPEC_CONFIG environment variable.
"""
from __future__ import annotations

import dataclasses
import os
from dataclasses import dataclass

try:
    import tomllib
except ModuleNotFoundError:  # Python 3.10
    import tomli as tomllib


@dataclass
class RunConfig:
    kappa: float = 4.0
    points_per_wave: int = 10
    tol: float = 1e-8
    max_n: int = 1 << 21
    vol_rel_tol: float = 1e-8
    workers: int = 1
    nodes: int = 0  # 0 means the method default
    rule: str = "gauss"
    method: str = "volume_bound"
    seed: int = -1  # -1 means unseeded commands skip Monte Carlo checks

    def validate(self) -> "RunConfig":
        if self.kappa <= 1.0:
            raise ValueError(f"kappa must exceed 1, got {self.kappa}")
        if self.points_per_wave < 2:
            raise ValueError(f"points_per_wave must be >= 2, got {self.points_per_wave}")
        if not self.tol > 0:
            raise ValueError(f"tol must be positive, got {self.tol}")
        if self.max_n < 33:
            raise ValueError(f"max_n must be >= 33, got {self.max_n}")
        if not self.vol_rel_tol > 0:
            raise ValueError(f"vol_rel_tol must be positive, got {self.vol_rel_tol}")
        if self.workers < 1:
            raise ValueError(f"workers must be >= 1, got {self.workers}")
        if self.nodes < 0:
            raise ValueError(f"nodes must be >= 0, got {self.nodes}")
        if self.rule not in ("gauss", "midpoint"):
            raise ValueError(f"rule must be gauss or midpoint, got {self.rule!r}")
        if self.method not in ("volume_bound", "eigen_count"):
            raise ValueError(f"method must be volume_bound or eigen_count, got {self.method!r}")
        return self


_FIELD_TYPES = {f.name: f.type for f in dataclasses.fields(RunConfig)}


def load_config_file(path: str) -> dict:
    with open(path, "rb") as f:
        data = tomllib.load(f)
    out = {}
    for key, val in data.items():
        if key not in _FIELD_TYPES:
            raise ValueError(f"unknown config key {key!r} in {path}")
        want = _FIELD_TYPES[key]
        if want == "float":
            val = float(val)
        elif want == "int":
            if isinstance(val, float) and val != int(val):
                raise ValueError(f"config key {key!r} must be an integer, got {val}")
            val = int(val)
        elif want == "str" and not isinstance(val, str):
            raise ValueError(f"config key {key!r} must be a string, got {val!r}")
        out[key] = val
    return out


def resolve(args) -> RunConfig:
    """Merge defaults, then flags present on ``args``, then the config file."""
    cfg = RunConfig()
    for name in _FIELD_TYPES:
        val = getattr(args, name, None)
        if val is not None:
            setattr(cfg, name, val)
    path = getattr(args, "config", None) or os.environ.get("NILSPEC_CONFIG")
    if path:
        for key, val in load_config_file(path).items():
            setattr(cfg, key, val)
    return cfg.validate()


def as_dict(cfg: RunConfig) -> dict:
    return dataclasses.asdict(cfg)
