"""Pipeline configuration: command-line flags over a config file over the
packaged calibration defaults."""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, fields
from importlib import resources

from .enumeration import BUDGET_ENV
from .errors import DomainError
from .metric import ClusteringParams
from .reduction import base_size_coefficient


def load_calibration() -> dict:
    text = resources.files("kzcoreset").joinpath("calibration.json").read_text(encoding="utf-8")
    return json.loads(text)


@dataclass
class PipelineConfig:
    k: int = 2
    z: float = 1.0
    epsilon: float = 0.2
    delta: float = 0.1
    seed: int = 0
    rho: float = 2.0
    s_of_k: float | str = "auto"
    sdim_proxy: float = 1.0
    sdim_coef: float = 0.25
    constant: float = 0.2
    hoeffding_constant: float = 1.0
    alpha: float = 2.0
    c_jl: float = 16.0
    max_retries: int = 3
    enum_budget: int = 2_000_000
    workers: int = 1

    @classmethod
    def keys(cls) -> set[str]:
        return {f.name for f in fields(cls)}

    @classmethod
    def resolve(cls, flags: dict | None = None, config_path=None) -> "PipelineConfig":
        """Flags over config file over the budget env var over calibration."""
        values = {k: v for k, v in load_calibration().items() if k in cls.keys()}
        if os.environ.get(BUDGET_ENV):
            try:
                values["enum_budget"] = int(os.environ[BUDGET_ENV])
            except ValueError:
                raise DomainError(f"{BUDGET_ENV} must be an integer") from None
        if config_path is not None:
            with open(config_path, encoding="utf-8") as fh:
                try:
                    user = json.load(fh)
                except json.JSONDecodeError as exc:
                    raise DomainError(f"{config_path}:{exc.lineno}: invalid JSON: {exc.msg}") from None
            unknown = set(user) - cls.keys()
            if unknown:
                raise DomainError(f"unknown config keys: {', '.join(sorted(unknown))}")
            values.update(user)
        for k, v in (flags or {}).items():
            if v is not None:
                if k not in cls.keys():
                    raise DomainError(f"unknown config key {k}")
                values[k] = v
        cfg = cls(**values)
        cfg.validate()
        return cfg

    def validate(self):
        self.params()
        if not self.rho >= 1:
            raise DomainError("rho must be >= 1")
        for name in ("sdim_proxy", "sdim_coef", "constant", "hoeffding_constant", "c_jl"):
            if not getattr(self, name) > 0:
                raise DomainError(f"{name} must be positive")
        if self.s_of_k != "auto" and not float(self.s_of_k) > 0:
            raise DomainError("s_of_k must be positive or 'auto'")
        if not self.alpha >= 1:
            raise DomainError("alpha must be >= 1")
        if int(self.max_retries) != self.max_retries or self.max_retries < 0:
            raise DomainError("max_retries must be a nonnegative integer")
        if int(self.enum_budget) != self.enum_budget or self.enum_budget < 1:
            raise DomainError("enum_budget must be a positive integer")
        if int(self.workers) != self.workers or self.workers < 1:
            raise DomainError("workers must be a positive integer")

    def params(self) -> ClusteringParams:
        return ClusteringParams(int(self.k), float(self.z), float(self.epsilon), float(self.delta))

    def resolved_s_of_k(self) -> float:
        if self.s_of_k == "auto":
            return base_size_coefficient(int(self.k), float(self.z), self.constant, self.sdim_coef)
        return float(self.s_of_k)

    def to_dict(self):
        return {f.name: getattr(self, f.name) for f in fields(self)}
