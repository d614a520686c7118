"""Run configuration for the command-line sweeps.

A single JSON document; every physical constraint is re-validated on load::

    {
      "couplings": ["S", "P", "V", "A"],
      "alphas": [0.1, 0.02, 0.0072992700729927],
      "m_f": 172.5,
      "beta": {"min": 0.05, "max": 0.99, "steps": 40},
      "region": {"omega0_frac": 0.05, "zmin": 0.1, "zmax": null,
                 "theta_max": 1.5707963267948966, "z_nodes": 48},
      "mu_frac": 1.0,
      "legs": "both",
      "output": {"path": "sweep.csv", "format": "csv"}
    }

``coupling``/``alpha`` may be given instead of the plural lists, and
``beta`` may be a single number.
"""

import json
import math
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from decoq.radiation import (DEFAULT_OMEGA0_FRAC, DEFAULT_THETA_MAX, DEFAULT_ZMIN, N_Z_NODES,
                             UnresolvedRegion)
from decoq.states import COUPLING_ORDER, Coupling, CouplingKind, DomainError, KinematicPoint


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RegionConfig:
    omega0_frac: float = DEFAULT_OMEGA0_FRAC
    zmin: float = DEFAULT_ZMIN
    zmax: float = None
    theta_max: float = DEFAULT_THETA_MAX
    z_nodes: int = N_Z_NODES

    def build(self, kin: KinematicPoint) -> UnresolvedRegion:
        region = UnresolvedRegion.default(kin, self.omega0_frac, self.zmin, self.theta_max,
                                          self.zmax, self.z_nodes)
        region.check(kin)
        return region


@dataclass(frozen=True)
class RunConfig:
    couplings: tuple = tuple(k.value for k in COUPLING_ORDER)
    alphas: tuple = (0.1,)
    m_f: float = 172.5
    beta_min: float = 0.05
    beta_max: float = 0.99
    beta_steps: int = 40
    region: RegionConfig = field(default_factory=RegionConfig)
    mu_frac: float = 1.0
    legs: str = "both"
    output_path: str = None
    output_format: str = "csv"

    def __post_init__(self):
        try:
            kinds = sorted({CouplingKind.parse(k) for k in self.couplings},
                           key=COUPLING_ORDER.index)
        except ValueError as e:
            raise ConfigError(str(e)) from None
        if not kinds:
            raise ConfigError("at least one coupling is required")
        object.__setattr__(self, "couplings", tuple(k.value for k in kinds))
        object.__setattr__(self, "alphas", tuple(float(a) for a in self.alphas))
        if not self.alphas or any(not (a >= 0 and math.isfinite(a)) for a in self.alphas):
            raise ConfigError("alphas must be a non-empty list of non-negative numbers")
        if not self.m_f > 0:
            raise ConfigError("m_f must be positive")
        if not (0 < self.beta_min <= self.beta_max < 1):
            raise ConfigError("beta grid must satisfy 0 < min <= max < 1")
        if int(self.beta_steps) != self.beta_steps or self.beta_steps < 1:
            raise ConfigError("beta steps must be a positive integer")
        if self.beta_steps > 1 and not self.beta_min < self.beta_max:
            raise ConfigError("beta grid needs min < max when steps >= 2")
        if not self.mu_frac > 0:
            raise ConfigError("mu_frac must be positive")
        if self.legs not in ("one", "both"):
            raise ConfigError("legs must be 'one' or 'both'")
        if self.output_format not in ("csv", "json"):
            raise ConfigError("output format must be 'csv' or 'json'")
        # physical checks at every grid point
        try:
            for beta in self.betas():
                kin = KinematicPoint.from_beta(self.m_f, beta)
                self.region.build(kin)
        except DomainError as e:
            raise ConfigError(f"invalid kinematics/region: {e}") from None

    def betas(self) -> np.ndarray:
        if self.beta_steps == 1:
            return np.array([self.beta_min])
        return np.linspace(self.beta_min, self.beta_max, int(self.beta_steps))

    def coupling_list(self):
        return [Coupling(k, a) for k in self.couplings for a in self.alphas]

    def to_dict(self) -> dict:
        d = asdict(self)
        return {
            "couplings": list(d["couplings"]),
            "alphas": list(d["alphas"]),
            "m_f": self.m_f,
            "beta": {"min": self.beta_min, "max": self.beta_max, "steps": self.beta_steps},
            "region": d["region"],
            "mu_frac": self.mu_frac,
            "legs": self.legs,
            "output": {"path": self.output_path, "format": self.output_format},
        }


_TOP_KEYS = {"coupling", "couplings", "alpha", "alphas", "m_f", "beta", "region",
             "mu_frac", "legs", "output"}


def config_from_dict(d: dict) -> RunConfig:
    if not isinstance(d, dict):
        raise ConfigError("config must be a JSON object")
    unknown = set(d) - _TOP_KEYS
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    kw = {}
    if "couplings" in d or "coupling" in d:
        c = d.get("couplings", d.get("coupling"))
        kw["couplings"] = tuple([c] if isinstance(c, str) else c)
    if "alphas" in d or "alpha" in d:
        a = d.get("alphas", d.get("alpha"))
        kw["alphas"] = tuple([a] if isinstance(a, (int, float)) else a)
    for key in ("m_f", "mu_frac", "legs"):
        if key in d:
            kw[key] = d[key]
    beta = d.get("beta")
    if isinstance(beta, (int, float)):
        kw.update(beta_min=float(beta), beta_max=float(beta), beta_steps=1)
    elif isinstance(beta, dict):
        extra = set(beta) - {"min", "max", "steps"}
        if extra:
            raise ConfigError(f"unknown beta keys: {sorted(extra)}")
        kw.update(beta_min=beta.get("min", 0.05), beta_max=beta.get("max", 0.99),
                  beta_steps=beta.get("steps", 40))
    elif beta is not None:
        raise ConfigError("beta must be a number or {min, max, steps}")
    if "region" in d:
        try:
            kw["region"] = RegionConfig(**d["region"])
        except TypeError as e:
            raise ConfigError(f"bad region: {e}") from None
    out = d.get("output") or {}
    kw["output_path"] = out.get("path")
    kw["output_format"] = out.get("format", "csv")
    try:
        return RunConfig(**kw)
    except (TypeError, DomainError) as e:
        raise ConfigError(str(e)) from None


def load_config(path) -> RunConfig:
    try:
        text = Path(path).read_text()
    except OSError as e:
        raise ConfigError(f"cannot read config: {e}") from None
    try:
        d = json.loads(text)
    except json.JSONDecodeError as e:
        raise ConfigError(f"config is not valid JSON: {e}") from None
    return config_from_dict(d)
