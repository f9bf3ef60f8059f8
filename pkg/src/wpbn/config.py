"""Scenario parameters and unit conversions."""
from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass

from .errors import ConfigurationError


def dbm_to_watts(dbm: float) -> float:
    return 10.0 ** ((dbm - 30.0) / 10.0)


def db_to_linear(db: float) -> float:
    return 10.0 ** (db / 10.0)


def linear_to_db(x: float) -> float:
    return 10.0 * math.log10(x)


# Evaluation defaults: 40 dBm PBs, beta = 0.5, unit link distance, -40 dB
# noise read as relative to 1 W, alpha = 4, single harvested PB.
DEFAULT_PC = dbm_to_watts(40.0)
DEFAULT_N0 = db_to_linear(-40.0)


@dataclass(frozen=True)
class NetworkConfig:
    """Physical and geometric parameters of one scenario.

    Densities are per square meter, powers in watts, distances in meters.
    """

    lambda_p: float = 0.1
    lambda_b: float = 0.01
    P_C: float = DEFAULT_PC
    beta: float = 0.5
    d00: float = 1.0
    N0: float = DEFAULT_N0
    alpha_f: float = 4.0
    alpha_b: float = 4.0
    Np: int = 1

    def __post_init__(self):
        problems = []
        for name in ("lambda_p", "lambda_b", "P_C", "d00"):
            if not getattr(self, name) > 0:
                problems.append(f"{name} > 0 (got {getattr(self, name)!r})")
        if not self.N0 >= 0:
            problems.append(f"N0 >= 0 (got {self.N0!r})")
        if not 0 <= self.beta <= 1:
            problems.append(f"0 <= beta <= 1 (got {self.beta!r})")
        for name in ("alpha_f", "alpha_b"):
            if not getattr(self, name) > 2:
                problems.append(f"{name} > 2 (got {getattr(self, name)!r})")
        if isinstance(self.Np, bool) or int(self.Np) != self.Np or self.Np < 1:
            problems.append(f"Np integer >= 1 (got {self.Np!r})")
        if problems:
            raise ConfigurationError("invalid NetworkConfig: requires " + "; ".join(problems))
        object.__setattr__(self, "Np", int(self.Np))

    def replace(self, **changes) -> "NetworkConfig":
        return dataclasses.replace(self, **changes)
