"""Coverage and capacity of wirelessly powered backscatter networks.

Power beacons (PBs) and backscatter nodes (BNs) form independent Poisson
point processes; BNs reflect a fraction of the carrier harvested from nearby
PBs. The package provides point-process samplers, channel models, special
functions, closed-form and semi-analytic coverage expressions, a network
simulator and a spec-driven experiment runner.
"""
from .config import NetworkConfig
from .errors import ConfigurationError, NumericalError, RealizationInfeasible

__all__ = ["NetworkConfig", "ConfigurationError", "NumericalError", "RealizationInfeasible"]
__version__ = "0.1.0"
