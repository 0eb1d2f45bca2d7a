"""Asymmetric coded caching for (H, r) combination networks."""
from .kernels import BACKEND
from .topology import CombinationNetwork, build

__version__ = "0.1.0"

__all__ = ["BACKEND", "CombinationNetwork", "build"]
