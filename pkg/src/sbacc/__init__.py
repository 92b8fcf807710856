"""Berrut approximated coded computing with DCT-code error correction."""

from .config import ConfigError, ExperimentConfig, load_config
from .protocol import RunResult, Scheme, run_scheme

__version__ = "0.1.0"

__all__ = ["ConfigError", "ExperimentConfig", "RunResult", "Scheme", "load_config", "run_scheme"]
