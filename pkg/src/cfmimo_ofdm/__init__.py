"""Cell-free massive MIMO-OFDM link-level simulator."""

from .config import ConfigError, SimConfig, load_config, validate
from .harness import run_experiment, summarize, write_outputs

__all__ = ["ConfigError", "SimConfig", "load_config", "validate", "run_experiment",
           "summarize", "write_outputs"]
__version__ = "0.1.0"
