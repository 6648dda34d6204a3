"""Utils package."""
from .config_manager import ConfigManager
from .logging_config import setup_logging
from .search import minimal_coefficient

__all__ = [
    "ConfigManager",
    "setup_logging",
    "minimal_coefficient",
]
