"""Configuration manager for loading and saving experiment configs."""
import json
import logging
import sys
from pathlib import Path
from typing import Optional

from pydantic import ValidationError

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from ..errors import ConfigError
from ..models.config import ExperimentConfig

logger = logging.getLogger(__name__)

SUPPORTED_SUFFIXES = (".json", ".toml")


class ConfigManager:
    """Manages loading and saving of experiment configuration."""

    def __init__(self, config_file: Path):
        """Initialize the config manager.

        Args:
            config_file: Path to a JSON or TOML configuration file
        """
        self.config_file = Path(config_file)
        self._config: Optional[ExperimentConfig] = None

    def load(self) -> ExperimentConfig:
        """Load configuration from file.

        Returns:
            ExperimentConfig instance

        Raises:
            ConfigError: if the file is missing, unreadable or invalid
        """
        suffix = self.config_file.suffix.lower()
        if suffix not in SUPPORTED_SUFFIXES:
            raise ConfigError(
                f"Unsupported config format {suffix or '(none)'}: use .json or .toml"
            )
        if not self.config_file.exists():
            raise ConfigError(f"Config file not found: {self.config_file}")

        try:
            if suffix == ".toml":
                with open(self.config_file, "rb") as f:
                    data = tomllib.load(f)
            else:
                with open(self.config_file, "r", encoding="utf-8") as f:
                    data = json.load(f)
        except (OSError, json.JSONDecodeError, tomllib.TOMLDecodeError) as e:
            raise ConfigError(f"Cannot parse {self.config_file}: {e}") from e

        self._config = self.parse(data)
        logger.info(f"Configuration loaded from {self.config_file}")
        return self._config

    @staticmethod
    def parse(data: dict) -> ExperimentConfig:
        """Validate a configuration mapping.

        Raises:
            ConfigError: on any validation error
        """
        if not isinstance(data, dict):
            raise ConfigError("Configuration must be a table/object at top level")
        try:
            return ExperimentConfig.model_validate(data)
        except ValidationError as e:
            raise ConfigError(f"Invalid configuration: {e}") from e

    def save(self, config: Optional[ExperimentConfig] = None) -> None:
        """Save configuration as JSON (hyphenated keys).

        Args:
            config: Configuration to save (uses current if None)
        """
        if config is None:
            config = self._config

        if config is None:
            logger.warning("No configuration to save")
            return

        try:
            with open(self.config_file, "w", encoding="utf-8") as f:
                json.dump(config.model_dump(mode="json", by_alias=True), f, indent=2)
            self._config = config
            logger.info(f"Configuration saved to {self.config_file}")
        except OSError as e:
            raise ConfigError(f"Cannot write {self.config_file}: {e}") from e

    @property
    def config(self) -> ExperimentConfig:
        """Get current configuration, loading if necessary."""
        if self._config is None:
            self.load()
        return self._config
