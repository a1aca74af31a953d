"""Configuration management."""

from functools import lru_cache
from pathlib import Path
from typing import Any, Optional

import yaml
from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict

DEFAULT_CONFIG_DIR = "config"
REPO_CONFIG_DIR = Path(__file__).resolve().parents[2] / "config"


class Settings(BaseSettings):
    """Process-level settings loaded from environment variables."""

    model_config = SettingsConfigDict(
        env_file=".env",
        env_file_encoding="utf-8",
        extra="ignore",
    )

    # App
    app_env: str = Field(default="development", alias="APP_ENV")
    app_name: str = "Beamhop Optimizer"
    app_version: str = "1.0.0"

    # Output
    output_dir: str = Field(default="./output", alias="BEAMHOP_OUTPUT_DIR")
    config_dir: str = Field(default=DEFAULT_CONFIG_DIR, alias="BEAMHOP_CONFIG_DIR")

    # Parallelism
    workers: int = Field(default=4, ge=1, alias="BEAMHOP_WORKERS")

    # Logging
    log_level: str = Field(default="INFO", alias="LOG_LEVEL")
    log_file: Optional[str] = Field(default=None, alias="LOG_FILE")
    log_json: bool = Field(default=False, alias="LOG_JSON")

    @property
    def output_path(self) -> Path:
        """Get the output directory as a Path."""
        return Path(self.output_dir)

    @property
    def is_production(self) -> bool:
        """Check if running in production."""
        return self.app_env == "production"


class YAMLConfig:
    """Load solver and scenario defaults from YAML files."""

    def __init__(self, config_dir: str | Path = "config", env: str = "development"):
        self.config_dir = Path(config_dir)
        self.env = env
        self._config: dict[str, Any] = {}
        self._load_config()

    def _load_config(self) -> None:
        """Load base config and environment-specific overrides."""

        base_path = self.config_dir / "config.yaml"
        if base_path.exists():
            with open(base_path) as f:
                self._config = yaml.safe_load(f) or {}

        env_path = self.config_dir / f"config.{self.env}.yaml"
        if env_path.exists():
            with open(env_path) as f:
                env_config = yaml.safe_load(f) or {}
                self._deep_merge(self._config, env_config)

    def _deep_merge(self, base: dict, override: dict) -> None:
        """Recursively merge override into base."""
        for key, value in override.items():
            if key in base and isinstance(base[key], dict) and isinstance(value, dict):
                self._deep_merge(base[key], value)
            else:
                base[key] = value

    def get(self, path: str, default: Any = None) -> Any:
        """Get config value by dot-notation path."""
        keys = path.split(".")
        value = self._config
        for key in keys:
            if isinstance(value, dict) and key in value:
                value = value[key]
            else:
                return default
        return value

    def section(self, path: str) -> dict[str, Any]:
        """Get a config mapping by dot-notation path, empty if absent."""
        value = self.get(path, {})
        return dict(value) if isinstance(value, dict) else {}


@lru_cache()
def get_settings() -> Settings:
    """Get cached settings instance."""
    return Settings()


@lru_cache()
def get_yaml_config() -> YAMLConfig:
    """Get cached YAML config instance for the configured directory and APP_ENV.

    The default relative `config` directory falls back to the repository copy
    when the process runs from elsewhere.
    """
    settings = get_settings()
    config_dir = Path(settings.config_dir)
    if not config_dir.exists() and settings.config_dir == DEFAULT_CONFIG_DIR:
        config_dir = REPO_CONFIG_DIR
    return YAMLConfig(config_dir, env=settings.app_env)
