"""Configuration management for carc."""

import os
import sys
from pathlib import Path
from typing import Any

import yaml
from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict

DEFAULT_MASTER_SEED = 20250731


class GenerationSettings(BaseSettings):
    """Dataset generation settings."""

    model_config = SettingsConfigDict(env_prefix="CARC_GENERATION_")

    master_seed: int = DEFAULT_MASTER_SEED
    counterfactuals_per_demo: int = 5
    # Adjacency matrices above this variable count are left out of task JSON
    max_adjacency_vars: int = 400


class OracleSettings(BaseSettings):
    """Brute-force graph oracle settings."""

    model_config = SettingsConfigDict(env_prefix="CARC_ORACLE_")

    max_cells: int = 64
    random_contexts: int = 8
    seed: int = 0


class GatewaySettings(BaseSettings):
    """Language model gateway settings."""

    model_config = SettingsConfigDict(env_prefix="CARC_GATEWAY_")

    in_flight_limit: int = 4
    transcript_path: Path = Path("transcripts/gateway.jsonl")
    openai_base_url: str = "https://api.openai.com/v1"
    anthropic_base_url: str = "https://api.anthropic.com"
    anthropic_version: str = "2023-06-01"


class ExecutorSettings(BaseSettings):
    """Candidate program executor settings."""

    model_config = SettingsConfigDict(env_prefix="CARC_EXECUTOR_")

    command: list[str] = Field(default_factory=lambda: [sys.executable])
    wall_clock_seconds: float = 10.0
    memory_mb: int = 512
    max_output_bytes: int = 1_000_000


class DiscoverySettings(BaseSettings):
    """PC baseline settings."""

    model_config = SettingsConfigDict(env_prefix="CARC_DISCOVERY_")

    alpha: float = 0.01
    max_cond: int = 2
    min_stratum: int = 5
    n_list: list[int] = Field(default_factory=lambda: [1000, 5000, 10000])


class EvaluationSettings(BaseSettings):
    """Benchmark defaults."""

    model_config = SettingsConfigDict(env_prefix="CARC_EVALUATION_")

    replicates: int = 5
    held_out_pairs: int = 3
    demo_count: int = 3


class Settings(BaseSettings):
    """Main application settings."""

    model_config = SettingsConfigDict(
        env_prefix="CARC_",
        env_nested_delimiter="__",
    )

    generation: GenerationSettings = Field(default_factory=GenerationSettings)
    oracle: OracleSettings = Field(default_factory=OracleSettings)
    gateway: GatewaySettings = Field(default_factory=GatewaySettings)
    executor: ExecutorSettings = Field(default_factory=ExecutorSettings)
    discovery: DiscoverySettings = Field(default_factory=DiscoverySettings)
    evaluation: EvaluationSettings = Field(default_factory=EvaluationSettings)


def get_config_path() -> Path:
    """Get the configuration file path."""
    override = os.environ.get("CARC_CONFIG")
    if override:
        return Path(override)
    return Path.home() / ".config" / "carc" / "config.yaml"


def load_settings() -> Settings:
    """Load settings from config file and environment."""
    config_path = get_config_path()

    if config_path.exists():
        with open(config_path) as f:
            config_data: dict[str, Any] = yaml.safe_load(f) or {}
        return Settings(**config_data)

    return Settings()


# Global settings instance
settings = load_settings()
