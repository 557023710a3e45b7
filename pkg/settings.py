"""
Configuration management for the quench dynamics toolkit.
Uses Pydantic BaseSettings for environment variable support.
"""

from typing import Literal, Optional
from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """
    Centralized configuration for evolution, oracle checks and output.
    All settings can be overridden via environment variables.
    """
    model_config = SettingsConfigDict(
        env_prefix='QUENCH_DYNAMICS_',
        env_file='.env',
        env_file_encoding='utf-8',
        extra='ignore'
    )

    # =====================================================================
    # Integration Settings
    # =====================================================================
    rk4_step: float = Field(
        default=1e-3,
        gt=0.0,
        le=0.1,
        description="Fixed RK4 step for the numerical Ermakov integrator"
    )
    divergence_cap: float = Field(
        default=1e12,
        gt=1.0,
        description="Exported values above this magnitude are capped and flagged diverged"
    )
    h_floor: float = Field(
        default=1e-9,
        gt=0.0,
        description="Smallest Ermakov scale accepted by the integrator"
    )
    degenerate_tol: float = Field(
        default=1e-12,
        gt=0.0,
        description="Tolerance for the sigma_f^2 + omega_c^2 == 0 threshold"
    )

    # =====================================================================
    # Scenario Defaults
    # =====================================================================
    t_max: float = Field(
        default=30.0,
        gt=0.0,
        description="Default evolution window"
    )
    n_samples: int = Field(
        default=3001,
        ge=2,
        description="Default number of time samples"
    )
    entropy_units: Literal["nats", "bits"] = Field(
        default="nats",
        description="Logarithm base for exported entropies"
    )

    # =====================================================================
    # Oracle Settings
    # =====================================================================
    oracle_points: int = Field(
        default=256,
        ge=64,
        le=2048,
        description="Grid points per axis for the discretized reduced kernel"
    )
    oracle_refine_points: int = Field(
        default=512,
        ge=64,
        le=4096,
        description="Refined grid used for the insufficient-grid check"
    )
    oracle_window_sigmas: float = Field(
        default=8.0,
        ge=6.0,
        description="Half-window in units of the widest Gaussian width"
    )
    wigner_quad_points: int = Field(
        default=256,
        ge=64,
        description="Quadrature points per axis for the numeric Wigner transform"
    )
    normalization_points: int = Field(
        default=32,
        ge=8,
        le=64,
        description="Points per axis for the 4D Wigner normalization integral"
    )
    refinement_tol: float = Field(
        default=1e-6,
        gt=0.0,
        description="Largest shift allowed when the oracle grid is refined"
    )

    # =====================================================================
    # Validation Settings
    # =====================================================================
    validation_seed: int = Field(
        default=20240601,
        description="Seed for randomly sampled validation times and points"
    )
    identity_samples: int = Field(
        default=100,
        ge=1,
        description="Random times per scenario in the identity suite"
    )
    oracle_times: int = Field(
        default=10,
        ge=1,
        description="Sampled times for each oracle comparison"
    )

    # =====================================================================
    # Performance Settings
    # =====================================================================
    max_workers: int = Field(
        default=4,
        ge=1,
        le=64,
        description="Worker threads for sweeps"
    )

    # =====================================================================
    # Logging Settings
    # =====================================================================
    log_level: str = Field(
        default="INFO",
        pattern="^(DEBUG|INFO|WARNING|ERROR|CRITICAL)$",
        description="Root log level"
    )
    log_format: Literal["console", "json"] = Field(
        default="console",
        description="Console text or JSON lines"
    )
    logs_dir: Optional[str] = Field(
        default=None,
        description="Directory for JSON log files (disabled when unset)"
    )

    # =====================================================================
    # Output Settings
    # =====================================================================
    output_dir: str = Field(
        default="output",
        description="Default directory for CSV/SVG artifacts"
    )
    float_format: str = Field(
        default=".10g",
        description="Format spec for floats in CSV output"
    )
    emit_svg: bool = Field(
        default=False,
        description="Render SVG line plots next to each CSV"
    )

    # =====================================================================
    # Server Settings
    # =====================================================================
    host: str = Field(
        default="127.0.0.1",
        description="Host for the HTTP service"
    )
    port: int = Field(
        default=8000,
        ge=1,
        le=65535,
        description="Port for the HTTP service"
    )

    # =====================================================================
    # Utility Methods
    # =====================================================================
    @classmethod
    def from_yaml(cls, config_path: str) -> "Settings":
        """Load settings from YAML configuration file."""
        import yaml
        with open(config_path, 'r') as f:
            config = yaml.safe_load(f) or {}
        return cls(**config)

    def to_yaml(self, config_path: str) -> None:
        """Save settings to YAML configuration file."""
        import yaml
        config = self.model_dump()
        with open(config_path, 'w') as f:
            yaml.dump(config, f, default_flow_style=False)


# Global settings instance
settings = Settings()


def reload_settings() -> Settings:
    """Reload settings from environment variables."""
    global settings
    settings = Settings()
    return settings
