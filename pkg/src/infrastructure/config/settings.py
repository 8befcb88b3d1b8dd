from functools import lru_cache

from pydantic import model_validator
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    # App
    app_name: str = "MedFACT"
    app_version: str = "0.1.0"
    debug: bool = False
    log_level: str = "INFO"

    # Artifacts
    default_out_dir: str = "runs"

    # Correlation estimation
    correlation_sample_cap: int = 2048  # Patients sampled per R estimate

    # OpenTelemetry tracing (off by default for command-line runs)
    telemetry_enabled: bool = False
    telemetry_exporter: str = "console"  # Options: "console", "otlp", "none"
    telemetry_otlp_endpoint: str | None = None  # e.g., "http://localhost:4317"
    telemetry_sample_rate: float = 1.0  # Sampling rate (0.0-1.0)
    telemetry_environment: str = "development"

    @model_validator(mode="after")
    def validate_telemetry_config(self) -> "Settings":
        """Validate exporter choice and its required endpoint"""
        if self.telemetry_exporter not in ("console", "otlp", "none"):
            raise ValueError(
                f"Invalid telemetry_exporter '{self.telemetry_exporter}'. "
                f"Must be one of: 'console', 'otlp', 'none'"
            )
        if self.telemetry_exporter == "otlp" and not self.telemetry_otlp_endpoint:
            raise ValueError(
                "telemetry_otlp_endpoint is required when telemetry_exporter is 'otlp'. "
                "Set MEDFACT_TELEMETRY_OTLP_ENDPOINT."
            )
        if not 0.0 <= self.telemetry_sample_rate <= 1.0:
            raise ValueError("telemetry_sample_rate must lie in [0, 1]")
        if self.correlation_sample_cap < 1:
            raise ValueError("correlation_sample_cap must be positive")
        return self

    model_config = SettingsConfigDict(
        env_prefix="MEDFACT_",
        env_file=".env",
        env_file_encoding="utf-8",
        extra="ignore",
        case_sensitive=False,
    )


@lru_cache
def get_settings() -> Settings:
    return Settings()
