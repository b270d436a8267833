from pydantic_settings import BaseSettings
from functools import lru_cache


class Settings(BaseSettings):
    # Environment Configuration
    ENVIRONMENT: str = "development"  # development, ci, production
    APP_HOST: str = "127.0.0.1"
    APP_PORT: int = 8000

    # Application Configuration
    APP_NAME: str = "Free Unitary Boundary Toolkit"
    DEBUG: bool = False

    # Numerics
    PRECISION_BITS: int = 128  # mpmath significand bits
    MARGIN: float = 1e-25  # verdict margin for high-precision inequalities
    MATRIX_MARGIN: float = 1e-9  # double-precision operator checks

    # Reproducibility / parallelism
    SEED: int = 7
    WORKERS: int = 1

    # Output
    OUTPUT_FORMAT: str = "csv"  # csv, json

    # Logging
    LOG_DIR: str = "."
    LOG_LEVEL: str = "INFO"

    # Limits
    MAX_CYLINDER_DEPTH: int = 14  # 2^depth cylinders
    WALK_STEP_CAP: int = 10_000_000  # per path, before a path counts as failed
    SCAN_DEPTH: int = 12  # disjoint-support scan length

    class Config:
        env_file = ".env"

    def __init__(self, **kwargs):
        super().__init__(**kwargs)

        if self.PRECISION_BITS < 64:
            raise ValueError("PRECISION_BITS must be at least 64")
        if self.OUTPUT_FORMAT not in ("csv", "json"):
            raise ValueError(f"Unknown OUTPUT_FORMAT: {self.OUTPUT_FORMAT}")

    @property
    def is_development(self) -> bool:
        return self.ENVIRONMENT == "development"


@lru_cache()
def get_settings() -> Settings:
    return Settings()
