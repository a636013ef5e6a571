from pydantic_settings import BaseSettings
from functools import lru_cache

class Settings(BaseSettings):
    PROJECT_NAME: str = "KdV Saturated Feedback Simulator"

    # Output
    KDV_OUTPUT_DIR: str = "out"
    KDV_SNAPSHOT_STRIDE: int = 50
    KDV_LOG_LEVEL: str = "INFO"

    # Certificate tolerances
    KDV_ENVELOPE_SLACK: float = 0.02
    KDV_ENERGY_SLACK: float = 1e-10

    # Stepper
    KDV_CFL_SAFETY: float = 0.5
    KDV_MAX_RETRIES: int = 5

    # Picard oracle is dense, keep it small
    KDV_PICARD_MAX_N: int = 64
    KDV_PICARD_MAX_ITER: int = 50

    # Property suites
    KDV_DEFAULT_SEED: int = 20240601
    KDV_SECTOR_SAMPLES: int = 10_000
    KDV_LIPSCHITZ_SAMPLES: int = 100_000

    class Config:
        env_file = ".env"
        case_sensitive = True

@lru_cache()
def get_settings():
    return Settings()
