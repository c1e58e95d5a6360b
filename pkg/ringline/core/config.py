"""
Ringline - Core Configuration
Workbench limits and runtime settings using pydantic
"""

from typing import Optional

from pydantic_settings import BaseSettings


class Settings(BaseSettings):
    """Workbench settings, overridable with RINGLINE_* environment variables"""

    # Rings
    cap: int = 4096
    exhaustive_axiom_limit: int = 256
    axiom_samples: int = 10_000
    seed: int = 20_050_101

    # Lines and groups
    gl2_enumeration_limit: int = 16
    parallel_oracle_limit: int = 2000
    invariance_check_limit: int = 500
    transitivity_limit: int = 2000

    # Designs
    block_cap: int = 1_000_000
    subset_cap: int = 10_000_000
    transversal_check_limit: int = 5000
    lambda_samples: int = 100
    isomorphism_limit: int = 64

    # Runtime
    threads: int = 1
    log_level: str = "WARNING"
    log_file: Optional[str] = None

    class Config:
        env_prefix = "RINGLINE_"
        env_file = ".env"
        case_sensitive = False
        extra = "ignore"


settings = Settings()
