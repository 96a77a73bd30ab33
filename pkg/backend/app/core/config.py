from pydantic_settings import BaseSettings
from typing import Optional
from dotenv import load_dotenv

load_dotenv()

class Settings(BaseSettings):
    # Interval arithmetic
    PRECISION: int = 64
    MAX_PRECISION: int = 256

    # Solver
    EPS: float = 1e-12
    MIN_WIDTH: float = 1e-15
    MAX_SPLITS: int = 1000000

    # Normalizer resource limits
    MAX_DEPTH: int = 32
    MAX_MONOMIALS: int = 1000000

    # Catalog deduplication target width
    DEDUP_WIDTH: float = 1e-30

    # Fan-out for per-system solving and layer admission (1 = sequential)
    WORKERS: int = 1

    # Output
    OUTPUT_FORMAT: str = "text"
    LOG_LEVEL: str = "WARNING"
    LOG_FILE: Optional[str] = None

    class Config:
        env_file = ".env"
        env_prefix = "EXPCERT_"
        case_sensitive = True
        extra = "ignore"

settings = Settings()
