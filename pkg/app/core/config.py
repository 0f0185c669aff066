from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    PROJECT_NAME: str = "Async LOCAL Coloring Lab"

    # Campaign ledger. SQLite by default; any SQLAlchemy URL works.
    DATABASE_URL: str = "sqlite:///./asynclocal.db"

    # Fix for hosts providing 'postgres://' which SQLAlchemy doesn't like (wants 'postgresql://')
    def __init__(self, **kwargs):
        super().__init__(**kwargs)
        if self.DATABASE_URL.startswith("postgres://"):
            self.DATABASE_URL = self.DATABASE_URL.replace("postgres://", "postgresql://", 1)

    LOG_LEVEL: str = "INFO"

    # Engine
    DEFAULT_MAX_STEPS: int = 1_000_000
    LIVELOCK_BOUND: int = 16

    # Enumeration guards (ASYNCLOCAL_GUARD_OVERRIDE=1 lifts all of them)
    GUARD_OVERRIDE: bool = False
    ENUM_MAX_NODES: int = 5
    ENUM_MAX_DEPTH: int = 6
    WSB_MAX_PROCESSES: int = 3
    WSB_STEP_BOUND: int = 8
    EQUIV_MAX_PROCESSES: int = 6
    BRUTE_FORCE_LIMIT: int = 5_000_000
    FAMILY_MATERIALIZE_LIMIT: int = 200_000

    # Adversaries
    RANDOM_ACTIVATION_P: float = 0.5
    RANDOM_CRASH_MEAN: float = 4.0
    SEARCH_BUDGET: int = 10_000
    SEARCH_EXHAUSTIVE_DEPTH: int = 3

    model_config = SettingsConfigDict(env_file=".env", env_prefix="ASYNCLOCAL_", extra="ignore")


settings = Settings()
