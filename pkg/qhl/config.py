from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Harness settings loaded from ``QHL_*`` environment variables.

    ``threads`` caps the worker pool used to run suite cases in parallel.
    ``m`` and ``degree`` are the default variable count and truncation cap
    for ``compute`` and ``verify``; command-line flags take precedence.
    ``report_timing`` adds wall-clock time to reports, which makes them
    differ between otherwise identical runs.
    """

    model_config = SettingsConfigDict(env_prefix="QHL_")

    threads: int = Field(default=1, ge=1)
    m: int = Field(default=4, ge=1)
    degree: int = Field(default=6, ge=1)
    seed: int = 0
    log_level: str = "WARNING"
    report_timing: bool = False
