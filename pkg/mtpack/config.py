import sys
from typing import Optional
from functools import lru_cache
from logging.config import dictConfig
import logging

from pydantic import BaseModel, Field, field_validator
from pydantic_settings import SettingsConfigDict, BaseSettings
from pydantic_core import ValidationError


@lru_cache()
def get_settings():
    """
    Return a cached instance of the settings
    """
    return Settings()


class Settings(BaseSettings):
    """
    App configuration settings
    """

    version: str = "1.0"
    log_level: str = "INFO"
    log_file: Optional[str] = None
    workers: int = Field(default=1, ge=1)
    max_attempts: int = Field(default=20_000, ge=1)
    search_max_nodes: int = Field(default=2_000_000, ge=1)
    oracle_max_nodes: int = Field(default=20_000_000, ge=1)
    report_timings: bool = False

    @field_validator("log_level")
    @classmethod
    def validate_log_level(cls, v: str) -> str:
        """Accept only level names the logging module knows."""
        level = v.upper()
        if level not in logging.getLevelNamesMapping():
            raise ValueError(f"Unknown log level {v!r}")
        return level

    model_config = SettingsConfigDict(
        env_file="mtpack.env", env_prefix="MTPACK_", extra="ignore"
    )


try:
    settings = get_settings()
except ValidationError as e:
    logging.basicConfig(level=logging.ERROR)
    logging.fatal(
        "Invalid settings. Please inspect the below error and edit your "
        "mtpack.env file or MTPACK_* variables."
    )
    logging.fatal(e)
    sys.exit(1)


class LogConfig(BaseModel):
    """Logger configuration"""

    LOGGER_NAME: str = "mtpack"
    LOG_FORMAT: str = "%(asctime)s:%(levelname)s:%(module)s:%(message)s"
    LOG_LEVEL: str = settings.log_level
    version: int = 1
    disable_existing_loggers: bool = False
    formatters: dict = {
        "default": {
            "format": LOG_FORMAT,
            "datefmt": "%Y-%m-%d %H:%M:%S",
        },
    }
    handlers: dict = {
        "console": {
            "formatter": "default",
            "class": "logging.StreamHandler",
            "stream": "ext://sys.stderr",
        },
    }
    loggers: dict = {
        "mtpack": {
            "handlers": ["console"],
            "level": LOG_LEVEL,
        },
    }

    @classmethod
    def for_settings(cls, config: Settings) -> "LogConfig":
        """
        Build the logging config, adding a rotating file handler only when
        a log file is configured
        """
        log_config = cls(LOG_LEVEL=config.log_level)
        log_config.loggers["mtpack"]["level"] = config.log_level
        if config.log_file:
            log_config.handlers["file"] = {
                "formatter": "default",
                "class": "logging.handlers.TimedRotatingFileHandler",
                "filename": config.log_file,
                "when": "midnight",
                "interval": 30,
                "backupCount": 6,
            }
            log_config.loggers["mtpack"]["handlers"] = ["console", "file"]
        return log_config


dictConfig(LogConfig.for_settings(settings).model_dump())
log = logging.getLogger("mtpack")
