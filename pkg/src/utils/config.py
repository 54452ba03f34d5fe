"""
Driver defaults from the environment (an optional .env file is honoured).
"""
import logging
import os
from typing import Optional

from dotenv import load_dotenv
from pydantic import BaseModel, Field, ValidationError

from src.state.errors import ParseError
from src.state.schema import DriverConfig

load_dotenv()


class Settings(BaseModel):
    steps_per_stage: int = Field(default=64, ge=1, description="FIXPOINT_STEPS_PER_STAGE")
    max_stages: int = Field(default=4, ge=1, description="FIXPOINT_MAX_STAGES")
    log_level: str = Field(default="WARNING", description="FIXPOINT_LOG_LEVEL")

    def driver_config(self, steps_per_stage: Optional[int] = None, max_stages: Optional[int] = None) -> DriverConfig:
        """CLI flags win over the environment."""
        try:
            return DriverConfig(
                steps_per_stage=self.steps_per_stage if steps_per_stage is None else steps_per_stage,
                max_stages=self.max_stages if max_stages is None else max_stages,
            )
        except ValidationError as e:
            raise ParseError(f"bad driver setting: {e.errors()[0]['msg']}") from e

    @property
    def log_level_number(self) -> int:
        return getattr(logging, self.log_level.upper(), logging.WARNING)


def get_settings() -> Settings:
    values = {}
    for field, var in (("steps_per_stage", "FIXPOINT_STEPS_PER_STAGE"),
                       ("max_stages", "FIXPOINT_MAX_STAGES"),
                       ("log_level", "FIXPOINT_LOG_LEVEL")):
        if os.getenv(var):
            values[field] = os.getenv(var)
    try:
        return Settings(**values)
    except ValidationError as e:
        raise ParseError(f"bad environment setting: {e.errors()[0]['msg']}") from e
