from enum import Enum
from functools import cache

from pydantic import PositiveInt
from pydantic_settings import (
    BaseSettings,
    PydanticBaseSettingsSource,
    SettingsConfigDict,
    YamlConfigSettingsSource
)


class Policy(str, Enum):
    GOALS_FIRST = "goals-first"
    UTILITY_FIRST = "utility-first"


class Level(str, Enum):
    ARGUMENTS = "arguments"
    GOALS = "goals"


class ResourceMode(str, Enum):
    PER_RULE = "per-rule"
    BUDGET = "budget"


class Settings(BaseSettings):
    """ Settings can be read from a config.yaml file,
        or from the environment, with environment variables prepended
        with "goal_arbiter_" (case insensitive). The environment variables can
        be passed in the environment or in a .env file.
    """

    log_level: str = 'INFO'
    bound: PositiveInt = 25
    policy: Policy = Policy.GOALS_FIRST
    level: Level = Level.ARGUMENTS
    resource_mode: ResourceMode = ResourceMode.PER_RULE
    joint_resources: bool = False

    model_config = SettingsConfigDict(
        yaml_file="config.yaml",
        env_file='.env',
        env_prefix='goal_arbiter_',
        env_nested_delimiter="__",
        env_file_encoding='utf-8'
    )

    @classmethod
    def settings_customise_sources(  # noqa: PLR0913
        cls,
        settings_cls: type[BaseSettings],
        init_settings: PydanticBaseSettingsSource,
        env_settings: PydanticBaseSettingsSource,
        dotenv_settings: PydanticBaseSettingsSource,
        file_secret_settings: PydanticBaseSettingsSource,
    ) -> tuple[PydanticBaseSettingsSource, ...]:
        return (
            init_settings,
            env_settings,
            dotenv_settings,
            YamlConfigSettingsSource(settings_cls),
            file_secret_settings,
        )


@cache
def get_settings():
    return Settings()
