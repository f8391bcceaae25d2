"""Adapter configuration."""

from __future__ import annotations

import os
from dataclasses import dataclass

from .errors import ConfigError

#: Default labeling prompt. It must direct the model toward countable
#: objects, request singular comma-separated names, and embed the per-image
#: identification code that the response validator checks for.
DEFAULT_PROMPT_TEMPLATE = (
    "List the objects visible in this image. Reply with singular object "
    "names separated by commas, naming each kind once. Only include "
    "countable objects; skip backgrounds and uncountable regions such as "
    "sky, grass or water. Start your reply with the identification code "
    "{code} followed by a colon."
)


@dataclass(frozen=True)
class AdapterConfig:
    """Endpoints, checkpoints and behavior knobs of the annotation pipeline.

    Credentials never live in the config: ``credentials_env`` names the
    environment variable holding the API key for the labeling endpoint.
    """

    llm_endpoint: str = ""
    credentials_env: str = "SCENE_ADAPTER_API_KEY"
    detector_checkpoint: str = ""
    segmenter_checkpoint: str = ""
    prompt_template: str = DEFAULT_PROMPT_TEMPLATE
    request_timeout: float = 60.0
    retry_budget: int = 2
    score_floor: float = 0.05

    def __post_init__(self):
        if "{code}" not in self.prompt_template:
            raise ConfigError("prompt_template must contain the {code} placeholder")
        if self.retry_budget < 0:
            raise ConfigError("retry_budget must be >= 0")
        if self.request_timeout <= 0:
            raise ConfigError("request_timeout must be positive")
        if not (0.0 <= self.score_floor <= 1.0):
            raise ConfigError("score_floor must be in [0, 1]")

    def credentials(self) -> str | None:
        return os.environ.get(self.credentials_env)
