"""Service configuration: ports, data directory, provider profile, lens
thresholds, layout constants, and background-task behavior."""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field, fields, replace
from pathlib import Path

from ..errors import ConfigInvalid
from ..lens import LensThresholds
from ..llm.provider import ProviderProfile

API_KEY_ENV = "STRATA_API_KEY"


@dataclass
class LayoutConfig:
    """Placement constants for generated nodes: responses and question lists
    land below their source; subtopics fan out on a circle around it."""

    response_gap: float = 160.0
    subtopic_radius: float = 320.0


@dataclass
class ServiceConfig:
    host: str = "127.0.0.1"
    port: int = 8787
    data_dir: str = "data"
    demo: bool = False
    mock_llm: bool = False
    mock_fixtures_dir: str | None = None
    glossary_path: str | None = None

    provider: ProviderProfile = field(default_factory=lambda: ProviderProfile())
    lens: LensThresholds = field(default_factory=LensThresholds)
    layout: LayoutConfig = field(default_factory=LayoutConfig)

    autosave_delay_s: float = 2.0
    # None disables automatic topic re-summarization entirely
    resummarize_delay_s: float | None = 5.0
    edit_revisit_age_ms: int = 60_000
    dive_subtopics: int = 5
    populate_on_dive: bool = True
    # run dive population and re-summarization inline instead of on worker
    # threads; deterministic mode for tests
    sync_background: bool = False

    @classmethod
    def load(cls, path: str | Path | None = None, **overrides) -> "ServiceConfig":
        """Build a config from an optional JSON file, the environment, and
        keyword overrides (highest precedence)."""
        raw: dict = {}
        if path is not None:
            try:
                raw = json.loads(Path(path).read_text(encoding="utf-8"))
            except OSError as exc:
                raise ConfigInvalid(f"cannot read config file: {exc}") from exc
            except json.JSONDecodeError as exc:
                raise ConfigInvalid(f"config file is not valid JSON: {exc}") from exc
        config = cls._from_dict(raw)
        env_key = os.environ.get(API_KEY_ENV) or os.environ.get("OPENAI_API_KEY")
        if env_key and not config.provider.api_key:
            config.provider = replace(config.provider, api_key=env_key)
        for name, value in overrides.items():
            if value is not None:
                setattr(config, name, value)
        return config

    @classmethod
    def _from_dict(cls, raw: dict) -> "ServiceConfig":
        known = {f.name for f in fields(cls)}
        unknown = raw.keys() - known
        if unknown:
            raise ConfigInvalid(f"unknown config keys: {sorted(unknown)}")
        kwargs = dict(raw)
        if "provider" in kwargs:
            kwargs["provider"] = ProviderProfile(**kwargs["provider"])
        if "lens" in kwargs:
            kwargs["lens"] = LensThresholds(**kwargs["lens"])
        if "layout" in kwargs:
            kwargs["layout"] = LayoutConfig(**kwargs["layout"])
        try:
            return cls(**kwargs)
        except TypeError as exc:
            raise ConfigInvalid(str(exc)) from exc

    def validate(self) -> None:
        if self.port < 0 or self.port > 65535:
            raise ConfigInvalid(f"port {self.port} out of range")
        if not self.mock_llm and not self.provider.api_key:
            raise ConfigInvalid(
                f"no provider API key configured (set {API_KEY_ENV}) "
                "and mock mode is disabled")
        if self.lens.summary_min > self.lens.all_min:
            raise ConfigInvalid("lens thresholds must satisfy summary_min <= all_min")
        if self.dive_subtopics < 1:
            raise ConfigInvalid("dive_subtopics must be >= 1")
