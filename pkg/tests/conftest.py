from __future__ import annotations

import pytest
from fastapi.testclient import TestClient

from strata.clock import TickingClock
from strata.service.api import create_app
from strata.service.config import ServiceConfig

START_MS = 1_700_000_000_000
STEP_MS = 1_000


def make_config(tmp_path, **overrides) -> ServiceConfig:
    defaults = dict(
        data_dir=str(tmp_path / "data"),
        mock_llm=True,
        sync_background=True,
        autosave_delay_s=0.0,
        resummarize_delay_s=None,
    )
    defaults.update(overrides)
    return ServiceConfig(**defaults)


def make_client(tmp_path, **overrides) -> TestClient:
    config = make_config(tmp_path, **overrides)
    app = create_app(config,
                     clock_factory=lambda: TickingClock(START_MS, STEP_MS))
    return TestClient(app)


@pytest.fixture
def client(tmp_path) -> TestClient:
    return make_client(tmp_path)
