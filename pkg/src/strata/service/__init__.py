"""Persistence, HTTP API, push channel, and orchestration."""

from .config import ServiceConfig
from .persistence import load_workspace, save_workspace
from .store import WorkspaceStore

__all__ = ["ServiceConfig", "WorkspaceStore", "load_workspace", "save_workspace"]
