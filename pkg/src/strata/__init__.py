"""Multilevel canvas workspace engine with LLM-assisted exploration."""

__version__ = "0.1.0"
