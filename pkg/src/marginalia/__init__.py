"""Gaze+pen lecture note-taking: deterministic session engine, relay server,
and replay tooling."""

__version__ = "0.1.0"

from .engine import EngineConfig, Session
from .ingest import LectureBundle, load_bundle, validate_bundle
from .notes import NoteDocument

__all__ = [
    "EngineConfig",
    "Session",
    "LectureBundle",
    "load_bundle",
    "validate_bundle",
    "NoteDocument",
    "__version__",
]
