"""Gateway service: engine wiring, FastAPI app, replay runner, config."""

from caif.service.config import AppConfig
from caif.service.engine import Engine, Session, SessionStatus, StepResult

__all__ = ["AppConfig", "Engine", "Session", "SessionStatus", "StepResult"]
