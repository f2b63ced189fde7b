"""Pydantic models for the REST surface and websocket message validation."""

from typing import Literal, Optional

from pydantic import BaseModel, ValidationError


class HealthResponse(BaseModel):
    status: Literal["ok"] = "ok"


class MetaResponse(BaseModel):
    classes: list[str]
    resolution: tuple[int, int]
    mode: Literal["human", "agent", "takeover"]
    tick: int
    tick_hz: float
    has_model: bool
    recording: bool


class InputMessage(BaseModel):
    type: Literal["input"]
    tick: int = 0
    class_id: int


class ModeMessage(BaseModel):
    type: Literal["mode"]
    mode: Literal["human", "agent", "takeover"]


class RecordMessage(BaseModel):
    type: Literal["record"]
    action: Literal["start", "stop"]
    path: Optional[str] = None


_CLIENT_TYPES = {"input": InputMessage, "mode": ModeMessage, "record": RecordMessage}


def parse_client_message(raw: dict):
    """Returns a validated message model or raises ValueError with a reason."""
    if not isinstance(raw, dict) or "type" not in raw:
        raise ValueError("message must be an object with a 'type' field")
    model = _CLIENT_TYPES.get(raw["type"])
    if model is None:
        raise ValueError(f"unknown message type {raw['type']!r}")
    try:
        return model.model_validate(raw)
    except ValidationError as exc:
        raise ValueError(f"invalid {raw['type']} message: {exc.errors()[0]['msg']}")
