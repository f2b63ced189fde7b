"""Live gateway service: websocket frame streaming plus a small REST surface."""

from .app import create_app
from .gateway import Gateway

__all__ = ["create_app", "Gateway"]
