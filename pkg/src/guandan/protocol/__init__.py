"""Room-based JSON wire protocol: message formats, room logic, transports."""

from .room import Hall, Room
from .client import WireAgentSession, run_bot_client

__all__ = ["Hall", "Room", "WireAgentSession", "run_bot_client"]
