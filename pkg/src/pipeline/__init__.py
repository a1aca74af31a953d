from .ao import AoConfig, AoResult, AoTrace, initialize, optimize, repair
from .events import Event, EventEmitter, EventType, emit_event, get_event_emitter

__all__ = [
    "AoConfig",
    "AoResult",
    "AoTrace",
    "Event",
    "EventEmitter",
    "EventType",
    "emit_event",
    "get_event_emitter",
    "initialize",
    "optimize",
    "repair",
]
