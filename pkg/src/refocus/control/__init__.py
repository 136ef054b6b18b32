from .fixtures import (
    ScriptAction,
    ScriptedConsole,
    ScriptedRole,
    ScriptedRun,
    ScriptedSensor,
    load_script,
    run_scripted_session,
    write_script,
)
from .messages import MESSAGE_TYPES, ROLES, Message, decode, encode
from .server import CONDITION_BEARING_TYPES, CONSOLE_SAFE_TYPES, ControlServer, ServerConfig

__all__ = [
    "CONDITION_BEARING_TYPES",
    "CONSOLE_SAFE_TYPES",
    "ControlServer",
    "MESSAGE_TYPES",
    "Message",
    "ROLES",
    "ScriptAction",
    "ScriptedConsole",
    "ScriptedRole",
    "ScriptedRun",
    "ScriptedSensor",
    "ServerConfig",
    "decode",
    "encode",
    "load_script",
    "run_scripted_session",
    "write_script",
]
