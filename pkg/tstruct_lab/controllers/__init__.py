from .command_controller import Command, CommandController

__all__ = [
    "Command",
    "CommandController",
]
