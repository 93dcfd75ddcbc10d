from __future__ import annotations

import logging


class Session:
    """Represents one command invocation."""

    def __init__(self, verbosity, name, command) -> None:
        self._verbosity = verbosity
        self._name = name
        self._command = command

    @property
    def verbosity(self):
        """The verbosity of the run."""
        return self._verbosity

    @property
    def name(self):
        """The name the command was selected with."""
        return self._name

    @property
    def command(self):
        """The command object doing the work."""
        return self._command

    def run(self):
        logging.debug("run %r", self._command)
        self._command.run()

    def __enter__(self):
        return self

    def __exit__(self, exc_type, exc_val, exc_tb):
        self._command.out.flush()


__all__ = [
    "Session",
]
