from __future__ import annotations

from collections import OrderedDict

from metachain.command.campaign import CampaignCommand
from metachain.command.capacity import CapacityCommand
from metachain.command.prefactor import PrefactorCommand
from metachain.command.simulate import SimulateCommand
from metachain.command.spectrum import SpectrumCommand

from .base import ComponentBuilder

BUILTIN = OrderedDict(
    (
        ("spectrum", SpectrumCommand),
        ("prefactor", PrefactorCommand),
        ("simulate", SimulateCommand),
        ("capacity", CapacityCommand),
        ("campaign", CampaignCommand),
    ),
)


class CommandSelector(ComponentBuilder):
    def __init__(self, parser) -> None:
        possible = OrderedDict(BUILTIN)
        for key, command_class in self.options("metachain.command").items():
            possible.setdefault(key, command_class)
        super().__init__(parser, "command", possible)

    def add_selector_arg_parse(self, name, choices):
        self.parser.add_argument(
            name,
            nargs="?",
            choices=choices,
            metavar=name,
            help=f"what to run, one of: {', '.join(f'{k} ({v.help})' for k, v in self.possible.items())}",
        )


__all__ = [
    "CommandSelector",
]
