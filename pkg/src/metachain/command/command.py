from __future__ import annotations

import sys
from abc import ABC, abstractmethod


class Command(ABC):
    """A metachain sub-command, discovered through the ``metachain.command`` entry point group."""

    help = ""

    def __init__(self, options) -> None:
        """
        Create.

        :param options: the parsed options as defined within :meth:`add_parser_arguments`
        """
        self.env = options.env
        self.out = sys.stdout

    @classmethod
    def add_parser_arguments(cls, parser):
        """
        Add CLI arguments for this command.

        :param parser: the argument group of the command
        """

    @abstractmethod
    def run(self):
        """Execute the command, tables and CSV rows go to :attr:`out`."""
        raise NotImplementedError

    def summary(self):
        """Lines of the closing report."""
        return []

    def __repr__(self) -> str:
        return f"{self.__class__.__name__}()"


def add_instance_arguments(parser, n, epsilon=None):
    parser.add_argument("--n", type=int, default=n, help="number of particles")
    parser.add_argument("--mu", type=float, default=2.0, help="coupling ratio, gamma = mu * gamma_1^N")
    if epsilon is not None:
        parser.add_argument("--eps", dest="eps", type=float, default=epsilon, help="noise intensity")


def add_run_arguments(parser):
    parser.add_argument("--rho", type=float, default=0.2, help="radius of the target balls in mode coordinates")
    parser.add_argument("--seed", type=int, default=0, help="seed of the random streams")
    parser.add_argument("--workers", type=int, default=1, help="processes to use")
    parser.add_argument(
        "--out",
        default=None,
        help="folder receiving results.csv, results.meta.json and the record (rows go to stdout regardless)",
    )
    parser.add_argument(
        "--no-oracle",
        dest="no_oracle",
        action="store_true",
        help="skip the one and two particle reference computations",
    )


__all__ = [
    "Command",
    "add_instance_arguments",
    "add_run_arguments",
]
