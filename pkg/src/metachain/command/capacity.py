from __future__ import annotations

from dataclasses import replace

from metachain.campaign.config import Budgets

from .instance import InstanceCommand


class CapacityCommand(InstanceCommand):
    help = "lower and upper capacity bounds from explicit test functions, with the asymptotic value"
    task = "capacity"
    default_n = 2
    default_epsilon = 0.1

    @classmethod
    def add_parser_arguments(cls, parser):
        super().add_parser_arguments(parser)
        parser.add_argument("--samples", type=int, default=Budgets.samples, help="Monte Carlo transverse samples")
        parser.add_argument("--order", type=int, default=Budgets.order, help="points per axis of the tensor rules")
        parser.add_argument(
            "--grid-step",
            dest="grid_step",
            type=float,
            default=None,
            help="mesh of the reference grid, defaults to 1e-3 for one particle and 0.02 for two",
        )

    @classmethod
    def budgets_from(cls, options):
        budgets = super().budgets_from(options)
        return replace(budgets, samples=options.samples, order=options.order, grid_step=options.grid_step)

    def summary(self):
        if self.outcome is None:
            return []
        lines = [f"  {self.outcome.bracket}"]
        if self.outcome.record.log_cap_oracle is not None:
            lines.append(f"  grid reference log capacity {self.outcome.record.log_cap_oracle:.6g}")
        return lines + super().summary()


__all__ = [
    "CapacityCommand",
]
