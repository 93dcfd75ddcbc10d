from __future__ import annotations

from dataclasses import replace

from metachain.campaign.config import Budgets
from metachain.simulate.hitting import EXPONENTIAL_CV, START_CHOICES

from .instance import InstanceCommand


class SimulateCommand(InstanceCommand):
    help = "first hitting times of B_+ by Euler-Maruyama, compared with the Eyring-Kramers predictions"
    task = "simulate"
    default_n = 1
    default_epsilon = 0.08

    def __init__(self, options) -> None:
        super().__init__(options)
        self.refine = options.refine
        self.start = options.start

    @classmethod
    def add_parser_arguments(cls, parser):
        super().add_parser_arguments(parser)
        parser.add_argument("--dt", type=float, default=None, help="time step, defaults to 1e-3 / max |lambda_k|")
        parser.add_argument("--trajectories", type=int, default=Budgets.trajectories, help="number of trajectories")
        parser.add_argument(
            "--max-time",
            dest="max_time",
            type=float,
            default=None,
            help="censoring time, defaults to fifty times the predicted mean",
        )
        parser.add_argument("--start", choices=START_CHOICES, default="minimum", help="where trajectories start")
        parser.add_argument("--refine", action="store_true", help="also rerun with dt/2 and report the shift")

    @classmethod
    def budgets_from(cls, options):
        budgets = super().budgets_from(options)
        return replace(budgets, trajectories=options.trajectories, dt=options.dt, max_time=options.max_time)

    def job(self, config):
        return replace(super().job(config), refine=self.refine, start=self.start)

    def summary(self):
        if self.outcome is None:
            return []
        record, lines = self.outcome.record, [f"  {self.outcome.batch}"]
        if not self.outcome.batch.exponential_like:
            low, high = EXPONENTIAL_CV
            lines.append(f"  hitting times not exponential like, coefficient of variation outside {low:g}..{high:g}")
        for name, log_time, ratio in (
            ("determinant form", record.log_pred_det_form, record.ratio_emp_over_pred_det),
            ("literal c_N form", record.log_pred_literal_cn, record.ratio_emp_over_pred_literal),
        ):
            if log_time is not None:
                shown = "n/a" if ratio is None else f"{ratio:.4f}"
                lines.append(f"  {name} prediction e^{log_time:.6g}, empirical / predicted = {shown}")
        if record.mean_oracle is not None:
            lines.append(f"  one particle reference mean {record.mean_oracle:.6g}")
        if record.passing_convention is not None:
            lines.append(f"  passing convention: {record.passing_convention}")
        if self.outcome.refinement is not None:
            refinement = self.outcome.refinement
            verdict = "pass" if refinement.passed else "fail"
            lines.append(f"  halving dt shifts the mean by {100 * refinement.shift:.2f}% ({verdict})")
        return lines + super().summary()


__all__ = [
    "SimulateCommand",
]
