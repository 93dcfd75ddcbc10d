"""
One result row: the instance, the closed form quantities, the capacity bracket, the simulated mean and the comparisons.

Pass flags only depend on the numeric fields that also end up in the CSV, :meth:`ResultRecord.compute_flags` recomputes
them from a loaded record. Every log scale quantity is written both as a log value and as a linear value.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field, fields, replace

from metachain.chain.spectral import (
    LOG_FLOAT_MAX,
    predict_mean_time_limit,
    predict_mean_time_rescaled,
    prefactor,
)

CSV_COLUMNS = (
    "n",
    "mu",
    "gamma",
    "epsilon",
    "rho",
    "dt",
    "c_n_product",
    "det_ratio",
    "v_mu",
    "log_cap_lower",
    "log_cap_upper",
    "log_cap_asymptotic",
    "mean_emp",
    "ci95_low",
    "ci95_high",
    "censored",
    "pred_det_form",
    "pred_literal_cn",
    "ratio_emp_over_pred_det",
    "ratio_emp_over_pred_literal",
    "seed",
    # linear values of the log capacities, log values of the predictions, empty on overflow
    "cap_lower",
    "cap_upper",
    "cap_asymptotic",
    "log_pred_det_form",
    "log_pred_literal_cn",
    "cv",
)

ORACLE_1D_TOLERANCE = 0.05
PREDICTION_TOLERANCE = 0.15
_Z95 = 1.959963984540054


def _linear(log_value):
    if log_value is None or log_value >= LOG_FLOAT_MAX:
        return None
    return math.exp(log_value)


def _format(value):
    if value is None:
        return ""
    if isinstance(value, bool):
        return str(int(value))
    if isinstance(value, int):
        return str(value)
    return repr(float(value))


@dataclass(frozen=True)
class ResultRecord:
    n: int
    mu: float
    gamma: float
    epsilon: float
    seed: int
    rho: float = 0.2
    dt: float | None = None
    c_n_product: float | None = None
    det_ratio: float | None = None
    v_mu: float | None = None
    log_cap_lower: float | None = None
    log_cap_upper: float | None = None
    log_cap_asymptotic: float | None = None
    cap_lower_error: float | None = None
    cap_upper_error: float | None = None
    log_cap_oracle: float | None = None
    mean_emp: float | None = None
    ci95_low: float | None = None
    ci95_high: float | None = None
    censored: int | None = None
    n_traj: int | None = None
    cv: float | None = None
    mean_oracle: float | None = None
    log_pred_det_form: float | None = None
    log_pred_literal_cn: float | None = None
    log_pred_limit: float | None = None
    status: str = "ok"
    error: str | None = None
    flags: dict = field(default_factory=dict)
    wall_clock: float | None = None
    versions: dict = field(default_factory=dict)
    config_hash: str | None = None

    @classmethod
    def for_params(cls, p, seed, rho, predictions=None):
        """Start a record with the closed form quantities of an instance, ``predictions`` picks the conventions."""
        chosen = {"determinant": True, "literal": True, "limit": True} if predictions is None else predictions
        report = prefactor(p)
        rescaled = predict_mean_time_rescaled(p)
        return cls(
            n=p.n,
            mu=p.mu,
            gamma=p.gamma,
            epsilon=p.epsilon,
            seed=int(seed),
            rho=rho,
            c_n_product=report.c_n_product,
            det_ratio=report.det_ratio,
            v_mu=report.v_mu,
            log_pred_det_form=rescaled.determinant.log_time if chosen.get("determinant") else None,
            log_pred_literal_cn=rescaled.literal.log_time if chosen.get("literal") else None,
            log_pred_limit=predict_mean_time_limit(p).log_time if chosen.get("limit") else None,
        )

    def with_simulation(self, batch, mean_oracle=None):
        return replace(
            self,
            dt=batch.dt,
            mean_emp=batch.mean,
            ci95_low=batch.ci95_low,
            ci95_high=batch.ci95_high,
            censored=batch.censored_count,
            n_traj=batch.n_traj,
            cv=batch.coefficient_of_variation,
            mean_oracle=mean_oracle,
        )

    def with_capacity(self, bracket, log_oracle=None):
        return replace(
            self,
            log_cap_lower=bracket.lower,
            log_cap_upper=bracket.upper,
            log_cap_asymptotic=bracket.asymptotic,
            cap_lower_error=bracket.lower_error,
            cap_upper_error=bracket.upper_error,
            log_cap_oracle=log_oracle,
        )

    def failed(self, error):
        return replace(self, status="failed", error=f"{type(error).__name__}: {error}")

    def finalize(self, **kwargs):
        done = replace(self, **kwargs)
        return replace(done, flags=done.compute_flags())

    @property
    def cap_lower(self):
        return _linear(self.log_cap_lower)

    @property
    def cap_upper(self):
        return _linear(self.log_cap_upper)

    @property
    def cap_asymptotic(self):
        return _linear(self.log_cap_asymptotic)

    @property
    def pred_det_form(self):
        return _linear(self.log_pred_det_form)

    @property
    def pred_literal_cn(self):
        return _linear(self.log_pred_literal_cn)

    @property
    def pred_limit(self):
        return _linear(self.log_pred_limit)

    def _ratio(self, log_prediction):
        if self.mean_emp is None or log_prediction is None or not self.mean_emp > 0:
            return None
        return math.exp(math.log(self.mean_emp) - log_prediction)

    @property
    def ratio_emp_over_pred_det(self):
        return self._ratio(self.log_pred_det_form)

    @property
    def ratio_emp_over_pred_literal(self):
        return self._ratio(self.log_pred_literal_cn)

    @property
    def std_error(self):
        if self.ci95_low is None or self.ci95_high is None:
            return None
        return (self.ci95_high - self.ci95_low) / (2.0 * _Z95)

    def compute_flags(self):
        flags = {}
        if self.mean_emp is not None and self.mean_oracle is not None:
            allowed = max(ORACLE_1D_TOLERANCE * self.mean_oracle, 2.0 * self.std_error)
            flags["oracle_1d"] = abs(self.mean_emp - self.mean_oracle) <= allowed
        ratios = {"det_form": self.ratio_emp_over_pred_det, "literal_cn": self.ratio_emp_over_pred_literal}
        for name, ratio in ratios.items():
            if ratio is not None:
                flags[name] = abs(ratio - 1.0) <= PREDICTION_TOLERANCE
        if "det_form" in flags and "literal_cn" in flags:
            flags["arbitrated"] = flags["det_form"] != flags["literal_cn"]
        if self.log_cap_lower is not None and self.log_cap_upper is not None:
            spread = 2.0 * math.hypot(self.cap_lower_error or 0.0, self.cap_upper_error or 0.0)
            flags["capacity_ordered"] = self.log_cap_lower - self.log_cap_upper <= spread
            if self.log_cap_oracle is not None:
                flags["oracle_in_bracket"] = (
                    self.log_cap_lower - spread <= self.log_cap_oracle <= self.log_cap_upper + spread
                )
        return flags

    @property
    def passing_convention(self):
        """The prediction convention the simulation singles out, if exactly one is within tolerance."""
        if not self.flags.get("arbitrated"):
            return None
        return "determinant" if self.flags["det_form"] else "literal"

    def csv_row(self):
        return [_format(getattr(self, column)) for column in CSV_COLUMNS]

    def to_dict(self):
        return asdict(self)

    @classmethod
    def from_dict(cls, data):
        known = {f.name for f in fields(cls)}
        return cls(**{k: v for k, v in data.items() if k in known})


__all__ = [
    "CSV_COLUMNS",
    "ResultRecord",
]
