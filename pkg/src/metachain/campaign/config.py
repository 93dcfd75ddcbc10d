"""
Campaign documents, a JSON object such as::

    {
      "seed": 7,
      "tasks": ["simulate", "capacity"],
      "instances": [{"n": 3, "mu": 2, "epsilon": 0.05}],
      "budgets": {"trajectories": 2000, "samples": 20000},
      "predictions": {"determinant": true, "literal": true, "limit": true}
    }
"""

from __future__ import annotations

import hashlib
import json
import re
from dataclasses import asdict, dataclass, field
from pathlib import Path

from metachain.chain.potential import ChainParams
from metachain.util.error import ConfigError, MetachainError

TASKS = ("simulate", "capacity")
PREDICTIONS = ("determinant", "literal", "limit")


@dataclass(frozen=True)
class Instance:
    n: int
    mu: float
    epsilon: float

    def params(self):
        return ChainParams.create(self.n, self.mu, self.epsilon)

    @property
    def key(self):
        """Stable file name of the instance record."""
        digest = hashlib.sha256(json.dumps(asdict(self), sort_keys=True).encode("utf-8")).hexdigest()
        return f"n{self.n}-{digest[:16]}"


@dataclass(frozen=True)
class Budgets:
    trajectories: int = 2000
    samples: int = 20_000
    order: int = 32
    rho: float = 0.2
    dt: float | None = None
    max_time: float | None = None
    grid_step: float | None = None
    oracle: bool = True


@dataclass(frozen=True)
class CampaignConfig:
    instances: tuple = ()
    tasks: tuple = TASKS
    budgets: Budgets = field(default_factory=Budgets)
    predictions: dict = field(default_factory=lambda: dict.fromkeys(PREDICTIONS, True))
    seed: int = 0
    out: str | None = None
    source: str | None = None

    @classmethod
    def from_file(cls, path):
        path = Path(path)
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as exception:
            msg = f"cannot read campaign config: {exception}"
            raise ConfigError(msg, source=str(path)) from exception
        return cls.from_text(text, source=str(path))

    @classmethod
    def from_text(cls, text, source=None):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exception:
            raise ConfigError(exception.msg, source=source, line=exception.lineno) from exception
        return _Reader(text, source).read(data)

    def canonical(self):
        """Everything that influences the results (the output location does not)."""
        return {
            "instances": [asdict(i) for i in self.instances],
            "tasks": list(self.tasks),
            "budgets": asdict(self.budgets),
            "predictions": dict(sorted(self.predictions.items())),
            "seed": self.seed,
        }

    @property
    def config_hash(self):
        canonical = json.dumps(self.canonical(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


class _Reader:
    def __init__(self, text, source) -> None:
        self.text = text
        self.source = source

    def error(self, msg, field_name):
        key = field_name.rsplit(".", 1)[-1].split("[", 1)[0]
        match = re.search(rf'"{re.escape(key)}"\s*:', self.text)
        line = self.text.count("\n", 0, match.start()) + 1 if match else None
        return ConfigError(msg, source=self.source, field=field_name, line=line)

    def read(self, data):
        if not isinstance(data, dict):
            raise self.error("campaign config must be a JSON object", "<root>")
        allowed = {"instances", "tasks", "budgets", "predictions", "seed", "out"}
        for key in data:
            if key not in allowed:
                raise self.error(f"unknown key {key!r}", key)
        seed = self._integer(data.get("seed", 0), "seed", minimum=0)
        tasks = data.get("tasks", list(TASKS))
        if not isinstance(tasks, list) or any(t not in TASKS for t in tasks):
            raise self.error(f"tasks must be a list drawn from {', '.join(TASKS)}", "tasks")
        out = data.get("out")
        if out is not None and not isinstance(out, str):
            raise self.error("out must be a path", "out")
        return CampaignConfig(
            instances=tuple(self._instances(data.get("instances", []))),
            tasks=tuple(tasks),
            budgets=self._budgets(data.get("budgets", {})),
            predictions=self._predictions(data.get("predictions", {})),
            seed=seed,
            out=out,
            source=self.source,
        )

    def _instances(self, raw):
        if not isinstance(raw, list):
            raise self.error("instances must be a list", "instances")
        for index, item in enumerate(raw):
            where = f"instances[{index}]"
            if not isinstance(item, dict) or set(item) - {"n", "mu", "epsilon"}:
                raise self.error("an instance is an object with keys n, mu and epsilon", where)
            n = self._integer(item.get("n"), f"{where}.n", minimum=1)
            mu = self._number(item.get("mu", 2.0), f"{where}.mu")
            epsilon = self._number(item.get("epsilon"), f"{where}.epsilon", positive=True)
            instance = Instance(n=n, mu=mu, epsilon=epsilon)
            try:
                instance.params()
            except MetachainError as exception:
                raise self.error(str(exception), where) from exception
            yield instance

    def _budgets(self, raw):
        if not isinstance(raw, dict):
            raise self.error("budgets must be an object", "budgets")
        defaults = Budgets()
        values = {}
        for key, value in raw.items():
            where = f"budgets.{key}"
            if not hasattr(defaults, key):
                raise self.error(f"unknown budget {key!r}", where)
            if key == "oracle":
                if not isinstance(value, bool):
                    raise self.error("must be true or false", where)
                values[key] = value
            elif key in {"trajectories", "samples", "order"}:
                values[key] = self._integer(value, where, minimum=1)
            elif value is None and key in {"dt", "max_time", "grid_step"}:
                values[key] = None
            else:
                values[key] = self._number(value, where, positive=True)
        return Budgets(**{**asdict(defaults), **values})

    def _predictions(self, raw):
        if not isinstance(raw, dict) or set(raw) - set(PREDICTIONS):
            raise self.error(f"predictions toggles are {', '.join(PREDICTIONS)}", "predictions")
        if any(not isinstance(v, bool) for v in raw.values()):
            raise self.error("prediction toggles must be true or false", "predictions")
        return {**dict.fromkeys(PREDICTIONS, True), **raw}

    def _integer(self, value, where, minimum):
        if isinstance(value, bool) or not isinstance(value, int) or value < minimum:
            raise self.error(f"must be an integer >= {minimum}, got {value!r}", where)
        return value

    def _number(self, value, where, positive=False):  # noqa: FBT002
        if isinstance(value, bool) or not isinstance(value, (int, float)) or (positive and not value > 0):
            kind = "a positive number" if positive else "a number"
            raise self.error(f"must be {kind}, got {value!r}", where)
        return float(value)


__all__ = [
    "PREDICTIONS",
    "TASKS",
    "Budgets",
    "CampaignConfig",
    "Instance",
]
