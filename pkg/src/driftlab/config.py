"""Run configuration: one place for every tunable the pipeline honors.

Config files are JSON with the same field names; CLI flags override file
values. All randomness in a run flows from `seed`.
"""

import json
from dataclasses import asdict, dataclass, field
from typing import Optional

from .fusion import ConfigError, FusionConfig

CLASSIFIER_KINDS = ("gaussian_nb", "gmm", "logistic")

DEFAULT_CLASSIFIER_PARAMS = {
    "components": 2,      # gmm mixture components
    "max_iter": 100,      # gmm EM iteration cap
    "tol": 1e-6,          # gmm EM log-likelihood gain cutoff
    "l2": 1e-3,           # logistic ridge strength
    "epochs": 200,        # logistic gradient steps
    "step": 0.1,          # logistic learning rate
    "quantile": 0.05,     # one-class density threshold quantile
}


@dataclass
class RunConfig:
    batch_size: int = 250
    rule: str = "product"
    measure: str = "modified_mc"
    threshold: float = 0.9
    classifier: str = "gaussian_nb"
    classifier_params: dict = field(default_factory=dict)
    decay_base: float = 2.0
    seed: int = 0
    horizon: Optional[int] = None   # optional slot cap

    def __post_init__(self):
        if self.batch_size < 1:
            raise ConfigError(f"batch_size must be >= 1, got {self.batch_size}")
        if self.classifier not in CLASSIFIER_KINDS:
            raise ConfigError(f"unknown classifier {self.classifier!r}")
        if self.decay_base <= 1:
            raise ConfigError(f"decay_base must exceed 1, got {self.decay_base}")
        # Threshold/rule/measure validation happens in FusionConfig.
        self.fusion()
        params = dict(DEFAULT_CLASSIFIER_PARAMS)
        params.update(self.classifier_params)
        self.classifier_params = params

    def fusion(self) -> FusionConfig:
        return FusionConfig(rule=self.rule, measure=self.measure,
                            threshold=self.threshold)

    def snapshot(self) -> dict:
        return asdict(self)

    def replaced(self, **kwargs) -> "RunConfig":
        data = self.snapshot()
        data.update(kwargs)
        return RunConfig(**data)


def load_config(path, overrides: Optional[dict] = None) -> RunConfig:
    with open(path) as fh:
        data = json.load(fh)
    known = set(RunConfig.__dataclass_fields__)
    unknown = set(data) - known
    if unknown:
        raise ConfigError(f"unknown config fields: {sorted(unknown)}")
    if overrides:
        data.update({k: v for k, v in overrides.items() if v is not None})
    try:
        return RunConfig(**data)
    except TypeError as exc:
        raise ConfigError(str(exc)) from exc
