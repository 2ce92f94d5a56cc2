from __future__ import annotations

import os
from dataclasses import dataclass, fields, replace

ENV_PREFIX = "CGROUPS_"


@dataclass(frozen=True)
class Limits:
    """Resource caps and the seed used by sampled checks.

    Every algorithm that can blow up takes one of these; ``DEFAULT_LIMITS``
    is used when none is passed.
    """

    order_cap: int = 4096
    maximal_subgroup_cap: int = 256
    iso_cap: int = 256
    max_cosets: int = 65536
    rank_k_cap: int = 6
    rank_certify_cap: int = 128
    seed: int = 0

    def __post_init__(self):
        for f in fields(self):
            if f.name != "seed" and getattr(self, f.name) < 1:
                raise ValueError(f"{f.name} must be positive")

    def with_overrides(self, **kwargs) -> "Limits":
        return replace(self, **{k: v for k, v in kwargs.items() if v is not None})

    @classmethod
    def from_env(cls, environ=None) -> "Limits":
        environ = os.environ if environ is None else environ
        values = {}
        for f in fields(cls):
            raw = environ.get(ENV_PREFIX + f.name.upper())
            if raw is not None:
                values[f.name] = int(raw)
        return cls(**values)


DEFAULT_LIMITS = Limits()
