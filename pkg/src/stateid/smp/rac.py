"""Random-access-code bound: sum_i lambda_i (1 - H(eps_i)) <= q."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence


def binary_entropy(x: float) -> float:
    if not 0.0 <= x <= 1.0 or math.isnan(x):
        raise ValueError(f"binary entropy needs x in [0, 1], got {x}")
    if x == 0.0 or x == 1.0:
        return 0.0
    return -x * math.log2(x) - (1.0 - x) * math.log2(1.0 - x)


@dataclass(frozen=True)
class PredictorSpec:
    """A predictor that answers with probability ``lam`` and errs with conditional probability ``eps``."""

    lam: float
    eps: float

    def __post_init__(self):
        for name in ("lam", "eps"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {v}")


def rac_bound(preds: Sequence[PredictorSpec], q: float) -> tuple[float, bool]:
    if q < 0:
        raise ValueError("q must be non-negative")
    lhs = math.fsum(p.lam * (1.0 - binary_entropy(p.eps)) for p in preds)
    return lhs, lhs <= q
