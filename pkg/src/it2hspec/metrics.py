"""Average information content (Shannon entropy in bits) of a gray-level
distribution. Higher means a richer, more detailed image."""

from dataclasses import dataclass, field

import numpy as np

from .histogram import ProbabilityHistogram


def aic(p: ProbabilityHistogram) -> float:
    """-sum(p * log2 p) over the levels with positive probability."""
    positive = p.p[p.p > 0]
    return float(-(positive * np.log2(positive)).sum()) + 0.0


@dataclass
class AICReport:
    """Entropy of the input and of each enhancement method's output."""

    input_aic: float
    methods: dict
    errors: dict = field(default_factory=dict)
    timings_ms: dict = field(default_factory=dict)
    warnings: list = field(default_factory=list)
