"""Exact, computable experiments on robust learning with constructed hypothesis classes."""

from .constructions import CONSTRUCTIONS, INF, construction
from .core import (
    BoundedOracle, FiniteDistribution, HypothesisFamily, PerturbationType, Predictor, Tri, ZooOracle,
    robust_loss_bounded, robust_loss_exact, robust_risk,
)
from .experiments import DemoReport, ExperimentConfig

__all__ = [
    "CONSTRUCTIONS", "INF", "construction", "BoundedOracle", "FiniteDistribution", "HypothesisFamily",
    "PerturbationType", "Predictor", "Tri", "ZooOracle", "robust_loss_bounded", "robust_loss_exact",
    "robust_risk", "DemoReport", "ExperimentConfig",
]
