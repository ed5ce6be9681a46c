from .phase import phase_time, transmitted_phase
from .semiclassical import buttiker_landauer_strength, buttiker_landauer_time
from .averaging import BaselineModelTag, averaged_baseline, baseline_curve, baseline_evaluator, weighted_phase_time

__all__ = [
    "phase_time",
    "transmitted_phase",
    "buttiker_landauer_time",
    "buttiker_landauer_strength",
    "BaselineModelTag",
    "averaged_baseline",
    "baseline_curve",
    "baseline_evaluator",
    "weighted_phase_time",
]
