"""
Verifier configuration

Tolerance profiles for the identity catalog and the settings shared by the
command line front end. The active profile comes from an explicit name,
then GLASSER_VERIFY_PROFILE, then "default"; GLASSER_VERIFY_WORKERS
overrides the worker count.
"""

import os
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Dict, Optional

from quadrature import Tolerance

ENV_PROFILE = "GLASSER_VERIFY_PROFILE"
ENV_WORKERS = "GLASSER_VERIFY_WORKERS"


class TolClass(Enum):
    """Pass threshold class of an identity record."""
    SMOOTH = "smooth"
    OSCILLATORY = "oscillatory"
    NEAR_SINGULAR = "near_singular"


DEFAULT_THRESHOLDS = {
    TolClass.SMOOTH: 1e-8,
    TolClass.OSCILLATORY: 1e-6,
    TolClass.NEAR_SINGULAR: 1e-4,
}


class UnknownProfileError(KeyError):
    """No tolerance profile under that name."""


@dataclass(frozen=True)
class ToleranceProfile:
    """Quadrature tolerances and pass thresholds for one verification run."""
    name: str
    smooth: Tolerance
    oscillatory: Tolerance
    inner_factor: float = 100.0
    thresholds: Dict[TolClass, float] = field(default_factory=lambda: dict(DEFAULT_THRESHOLDS))
    residual_floor: float = 1e-10
    workers: int = 1

    def threshold(self, tol_class: TolClass) -> float:
        return self.thresholds[tol_class]

    def quadrature(self, oscillatory: bool = False) -> Tolerance:
        return self.oscillatory if oscillatory else self.smooth

    def inner(self, outer: Tolerance) -> Tolerance:
        """Tolerance for the inner transform of a nested pipeline."""
        return outer.tightened(self.inner_factor)

    def to_dict(self) -> Dict[str, object]:
        return {
            "name": self.name,
            "smooth": self.smooth.to_dict(),
            "oscillatory": self.oscillatory.to_dict(),
            "inner_factor": self.inner_factor,
            "thresholds": {k.value: v for k, v in self.thresholds.items()},
            "residual_floor": self.residual_floor,
        }


PROFILES: Dict[str, ToleranceProfile] = {
    "default": ToleranceProfile(
        name="default",
        smooth=Tolerance(),
        oscillatory=Tolerance.for_oscillatory(),
    ),
    "strict": ToleranceProfile(
        name="strict",
        smooth=Tolerance(rel=1e-11, abs=1e-13),
        oscillatory=Tolerance(rel=1e-9, abs=1e-13),
    ),
    "fast": ToleranceProfile(
        name="fast",
        smooth=Tolerance(rel=1e-8, abs=1e-10, max_evals=50_000),
        oscillatory=Tolerance(rel=1e-6, abs=1e-10, max_evals=50_000),
        thresholds={k: 10.0 * v for k, v in DEFAULT_THRESHOLDS.items()},
    ),
}


def load_profile(name: Optional[str] = None) -> ToleranceProfile:
    """Resolve a tolerance profile by name or from the environment."""
    name = name or os.environ.get(ENV_PROFILE) or "default"
    try:
        profile = PROFILES[name]
    except KeyError:
        raise UnknownProfileError(
            f"unknown profile '{name}'; choose from {', '.join(sorted(PROFILES))}") from None

    workers = os.environ.get(ENV_WORKERS)
    if workers:
        try:
            count = int(workers)
        except ValueError:
            raise ValueError(f"{ENV_WORKERS} must be an integer, got '{workers}'") from None
        profile = replace(profile, workers=max(1, count))
    return profile


class VerifierSettings:
    """Command line output settings."""

    def __init__(self):
        self.text_precision = 12
        self.output_formats = ["text", "json", "csv"]
        self.default_output = "text"
        self.rule_width = 50
