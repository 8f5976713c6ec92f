"""
Named test functions

The fixed library of integrands used by the identity catalog and the
`eval` command, each with exact decay and singularity metadata.
Parameters mu, nu and z are passed by keyword; unused ones are ignored.
"""

import math
from typing import Callable, Dict, List

import numpy as np

from functions import (
    REGULAR,
    Decay,
    Function1D,
    Kernel,
    KernelKind,
    Oscillation,
    Singularity,
)

_REGISTRY: Dict[str, Callable[..., Function1D]] = {}
_DESCRIPTIONS: Dict[str, str] = {}


class UnknownFunctionError(KeyError):
    """No corpus function under that name."""


def register(name: str, description: str):
    """Add a builder to the registry."""
    def decorator(builder: Callable[..., Function1D]) -> Callable[..., Function1D]:
        _REGISTRY[name] = builder
        _DESCRIPTIONS[name] = description
        return builder
    return decorator


def _positive(name: str, value: float) -> float:
    value = float(value)
    if not value > 0 or not math.isfinite(value):
        raise ValueError(f"{name} must be positive and finite, got {value}")
    return value


def _one(x):
    return np.ones_like(x, dtype=float)


def _reciprocal(x):
    return 1.0 / x


@register("one", "f(x) = 1")
def one(**_) -> Function1D:
    return Function1D(eval=_one, decay=Decay.algebraic(0.0), name="1")


@register("power", "f(x) = x^(mu-2)")
def power(mu: float = 0.5, **_) -> Function1D:
    a = float(mu) - 2.0
    return Function1D(
        eval=lambda x: np.power(x, a),
        decay=Decay.algebraic(-a),
        singularity=Singularity(max(0.0, -a)),
        name=f"x^{a:g}",
    )


@register("exp", "f(x) = exp(-x)")
def exp(**_) -> Function1D:
    return Function1D(eval=lambda x: np.exp(-x), decay=Decay.exponential(), name="exp(-x)")


@register("gauss", "f(x) = exp(-x^2)")
def gauss(**_) -> Function1D:
    return Function1D(eval=lambda x: np.exp(-np.square(x)), decay=Decay.gaussian(), name="exp(-x^2)")


@register("gauss_balanced", "f(x) = exp(-x^2) - 2 exp(-2x^2), zero first moment")
def gauss_balanced(**_) -> Function1D:
    def evaluate(x):
        q = np.square(x)
        return np.exp(-q) - 2.0 * np.exp(-2.0 * q)
    return Function1D(eval=evaluate, decay=Decay.gaussian(), name="exp(-x^2)-2exp(-2x^2)")


@register("sin_z", "f(x) = sin(z x)")
def sin_z(z: float = 1.0, **_) -> Function1D:
    z = _positive("z", z)
    envelope = Function1D(eval=_one, decay=Decay.algebraic(0.0), name="1")
    return Function1D(
        eval=lambda x: np.sin(z * x),
        decay=Decay.oscillatory(2.0 * math.pi / z),
        oscillation=Oscillation(Kernel(KernelKind.SIN), z, envelope),
        name=f"sin({z:g}x)",
    )


@register("sinc_z", "f(x) = sin(z x) / x")
def sinc_z(z: float = 1.0, **_) -> Function1D:
    z = _positive("z", z)
    envelope = Function1D(eval=_reciprocal, decay=Decay.algebraic(1.0),
                          singularity=Singularity(1.0), name="1/x")
    return Function1D(
        eval=lambda x: np.sin(z * x) / x,
        decay=Decay.oscillatory(2.0 * math.pi / z),
        oscillation=Oscillation(Kernel(KernelKind.SIN), z, envelope),
        name=f"sin({z:g}x)/x",
    )


@register("bessel_j", "f(x) = J_nu(z x)")
def bessel_j(nu: float = 0.0, z: float = 1.0, **_) -> Function1D:
    z = _positive("z", z)
    kernel = Kernel(KernelKind.BESSEL_J, float(nu))
    envelope = Function1D(eval=_one, decay=Decay.algebraic(0.0), name="1")
    return Function1D(
        eval=lambda x: kernel(z * x),
        decay=Decay.oscillatory(2.0 * math.pi / z),
        singularity=Singularity(max(0.0, -kernel.order_at_zero)),
        oscillation=Oscillation(kernel, z, envelope),
        name=f"J_{nu:g}({z:g}x)",
    )


@register("bessel_j_over_x", "f(x) = J_nu(z x) / x")
def bessel_j_over_x(nu: float = 0.0, z: float = 1.0, **_) -> Function1D:
    z = _positive("z", z)
    kernel = Kernel(KernelKind.BESSEL_J, float(nu))
    envelope = Function1D(eval=_reciprocal, decay=Decay.algebraic(1.0),
                          singularity=Singularity(1.0), name="1/x")
    return Function1D(
        eval=lambda x: kernel(z * x) / x,
        decay=Decay.oscillatory(2.0 * math.pi / z),
        singularity=Singularity(max(0.0, 1.0 - kernel.order_at_zero)),
        oscillation=Oscillation(kernel, z, envelope),
        name=f"J_{nu:g}({z:g}x)/x",
    )


@register("rational", "f(x) = 1 / (x^2 + z^2)")
def rational(z: float = 1.0, **_) -> Function1D:
    z2 = _positive("z", z) ** 2
    return Function1D(eval=lambda x: 1.0 / (np.square(x) + z2),
                      decay=Decay.algebraic(2.0), singularity=REGULAR,
                      name=f"1/(x^2+{z2:g})")


@register("shifted_reciprocal", "f(x) = 1 / (x + z^2)")
def shifted_reciprocal(z: float = 1.0, **_) -> Function1D:
    z2 = _positive("z", z) ** 2
    return Function1D(eval=lambda x: 1.0 / (x + z2), decay=Decay.algebraic(1.0),
                      name=f"1/(x+{z2:g})")


def get(name: str, mu: float = 0.5, nu: float = 0.0, z: float = 1.0) -> Function1D:
    """Build the named corpus function."""
    try:
        builder = _REGISTRY[name]
    except KeyError:
        raise UnknownFunctionError(f"unknown function '{name}'; choose from {', '.join(names())}") from None
    return builder(mu=mu, nu=nu, z=z)


def names() -> List[str]:
    return sorted(_REGISTRY)


def describe(name: str) -> str:
    if name not in _DESCRIPTIONS:
        raise UnknownFunctionError(f"unknown function '{name}'")
    return _DESCRIPTIONS[name]
