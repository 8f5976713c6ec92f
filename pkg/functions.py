"""
Integrands on (0, inf)

Function1D couples a vectorised evaluator with the metadata the quadrature
engines dispatch on: tail decay class, endpoint singularity exponents and,
for oscillatory functions, a factorisation envelope(x) * kernel(freq * x).

Everything here is immutable; the algebra helpers return new functions.
"""

import math
from dataclasses import dataclass, replace
from enum import Enum
from typing import Callable, Dict, Optional, Sequence, Tuple

import numpy as np

import specfun


class DecayKind(Enum):
    """Tail behaviour of an integrand, from fastest to slowest."""
    GAUSSIAN = "gaussian"
    EXPONENTIAL = "exponential"
    ALGEBRAIC = "algebraic"
    OSCILLATORY = "oscillatory"


_DECAY_RANK = {
    DecayKind.GAUSSIAN: 0,
    DecayKind.EXPONENTIAL: 1,
    DecayKind.ALGEBRAIC: 2,
    DecayKind.OSCILLATORY: 3,
}


@dataclass(frozen=True)
class Decay:
    """Decay class; `exponent` is p in |f| ~ x^-p for algebraic tails."""
    kind: DecayKind
    exponent: float = 0.0
    period_hint: Optional[float] = None

    def __post_init__(self):
        if not math.isfinite(self.exponent):
            raise ValueError(f"decay exponent must be finite, got {self.exponent}")
        if self.period_hint is not None and not self.period_hint > 0:
            raise ValueError(f"period hint must be positive, got {self.period_hint}")

    @classmethod
    def gaussian(cls) -> "Decay":
        return cls(DecayKind.GAUSSIAN)

    @classmethod
    def exponential(cls) -> "Decay":
        return cls(DecayKind.EXPONENTIAL)

    @classmethod
    def algebraic(cls, p: float) -> "Decay":
        return cls(DecayKind.ALGEBRAIC, float(p))

    @classmethod
    def oscillatory(cls, period_hint: Optional[float] = None) -> "Decay":
        return cls(DecayKind.OSCILLATORY, 0.0, period_hint)

    @property
    def is_fast(self) -> bool:
        return self.kind in (DecayKind.GAUSSIAN, DecayKind.EXPONENTIAL)

    @property
    def power(self) -> float:
        """Algebraic exponent, infinite for faster-than-algebraic tails."""
        if self.is_fast:
            return math.inf
        if self.kind is DecayKind.ALGEBRAIC:
            return self.exponent
        return 0.0

    def times_power(self, a: float) -> "Decay":
        """Decay of x^a f(x)."""
        if self.kind is DecayKind.ALGEBRAIC:
            return Decay.algebraic(self.exponent - a)
        return self

    def describe(self) -> str:
        if self.kind is DecayKind.ALGEBRAIC:
            return f"algebraic(p={self.exponent:g})"
        if self.kind is DecayKind.OSCILLATORY and self.period_hint is not None:
            return f"oscillatory(period={self.period_hint:g})"
        return self.kind.value


def weakest(a: Decay, b: Decay) -> Decay:
    """The slower of two tails, as for a sum of the two functions."""
    if a.kind is b.kind is DecayKind.ALGEBRAIC:
        return a if a.exponent <= b.exponent else b
    return a if _DECAY_RANK[a.kind] >= _DECAY_RANK[b.kind] else b


@dataclass(frozen=True)
class Singularity:
    """Endpoint behaviour |f| ~ x^-exponent; zero means regular.

    A negative exponent records a zero of that order at the endpoint.
    """
    exponent: float = 0.0

    @property
    def integrable(self) -> bool:
        return self.exponent < 1.0

    def shifted(self, a: float) -> "Singularity":
        """Singularity of x^a f(x), clamped at regular."""
        return Singularity(max(0.0, self.exponent - a))


REGULAR = Singularity(0.0)


class KernelKind(Enum):
    SIN = "sin"
    COS = "cos"
    BESSEL_J = "bessel_j"


@dataclass(frozen=True)
class Kernel:
    """Oscillatory kernel sin(t), cos(t) or J_nu(t)."""
    kind: KernelKind
    order: float = 0.0

    def __call__(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        if self.kind is KernelKind.SIN:
            return np.sin(t)
        if self.kind is KernelKind.COS:
            return np.cos(t)
        return specfun.j_kernel(self.order, t)

    def zeros(self, count: int) -> np.ndarray:
        """First `count` positive zeros."""
        k = np.arange(1, count + 1, dtype=float)
        if self.kind is KernelKind.SIN:
            return math.pi * k
        if self.kind is KernelKind.COS:
            return math.pi * (k - 0.5)
        return specfun.bessel_j_zeros(self.order, count)

    @property
    def order_at_zero(self) -> float:
        """Exponent a in kernel(t) ~ t^a as t -> 0."""
        if self.kind is KernelKind.SIN:
            return 1.0
        if self.kind is KernelKind.COS:
            return 0.0
        return specfun.j_leading_order(self.order)

    @property
    def decay(self) -> float:
        """Algebraic decay of the kernel amplitude."""
        return 0.5 if self.kind is KernelKind.BESSEL_J else 0.0

    def describe(self) -> str:
        if self.kind is KernelKind.BESSEL_J:
            return f"J_{self.order:g}"
        return self.kind.value


@dataclass(frozen=True)
class Oscillation:
    """Factorisation f(x) = envelope(x) * kernel(freq * x)."""
    kernel: Kernel
    freq: float
    envelope: "Function1D"


@dataclass(frozen=True)
class Function1D:
    """Real integrand on (0, inf) with quadrature metadata."""
    eval: Callable[[np.ndarray], np.ndarray]
    decay: Decay
    singularity: Singularity = REGULAR
    upper_singularity: Singularity = REGULAR
    oscillation: Optional[Oscillation] = None
    name: str = "f"

    def __call__(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        return np.broadcast_to(np.asarray(self.eval(x), dtype=float), x.shape)

    def scalar(self, x: float) -> float:
        return float(self(np.array([x]))[0])

    def describe(self) -> Dict[str, object]:
        info = {
            "name": self.name,
            "decay": self.decay.describe(),
            "singularity": self.singularity.exponent,
        }
        if self.oscillation is not None:
            info["kernel"] = self.oscillation.kernel.describe()
            info["freq"] = self.oscillation.freq
        return info


def times_power(f: Function1D, a: float, name: Optional[str] = None) -> Function1D:
    """x^a f(x)."""
    if a == 0:
        return f
    oscillation = None
    if f.oscillation is not None:
        o = f.oscillation
        oscillation = Oscillation(o.kernel, o.freq, times_power(o.envelope, a))
    return Function1D(
        eval=lambda x: np.power(x, a) * f.eval(x),
        decay=f.decay.times_power(a),
        singularity=f.singularity.shifted(a),
        upper_singularity=f.upper_singularity,
        oscillation=oscillation,
        name=name or f"x^{a:g}*{f.name}",
    )


def scale(f: Function1D, k: float, name: Optional[str] = None) -> Function1D:
    """k f(x)."""
    oscillation = None
    if f.oscillation is not None:
        o = f.oscillation
        oscillation = Oscillation(o.kernel, o.freq, scale(o.envelope, k))
    return replace(
        f,
        eval=lambda x: k * f.eval(x),
        oscillation=oscillation,
        name=name or f"{k:g}*{f.name}",
    )


def compose_sqrt(f: Function1D, name: Optional[str] = None) -> Function1D:
    """f(sqrt(x)); Gaussian tails become exponential."""
    kind = f.decay.kind
    if kind is DecayKind.ALGEBRAIC:
        decay = Decay.algebraic(f.decay.exponent / 2.0)
    elif kind is DecayKind.OSCILLATORY:
        decay = Decay.oscillatory()
    else:
        # exp(-sqrt(x)) is slower than exponential but still double-exponentially
        # integrable after the exp-sinh map.
        decay = Decay.exponential()
    return Function1D(
        eval=lambda x: f.eval(np.sqrt(x)),
        decay=decay,
        singularity=Singularity(f.singularity.exponent / 2.0),
        name=name or f"{f.name}(sqrt x)",
    )


def compose_square(f: Function1D, name: Optional[str] = None) -> Function1D:
    """f(x^2); exponential tails become Gaussian."""
    kind = f.decay.kind
    if kind is DecayKind.ALGEBRAIC:
        decay = Decay.algebraic(2.0 * f.decay.exponent)
    elif kind is DecayKind.OSCILLATORY:
        decay = Decay.oscillatory()
    else:
        decay = Decay.gaussian()
    return Function1D(
        eval=lambda x: f.eval(np.square(x)),
        decay=decay,
        singularity=Singularity(2.0 * f.singularity.exponent),
        name=name or f"{f.name}(x^2)",
    )


def combine(terms: Sequence[Tuple[float, Function1D]], name: Optional[str] = None) -> Function1D:
    """Linear combination sum(c_i f_i)."""
    if not terms:
        raise ValueError("combine needs at least one term")
    coefficients = [float(c) for c, _ in terms]
    functions = [f for _, f in terms]

    decay = functions[0].decay
    for f in functions[1:]:
        decay = weakest(decay, f.decay)
    singularity = Singularity(max(f.singularity.exponent for f in functions))
    upper = Singularity(max(f.upper_singularity.exponent for f in functions))

    oscillation = None
    oscillating = [f for f in functions if f.oscillation is not None]
    if oscillating:
        first = oscillating[0].oscillation
        same = all(f.oscillation is not None
                   and f.oscillation.kernel == first.kernel
                   and f.oscillation.freq == first.freq for f in functions)
        if not same:
            raise ValueError("cannot combine functions with different oscillations")
        envelope = combine([(c, f.oscillation.envelope) for c, f in terms])
        oscillation = Oscillation(first.kernel, first.freq, envelope)

    def evaluate(x):
        total = np.zeros_like(x, dtype=float)
        for c, f in zip(coefficients, functions):
            total = total + c * f.eval(x)
        return total

    return Function1D(
        eval=evaluate,
        decay=decay,
        singularity=singularity,
        upper_singularity=upper,
        oscillation=oscillation,
        name=name or " + ".join(f"{c:g}*{f.name}" for c, f in zip(coefficients, functions)),
    )


def product(f: Function1D, g: Function1D, decay: Decay,
            singularity: Optional[Singularity] = None, name: Optional[str] = None) -> Function1D:
    """f(x) g(x), evaluating g only where f is non-zero.

    The tail class of a product depends on more than the two factors' classes,
    so the caller states it.
    """
    def evaluate(x):
        x = np.asarray(x, dtype=float)
        first = np.broadcast_to(np.asarray(f.eval(x), dtype=float), x.shape)
        out = np.zeros(x.shape, dtype=float)
        live = first != 0.0
        if np.any(live):
            out[live] = first[live] * np.asarray(g(x[live]), dtype=float)
        return out

    if singularity is None:
        singularity = Singularity(f.singularity.exponent + g.singularity.exponent)
    return Function1D(eval=evaluate, decay=decay, singularity=singularity,
                      name=name or f"{f.name}*{g.name}")
