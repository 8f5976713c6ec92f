"""
Integral transforms over Function1D

Each operator wraps f with its kernel into a new Function1D whose decay and
singularity metadata are recomputed, then hands it to the quadrature layer.

Folding table (s is the integration variable after folding):

    kind         integrand                       decay of result      singularity
    L2           s exp(-s^2) f(s/y) / y^2        gaussian             s_f - 1
    laplace      exp(-s) f(s/y) / y              exponential          s_f
    k            sqrt(s) K_nu(s) f(s/y) / y      exponential          s_f - 1/2 + |nu|
    glasser      f(x) / sqrt(x^2 + y^2)          p_f + 1              s_f
    widder       x f(x) / (x^2 + y^2)            p_f + 1              s_f - 1
    e1           exp(xy) E1(xy) f(x)             p_f + 1              s_f
    e21          x exp(x^2 y^2) E1(x^2 y^2) f(x) p_f + 1              s_f - 1
    fourier      f(x) sin|cos(y x)               zero partition       s_f
    hankel       sqrt(xy) f(x) J_nu(y x)         zero partition       s_f - 1/2 - nu

Gaussian and exponential tails of f pass through the algebraic kernels
unchanged. An f that carries its own oscillation keeps it through the
algebraic kernels, with the kernel moved into the envelope. Singularity
exponents are clamped at zero.
"""

import logging
import math
from enum import Enum
from typing import Callable, Dict, Optional

import numpy as np

import specfun
from functions import (
    REGULAR,
    Decay,
    DecayKind,
    Function1D,
    Kernel,
    KernelKind,
    Singularity,
    compose_sqrt,
    compose_square,
    product,
    scale,
    times_power,
)
from quadrature import (
    IntegrationResult,
    Tolerance,
    integrate_oscillatory,
    integrate_semi_infinite,
)

logger = logging.getLogger(__name__)

_TINY = float(np.finfo(float).tiny)


class TransformDomainError(ValueError):
    """Transform rejected before integration: divergent or outside its domain."""


class TransformKind(Enum):
    L2 = "l2"
    LAPLACE = "laplace"
    GLASSER = "glasser"
    FOURIER_SIN = "fourier_sin"
    FOURIER_COS = "fourier_cos"
    HANKEL = "hankel"
    K = "k"
    E1 = "e1"
    E21 = "e21"
    WIDDER = "widder"

    @property
    def needs_order(self) -> bool:
        return self in (TransformKind.HANKEL, TransformKind.K)

    @property
    def oscillatory(self) -> bool:
        return self in (TransformKind.FOURIER_SIN, TransformKind.FOURIER_COS, TransformKind.HANKEL)

    @classmethod
    def parse(cls, text: str) -> "TransformKind":
        key = text.strip().lower().replace("-", "_")
        for kind in cls:
            if kind.value == key:
                return kind
        raise ValueError(f"unknown transform '{text}'; choose from {', '.join(k.value for k in cls)}")


def _check_argument(y: float) -> float:
    y = float(y)
    if not (math.isfinite(y) and y > 0):
        raise TransformDomainError(f"transform argument must be positive and finite, got {y}")
    return y


def _check_order(nu: Optional[float]) -> float:
    if nu is None:
        raise TransformDomainError("this transform needs an order nu")
    nu = float(nu)
    if not math.isfinite(nu) or nu < -1.0:
        raise TransformDomainError(f"order must be finite and >= -1, got {nu}")
    return nu


def _check_singularity(singularity: Singularity, label: str) -> Singularity:
    if not singularity.integrable:
        raise TransformDomainError(f"{label} diverges at 0 (x^-{singularity.exponent:g})")
    return singularity


def _masked_product(weight: np.ndarray, f: Function1D, x: np.ndarray) -> np.ndarray:
    """weight * f(x), skipping f wherever the weight vanishes."""
    out = np.zeros_like(weight)
    live = weight != 0.0
    if np.any(live):
        out[live] = weight[live] * f(x[live])
    return out


# ---------------------------------------------------------------------------
# fast-decaying kernels, folded onto x = s / y
# ---------------------------------------------------------------------------

def _folded(f: Function1D, y: float, weight: Callable[[np.ndarray], np.ndarray],
            decay: Decay, singularity: Singularity, label: str,
            tol: Optional[Tolerance]) -> IntegrationResult:
    inv = 1.0 / y
    folded = Function1D(
        eval=lambda s: _masked_product(weight(s), f, s * inv),
        decay=decay,
        singularity=_check_singularity(singularity, label),
        name=label,
    )
    return integrate_semi_infinite(folded, tol or Tolerance())


def l2(f: Function1D, y: float, tol: Optional[Tolerance] = None) -> IntegrationResult:
    """L2{f; y} = int x exp(-x^2 y^2) f(x) dx."""
    y = _check_argument(y)
    result = _folded(f, y, lambda s: s * np.exp(-s * s), Decay.gaussian(),
                     f.singularity.shifted(1.0), f"L2[{f.name}]({y:g})", tol)
    return result * (1.0 / (y * y))


def laplace(f: Function1D, y: float, tol: Optional[Tolerance] = None) -> IntegrationResult:
    """L{f; y} = int exp(-x y) f(x) dx."""
    y = _check_argument(y)
    result = _folded(f, y, lambda s: np.exp(-s), Decay.exponential(),
                     f.singularity, f"L[{f.name}]({y:g})", tol)
    return result * (1.0 / y)


def k_transform(nu: float, f: Function1D, y: float, tol: Optional[Tolerance] = None) -> IntegrationResult:
    """K_nu{f; y} = int sqrt(xy) K_nu(xy) f(x) dx."""
    nu = _check_order(nu)
    y = _check_argument(y)
    singularity = Singularity(max(0.0, f.singularity.exponent - 0.5 + abs(nu)))
    result = _folded(f, y, lambda s: np.sqrt(s) * specfun.k_kernel(nu, s), Decay.exponential(),
                     singularity, f"K_{nu:g}[{f.name}]({y:g})", tol)
    return result * (1.0 / y)


# ---------------------------------------------------------------------------
# algebraic kernels, applied in the original variable
# ---------------------------------------------------------------------------

def _algebraic_kernel(f: Function1D, kernel: Callable[[np.ndarray], np.ndarray],
                      gain: float, zero_power: float, label: str,
                      tol: Optional[Tolerance]) -> IntegrationResult:
    """Integrate kernel * f for a kernel ~ x^zero_power at 0 and ~ x^-gain at inf."""
    if f.oscillation is not None:
        o = f.oscillation
        envelope = Function1D(
            eval=lambda x: kernel(x) * o.envelope.eval(x),
            decay=o.envelope.decay.times_power(-gain),
            singularity=o.envelope.singularity.shifted(zero_power),
            name=f"{label}.envelope",
        )
        if envelope.decay.power + o.kernel.decay <= 0.0:
            raise TransformDomainError(f"{label} does not converge: envelope {envelope.decay.describe()}")
        if envelope.singularity.exponent - o.kernel.order_at_zero >= 1.0:
            raise TransformDomainError(f"{label} diverges at 0")
        return integrate_oscillatory(envelope, o.kernel, o.freq, tol or Tolerance.for_oscillatory())

    decay = f.decay
    if decay.kind is DecayKind.ALGEBRAIC:
        decay = decay.times_power(-gain)
        if decay.exponent <= 1.0:
            raise TransformDomainError(
                f"{label} does not converge absolutely: f decays like x^-{f.decay.exponent:g}")
    wrapped = Function1D(
        eval=lambda x: kernel(x) * f.eval(x),
        decay=decay,
        singularity=_check_singularity(f.singularity.shifted(zero_power), label),
        name=label,
    )
    default = Tolerance.for_oscillatory() if decay.kind is DecayKind.OSCILLATORY else Tolerance()
    return integrate_semi_infinite(wrapped, tol or default)


def glasser(f: Function1D, y: float, tol: Optional[Tolerance] = None) -> IntegrationResult:
    """G{f; y} = int f(x) / sqrt(x^2 + y^2) dx."""
    y = _check_argument(y)
    return _algebraic_kernel(f, lambda x: 1.0 / np.hypot(x, y), 1.0, 0.0,
                             f"G[{f.name}]({y:g})", tol)


def widder(f: Function1D, y: float, tol: Optional[Tolerance] = None) -> IntegrationResult:
    """P{f; y} = int x f(x) / (x^2 + y^2) dx."""
    y = _check_argument(y)
    y2 = y * y
    return _algebraic_kernel(f, lambda x: x / (x * x + y2), 1.0, 1.0,
                             f"P[{f.name}]({y:g})", tol)


def e1_transform(f: Function1D, y: float, tol: Optional[Tolerance] = None) -> IntegrationResult:
    """E1{f; y} = int exp(xy) E1(xy) f(x) dx."""
    y = _check_argument(y)
    return _algebraic_kernel(f, lambda x: specfun.e1_scaled_kernel(np.maximum(x * y, _TINY)),
                             1.0, 0.0, f"E1[{f.name}]({y:g})", tol)


def e21_transform(f: Function1D, y: float, tol: Optional[Tolerance] = None) -> IntegrationResult:
    """E21{f; y} = int x exp(x^2 y^2) E1(x^2 y^2) f(x) dx."""
    y = _check_argument(y)
    y2 = y * y
    return _algebraic_kernel(f, lambda x: x * specfun.e1_scaled_kernel(np.maximum(x * x * y2, _TINY)),
                             1.0, 1.0, f"E21[{f.name}]({y:g})", tol)


# ---------------------------------------------------------------------------
# oscillatory kernels
# ---------------------------------------------------------------------------

def _oscillatory_kernel(envelope: Function1D, kernel: Kernel, y: float, label: str,
                        tol: Optional[Tolerance]) -> IntegrationResult:
    if envelope.decay.kind is DecayKind.OSCILLATORY:
        raise TransformDomainError(f"{label}: product of two oscillating factors")
    if envelope.decay.power + kernel.decay <= 0.0:
        raise TransformDomainError(f"{label}: integrand does not decay ({envelope.decay.describe()})")
    if envelope.singularity.exponent - kernel.order_at_zero >= 1.0:
        raise TransformDomainError(f"{label} diverges at 0")
    logger.debug("%s on the zero partition of %s", label, kernel.describe())
    return integrate_oscillatory(envelope, kernel, y, tol or Tolerance.for_oscillatory())


def fourier_sin(f: Function1D, y: float, tol: Optional[Tolerance] = None) -> IntegrationResult:
    """F_S{f; y} = int sin(xy) f(x) dx."""
    y = _check_argument(y)
    return _oscillatory_kernel(f, Kernel(KernelKind.SIN), y, f"F_S[{f.name}]({y:g})", tol)


def fourier_cos(f: Function1D, y: float, tol: Optional[Tolerance] = None) -> IntegrationResult:
    """F_C{f; y} = int cos(xy) f(x) dx."""
    y = _check_argument(y)
    return _oscillatory_kernel(f, Kernel(KernelKind.COS), y, f"F_C[{f.name}]({y:g})", tol)


def hankel(nu: float, f: Function1D, y: float, tol: Optional[Tolerance] = None) -> IntegrationResult:
    """H_nu{f; y} = int sqrt(xy) J_nu(xy) f(x) dx."""
    nu = _check_order(nu)
    y = _check_argument(y)
    if f.decay.kind is DecayKind.OSCILLATORY:
        raise TransformDomainError(f"H_{nu:g}[{f.name}]: product of two oscillating factors")
    envelope = scale(times_power(f, 0.5), math.sqrt(y), name=f"sqrt({y:g}x)*{f.name}")
    return _oscillatory_kernel(envelope, Kernel(KernelKind.BESSEL_J, nu), y,
                               f"H_{nu:g}[{f.name}]({y:g})", tol)


# ---------------------------------------------------------------------------
# relations between L2 and Laplace
# ---------------------------------------------------------------------------

def l2_via_laplace(f: Function1D, y: float, tol: Optional[Tolerance] = None) -> IntegrationResult:
    """L2{f; y} = (1/2) L{f(sqrt x); y^2}."""
    y = _check_argument(y)
    return 0.5 * laplace(compose_sqrt(f), y * y, tol)


def laplace_via_l2(f: Function1D, y: float, tol: Optional[Tolerance] = None) -> IntegrationResult:
    """L{f; y} = 2 L2{f(x^2); sqrt y}."""
    y = _check_argument(y)
    return 2.0 * l2(compose_square(f), math.sqrt(y), tol)


_OPERATORS: Dict[TransformKind, Callable[..., IntegrationResult]] = {
    TransformKind.L2: l2,
    TransformKind.LAPLACE: laplace,
    TransformKind.GLASSER: glasser,
    TransformKind.FOURIER_SIN: fourier_sin,
    TransformKind.FOURIER_COS: fourier_cos,
    TransformKind.E1: e1_transform,
    TransformKind.E21: e21_transform,
    TransformKind.WIDDER: widder,
}


def transform(kind: TransformKind, f: Function1D, y: float,
              tol: Optional[Tolerance] = None, order: Optional[float] = None) -> IntegrationResult:
    """Evaluate T{f; y} for any transform kind."""
    if kind is TransformKind.HANKEL:
        return hankel(order, f, y, tol)
    if kind is TransformKind.K:
        return k_transform(order, f, y, tol)
    if order is not None:
        raise TransformDomainError(f"{kind.value} takes no order")
    return _OPERATORS[kind](f, y, tol)


# ---------------------------------------------------------------------------
# transform images for nested pipelines
# ---------------------------------------------------------------------------

class TransformImage:
    """u -> T{f; a(u)} evaluated point by point and memoised.

    Keeps running statistics of the inner integrations so nested pipelines
    can account for them.
    """

    def __init__(self, kind: TransformKind, f: Function1D, tol: Tolerance,
                 order: Optional[float] = None,
                 argument: Optional[Callable[[float], float]] = None):
        self.kind = kind
        self.f = f
        self.tol = tol
        self.order = order
        self.argument = argument
        self.cache: Dict[float, IntegrationResult] = {}
        self.max_abs_err = 0.0
        self.unconverged = 0
        self.n_evals = 0

    def result(self, u: float) -> IntegrationResult:
        cached = self.cache.get(u)
        if cached is not None:
            return cached
        y = self.argument(u) if self.argument is not None else u
        result = transform(self.kind, self.f, y, self.tol, self.order)
        if not result.converged:
            self.unconverged += 1
            logger.debug("inner %s of %s at %g not converged (err %.2g)",
                         self.kind.value, self.f.name, y, result.abs_err)
        self.max_abs_err = max(self.max_abs_err, result.abs_err)
        self.n_evals += result.n_evals
        self.cache[u] = result
        return result

    def __call__(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        flat = x.ravel()
        out = np.empty(flat.shape, dtype=float)
        for i, u in enumerate(flat):
            out[i] = self.result(float(u)).value
        return out.reshape(x.shape)


def image(kind: TransformKind, f: Function1D, tol: Tolerance, decay: Decay,
          singularity: Singularity = REGULAR, order: Optional[float] = None,
          argument: Optional[Callable[[float], float]] = None,
          name: Optional[str] = None) -> Function1D:
    """The function u -> T{f; u} (or T{f; argument(u)}) as a Function1D.

    Tail and endpoint behaviour of an image depend on f, so the caller
    declares them.
    """
    if kind.needs_order:
        _check_order(order)
    evaluator = TransformImage(kind, f, tol, order, argument)
    return Function1D(eval=evaluator, decay=decay, singularity=singularity,
                      name=name or f"{kind.value}[{f.name}]")


def pairing_decay(f: Function1D) -> Decay:
    """Tail of f(x) G{g; x} for an integrable, non-oscillating g."""
    if f.decay.kind is DecayKind.OSCILLATORY:
        raise TransformDomainError(f"pairing with oscillatory {f.name} is not supported")
    return f.decay.times_power(-1.0)


def glasser_pairing(f: Function1D, g: Function1D, tol: Optional[Tolerance] = None,
                    inner: Optional[Tolerance] = None) -> IntegrationResult:
    """int f(x) G{g; x} dx, one side of the Glasser exchange identity."""
    tol = tol or Tolerance()
    inner = inner or tol.tightened(100.0)
    if g.decay.kind is DecayKind.OSCILLATORY:
        raise TransformDomainError(f"pairing with oscillatory {g.name} is not supported")
    g_image = image(TransformKind.GLASSER, g, inner, Decay.algebraic(1.0), name=f"G[{g.name}]")
    integrand = product(f, g_image, pairing_decay(f), f.singularity,
                        name=f"{f.name}*G[{g.name}]")
    return integrate_semi_infinite(integrand, tol)
